//! Generator series and echelon bases of modular form spaces for
//! SL2(Z), Gamma0(2), Gamma0(4), and the cusp forms of level one that
//! transform under the real character `chi` with `chi(S) = chi(T) = -1`.
//!
//! Graded rings used:
//!
//! | group     | generators                         |
//! |-----------|------------------------------------|
//! | SL2(Z)    | E4, E6                             |
//! | Gamma0(2) | X2 = 2 E2(2 tau) - E2(tau), E4     |
//! | Gamma0(4) | theta^4, F = sum_{n odd} sigma(n) q^n |
//!
//! Cusp forms are the principal ideal generated by `Delta`,
//! `eta(tau)^8 eta(2 tau)^8` and `eta(2 tau)^12` respectively, and the
//! `chi` cusp forms are `eta(tau)^12 * M_{k-6}(SL2(Z))`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactseries::{
    eta_product, mul_embedding, sigma, sigma_odd, sigma_power, ExactRational, Grid, QExpansion,
    SeriesError,
};
use crate::linalg::rref_rows;

/// Extra twice-exponent units kept above the Sturm bound.
pub const SAFETY_MARGIN: u64 = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("unsupported Eisenstein weight {0}")]
    UnsupportedWeight(u32),
    #[error("weight {0} is odd; only even weights are supported")]
    OddWeight(u32),
    #[error("{what}: computed dimension {computed}, expected {expected}")]
    DimensionMismatch {
        what: String,
        computed: usize,
        expected: usize,
    },
    #[error("precision {precision} is below the required {required}")]
    InsufficientPrecision { precision: u64, required: u64 },
    #[error("character chi is only available on SL2(Z)")]
    CharacterNotSupported,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupLabel {
    #[serde(rename = "sl2z")]
    SL2Z,
    #[serde(rename = "g0_2")]
    Gamma0_2,
    #[serde(rename = "g0_4")]
    Gamma0_4,
}

impl GroupLabel {
    pub fn level(self) -> u64 {
        match self {
            GroupLabel::SL2Z => 1,
            GroupLabel::Gamma0_2 => 2,
            GroupLabel::Gamma0_4 => 4,
        }
    }

    /// Index of the group in SL2(Z).
    pub fn index(self) -> u64 {
        match self {
            GroupLabel::SL2Z => 1,
            GroupLabel::Gamma0_2 => 3,
            GroupLabel::Gamma0_4 => 6,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            GroupLabel::SL2Z => "sl2z",
            GroupLabel::Gamma0_2 => "g0_2",
            GroupLabel::Gamma0_4 => "g0_4",
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for GroupLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sl2z" | "SL2Z" | "1" => Ok(GroupLabel::SL2Z),
            "g0_2" | "gamma0_2" | "2" => Ok(GroupLabel::Gamma0_2),
            "g0_4" | "gamma0_4" | "4" => Ok(GroupLabel::Gamma0_4),
            _ => Err(format!("unknown group {s:?} (expected sl2z, g0_2 or g0_4)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CharacterLabel {
    Trivial,
    Chi,
}

impl CharacterLabel {
    pub fn label(self) -> &'static str {
        match self {
            CharacterLabel::Trivial => "trivial",
            CharacterLabel::Chi => "chi",
        }
    }
}

impl FromStr for CharacterLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "trivial" | "1" => Ok(CharacterLabel::Trivial),
            "chi" => Ok(CharacterLabel::Chi),
            _ => Err(format!("unknown character {s:?} (expected trivial or chi)")),
        }
    }
}

/// A space of forms given by an echelon basis of q-expansions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormSpace {
    pub group: GroupLabel,
    pub weight: u32,
    pub character: CharacterLabel,
    pub sturm: u64,
    pub precision: u64,
    pub basis: Vec<QExpansion>,
}

impl FormSpace {
    /// Echelonizes `generators` into a space. All inputs are truncated to
    /// `precision`.
    pub fn from_spanning_set(
        group: GroupLabel,
        weight: u32,
        character: CharacterLabel,
        sturm: u64,
        precision: u64,
        grid: Grid,
        generators: &[QExpansion],
    ) -> Self {
        FormSpace {
            group,
            weight,
            character,
            sturm,
            precision,
            basis: echelon_basis(generators, grid, precision),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn grid(&self) -> Grid {
        match self.character {
            CharacterLabel::Chi => Grid::Half,
            CharacterLabel::Trivial => Grid::Integer,
        }
    }

    /// Twice-exponents of the echelon pivots.
    pub fn pivots(&self) -> Vec<u64> {
        self.basis.iter().filter_map(|b| b.valuation()).collect()
    }

    /// Coordinates of `f` in the echelon basis, checked through the common
    /// precision of `f` and the space. `None` when `f` is not in the span.
    pub fn coordinates(&self, f: &QExpansion) -> Option<Vec<ExactRational>> {
        let coords: Vec<ExactRational> = self.pivots().iter().map(|&p| f.coeff(p)).collect();
        let recon = self.combination(&coords);
        let p = f.precision().min(recon.precision());
        if p < self.sturm {
            return None;
        }
        let lhs = f.truncate(p);
        let rhs = recon.truncate(p);
        let same = lhs.iter().eq(rhs.iter());
        same.then_some(coords)
    }

    pub fn contains(&self, f: &QExpansion) -> bool {
        self.coordinates(f).is_some()
    }

    /// Every basis vector of `other` lies in this space.
    pub fn contains_space(&self, other: &FormSpace) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// `sum_i c_i b_i`.
    pub fn combination(&self, coords: &[ExactRational]) -> QExpansion {
        assert_eq!(coords.len(), self.dim());
        let mut acc = QExpansion::zero(self.grid(), self.precision);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(c)).expect("basis shares the grid");
            }
        }
        acc
    }

    pub fn truncate(&self, precision: u64) -> FormSpace {
        FormSpace {
            precision: precision.min(self.precision),
            basis: self.basis.iter().map(|b| b.truncate(precision)).collect(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("space serialization is infallible")
    }
}

/// Reduced row-echelon basis of the span of `series`, pivoting on the
/// smallest twice-exponent; basis ordered by pivot.
pub fn echelon_basis(series: &[QExpansion], grid: Grid, precision: u64) -> Vec<QExpansion> {
    let cols = precision as usize;
    let mut rows: Vec<Vec<ExactRational>> = series
        .iter()
        .map(|f| {
            let mut row = vec![ExactRational::zero(); cols];
            for (m, c) in f.iter() {
                if (m as usize) < cols {
                    row[m as usize] = c.clone();
                }
            }
            row
        })
        .collect();
    rref_rows(&mut rows, cols);
    rows.into_iter()
        .map(|row| {
            QExpansion::from_coeffs(
                grid,
                precision,
                row.into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| (m as u64, c)),
            )
            .expect("rows come from series on this grid")
        })
        .collect()
}

/// Sturm bound in twice-exponent units: forms agreeing on keys below this
/// value are equal.
pub fn sturm_bound(group: GroupLabel, k: u32) -> u64 {
    2 * (k as u64 * group.index() / 12) + 2
}

/// Sturm bound for the `chi` forms on the half grid; they correspond to
/// Gamma0(4) forms under `q^(1/2) -> q`.
pub fn sturm_bound_chi(k: u32) -> u64 {
    sturm_bound(GroupLabel::Gamma0_4, k) / 2
}

/// Working precision: enough for `T_5` images to be determined.
pub fn default_precision(group: GroupLabel, k: u32) -> u64 {
    (5 * (sturm_bound(group, k) + SAFETY_MARGIN)).max(64)
}

pub fn default_precision_chi(k: u32) -> u64 {
    (5 * (sturm_bound_chi(k) + SAFETY_MARGIN)).max(64)
}

// Dimension formulas ----------------------------------------------------------

pub fn dim_modular(group: GroupLabel, k: u32) -> usize {
    if k % 2 == 1 {
        return 0;
    }
    let k = k as usize;
    match group {
        GroupLabel::SL2Z => {
            if k % 12 == 2 {
                k / 12
            } else {
                k / 12 + 1
            }
        }
        GroupLabel::Gamma0_2 => k / 4 + 1,
        GroupLabel::Gamma0_4 => k / 2 + 1,
    }
}

pub fn dim_cusp(group: GroupLabel, k: u32) -> usize {
    if k % 2 == 1 || k < 4 {
        return 0;
    }
    let k = k as usize;
    match group {
        GroupLabel::SL2Z => dim_modular(GroupLabel::SL2Z, k as u32).saturating_sub(1),
        GroupLabel::Gamma0_2 => k / 4 - 1,
        GroupLabel::Gamma0_4 => k / 2 - 2,
    }
}

// Generator series ------------------------------------------------------------

/// Normalized Eisenstein series `E_k` for `k` in {2, 4, 6}. `E_2` is only
/// quasi-modular.
pub fn eisenstein(k: u32, precision: u64) -> Result<QExpansion, GeneratorError> {
    let (factor, power): (i64, u32) = match k {
        2 => (-24, 1),
        4 => (240, 3),
        6 => (-504, 5),
        _ => return Err(GeneratorError::UnsupportedWeight(k)),
    };
    let n_max = precision.div_ceil(2);
    let terms = std::iter::once((0u64, ExactRational::one())).chain((1..n_max).map(|n| {
        (
            2 * n,
            ExactRational::from_integer(BigInt::from(factor) * sigma_power(n, power)),
        )
    }));
    Ok(QExpansion::from_coeffs(Grid::Integer, precision, terms)?)
}

/// `theta(tau) = sum_{n in Z} q^(n^2)`.
pub fn theta(precision: u64) -> QExpansion {
    let mut terms = vec![(0u64, ExactRational::one())];
    let mut n = 1u64;
    while 2 * n * n < precision {
        terms.push((2 * n * n, ExactRational::from_integer(2.into())));
        n += 1;
    }
    QExpansion::from_coeffs(Grid::Integer, precision, terms).expect("even keys")
}

pub fn theta4(precision: u64) -> QExpansion {
    theta(precision).pow(4).expect("integer grid")
}

/// `F = sum_{n odd} sigma(n) q^n`, weight 2 on Gamma0(4).
pub fn odd_divisor_form(precision: u64) -> QExpansion {
    let terms = (1..precision.div_ceil(2))
        .filter(|n| n % 2 == 1)
        .map(|n| (2 * n, ExactRational::from_integer(sigma(n).into())));
    QExpansion::from_coeffs(Grid::Integer, precision, terms).expect("even keys")
}

/// `X2 = 2 E2(2 tau) - E2(tau) = 1 + 24 sum sigma_odd(n) q^n`.
pub fn level_two_weight_two(precision: u64) -> QExpansion {
    let e2 = eisenstein(2, precision).expect("weight 2 is supported");
    let two = ExactRational::from_integer(2.into());
    e2.rescale_variable(2)
        .truncate(precision)
        .scale(&two)
        .sub(&e2)
        .expect("same grid")
}

/// X2 straight from its divisor-sum description.
pub fn level_two_weight_two_direct(precision: u64) -> QExpansion {
    let terms =
        std::iter::once((0u64, ExactRational::one())).chain((1..precision.div_ceil(2)).map(|n| {
            (
                2 * n,
                ExactRational::from_integer((24 * sigma_odd(n)).into()),
            )
        }));
    QExpansion::from_coeffs(Grid::Integer, precision, terms).expect("even keys")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingGenerator {
    pub name: &'static str,
    pub weight: u32,
    pub series: QExpansion,
}

/// The two generators of the graded ring of modular forms for `group`.
pub fn ring_generators(group: GroupLabel, precision: u64) -> Vec<RingGenerator> {
    let gen = |name, weight, series| RingGenerator {
        name,
        weight,
        series,
    };
    match group {
        GroupLabel::SL2Z => vec![
            gen("E4", 4, eisenstein(4, precision).expect("supported")),
            gen("E6", 6, eisenstein(6, precision).expect("supported")),
        ],
        GroupLabel::Gamma0_2 => vec![
            gen("X2", 2, level_two_weight_two(precision)),
            gen("E4", 4, eisenstein(4, precision).expect("supported")),
        ],
        GroupLabel::Gamma0_4 => vec![
            gen("theta^4", 2, theta4(precision)),
            gen("F", 2, odd_divisor_form(precision)),
        ],
    }
}

/// Exponent pairs `(a, b)` with `a * w1 + b * w2 = k`, `a` descending.
fn monomial_exponents(w1: u32, w2: u32, k: u32) -> Vec<(u32, u32)> {
    (0..=k / w1)
        .rev()
        .filter_map(|a| {
            let rest = k - a * w1;
            rest.is_multiple_of(w2).then_some((a, rest / w2))
        })
        .collect()
}

/// All weight-`k` monomials in the ring generators.
pub fn weight_monomials(group: GroupLabel, k: u32, precision: u64) -> Vec<QExpansion> {
    let gens = ring_generators(group, precision);
    let (g1, g2) = (&gens[0], &gens[1]);
    let exps = monomial_exponents(g1.weight, g2.weight, k);
    let max_a = exps.iter().map(|e| e.0).max().unwrap_or(0);
    let max_b = exps.iter().map(|e| e.1).max().unwrap_or(0);
    let powers = |s: &QExpansion, n: u32| {
        let mut out = vec![QExpansion::one(precision)];
        for i in 1..=n as usize {
            out.push(out[i - 1].mul(s).expect("integer grid"));
        }
        out
    };
    let p1 = powers(&g1.series, max_a);
    let p2 = powers(&g2.series, max_b);
    exps.iter()
        .map(|&(a, b)| p1[a as usize].mul(&p2[b as usize]).expect("integer grid"))
        .collect()
}

fn check_precision(precision: u64, required: u64) -> Result<(), GeneratorError> {
    if precision < required {
        return Err(GeneratorError::InsufficientPrecision {
            precision,
            required,
        });
    }
    Ok(())
}

fn check_dim(what: String, computed: usize, expected: usize) -> Result<(), GeneratorError> {
    if computed != expected {
        return Err(GeneratorError::DimensionMismatch {
            what,
            computed,
            expected,
        });
    }
    Ok(())
}

/// Echelon basis of `M_k(group)`, checked against the dimension formula.
pub fn basis_m(group: GroupLabel, k: u32, precision: u64) -> Result<FormSpace, GeneratorError> {
    if k % 2 == 1 {
        return Err(GeneratorError::OddWeight(k));
    }
    let sturm = sturm_bound(group, k);
    check_precision(precision, sturm)?;
    let monomials = weight_monomials(group, k, precision);
    let space = FormSpace::from_spanning_set(
        group,
        k,
        CharacterLabel::Trivial,
        sturm,
        precision,
        Grid::Integer,
        &monomials,
    );
    check_dim(
        format!("M_{k}({group})"),
        space.dim(),
        dim_modular(group, k),
    )?;
    Ok(space)
}

/// Generator of the cusp ideal and its weight.
pub fn cusp_generator(group: GroupLabel, precision: u64) -> (QExpansion, u32) {
    let (factors, w): (&[(u64, i64)], u32) = match group {
        GroupLabel::SL2Z => (&[(1, 24)], 12),
        GroupLabel::Gamma0_2 => (&[(1, 8), (2, 8)], 8),
        GroupLabel::Gamma0_4 => (&[(2, 12)], 6),
    };
    (
        eta_product(factors, precision).expect("valid eta product"),
        w,
    )
}

/// Echelon basis of `S_k(group)` as the cusp ideal generator times `M_{k-w}`.
pub fn basis_s(group: GroupLabel, k: u32, precision: u64) -> Result<FormSpace, GeneratorError> {
    if k % 2 == 1 {
        return Err(GeneratorError::OddWeight(k));
    }
    let sturm = sturm_bound(group, k);
    check_precision(precision, sturm)?;
    let (cusp, w) = cusp_generator(group, precision);
    let products: Vec<QExpansion> = if k < w {
        vec![]
    } else {
        weight_monomials(group, k - w, precision)
            .iter()
            .map(|m| cusp.mul(m).expect("integer grid"))
            .collect()
    };
    let space = FormSpace::from_spanning_set(
        group,
        k,
        CharacterLabel::Trivial,
        sturm,
        precision,
        Grid::Integer,
        &products,
    );
    check_dim(format!("S_{k}({group})"), space.dim(), dim_cusp(group, k))?;
    Ok(space)
}

/// Echelon basis of the level-one `chi` cusp forms: `eta^12 * M_{k-6}(SL2(Z))`
/// on the half grid.
pub fn basis_s_chi(k: u32, precision: u64) -> Result<FormSpace, GeneratorError> {
    if k % 2 == 1 {
        return Err(GeneratorError::OddWeight(k));
    }
    let sturm = sturm_bound_chi(k);
    check_precision(precision, sturm)?;
    let eta12 = eta_product(&[(1, 12)], precision)?;
    let products: Vec<QExpansion> = if k < 6 {
        vec![]
    } else {
        weight_monomials(GroupLabel::SL2Z, k - 6, precision)
            .iter()
            .map(|m| mul_embedding(&eta12, m))
            .collect::<Result<_, _>>()?
    };
    let space = FormSpace::from_spanning_set(
        GroupLabel::SL2Z,
        k,
        CharacterLabel::Chi,
        sturm,
        precision,
        Grid::Half,
        &products,
    );
    let expected = if k < 6 {
        0
    } else {
        dim_modular(GroupLabel::SL2Z, k - 6)
    };
    check_dim(format!("S_{k}(SL2Z, chi)"), space.dim(), expected)?;
    Ok(space)
}

/// Dispatch used by the command line.
pub fn space_for(
    group: GroupLabel,
    k: u32,
    character: CharacterLabel,
    cusp: bool,
    precision: u64,
) -> Result<FormSpace, GeneratorError> {
    match (character, cusp) {
        (CharacterLabel::Trivial, false) => basis_m(group, k, precision),
        (CharacterLabel::Trivial, true) => basis_s(group, k, precision),
        (CharacterLabel::Chi, true) if group == GroupLabel::SL2Z => basis_s_chi(k, precision),
        _ => Err(GeneratorError::CharacterNotSupported),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(x: i64) -> ExactRational {
        ExactRational::from_integer(x.into())
    }

    /// Number of ways to write n as an ordered sum of four squares of integers.
    fn r4_brute(n: i64) -> i64 {
        let b = (n as f64).sqrt() as i64 + 1;
        let mut count = 0;
        for a in -b..=b {
            for c in -b..=b {
                for d in -b..=b {
                    let rest = n - a * a - c * c - d * d;
                    if rest < 0 {
                        continue;
                    }
                    let e = (rest as f64).sqrt().round() as i64;
                    if e * e == rest {
                        count += if e == 0 { 1 } else { 2 };
                    }
                }
            }
        }
        count
    }

    #[test]
    fn theta4_counts_four_square_representations() {
        let t = theta4(42);
        for n in 0..21 {
            assert_eq!(t.coeff_q(n), int(r4_brute(n as i64)), "n = {n}");
        }
        assert_eq!(
            (0..5).map(|n| t.coeff_q(n)).collect::<Vec<_>>(),
            [1, 8, 24, 32, 24].map(int)
        );
    }

    #[test]
    fn theta4_plus_16f_matches_hand_sum() {
        let sum = theta4(22)
            .add(&odd_divisor_form(22).scale(&int(16)))
            .unwrap();
        for n in 0..11u64 {
            let hand = r4_brute(n as i64) + if n % 2 == 1 { 16 * sigma(n) as i64 } else { 0 };
            assert_eq!(sum.coeff_q(n), int(hand));
        }
    }

    #[test]
    fn generator_coefficients() {
        let f = odd_divisor_form(20);
        assert_eq!(
            [1, 3, 5, 7, 9].map(|n| f.coeff_q(n)),
            [1, 4, 6, 8, 13].map(int)
        );
        assert!(f.coeff_q(2).is_zero());
        let x2 = level_two_weight_two(20);
        assert_eq!(
            [0, 1, 2, 3].map(|n| x2.coeff_q(n)),
            [1, 24, 24, 96].map(int)
        );
        assert_eq!(x2, level_two_weight_two_direct(20));
    }

    #[test]
    fn eisenstein_examples() {
        assert_eq!(eisenstein(4, 10).unwrap().coeff_q(1), int(240));
        assert_eq!(eisenstein(2, 10).unwrap().coeff_q(2), int(-72));
        for k in [2, 4, 6] {
            assert_eq!(eisenstein(k, 10).unwrap().coeff_q(0), int(1));
        }
        assert_eq!(eisenstein(8, 10), Err(GeneratorError::UnsupportedWeight(8)));
    }

    #[test]
    fn eisenstein_cube_minus_square_is_delta() {
        let p = 40;
        let e4 = eisenstein(4, p).unwrap();
        let e6 = eisenstein(6, p).unwrap();
        let diff = e4.pow(3).unwrap().sub(&e6.pow(2).unwrap()).unwrap();
        let delta = eta_product(&[(1, 24)], p).unwrap();
        assert_eq!(diff, delta.scale(&int(1728)));
    }

    #[test]
    fn small_dimension_examples() {
        assert_eq!(basis_m(GroupLabel::Gamma0_4, 6, 80).unwrap().dim(), 4);
        assert_eq!(basis_m(GroupLabel::SL2Z, 2, 80).unwrap().dim(), 0);
        assert_eq!(basis_m(GroupLabel::SL2Z, 12, 80).unwrap().dim(), 2);
        assert_eq!(basis_s(GroupLabel::Gamma0_4, 4, 80).unwrap().dim(), 0);
        assert_eq!(basis_s(GroupLabel::Gamma0_2, 8, 80).unwrap().dim(), 1);
        assert_eq!(
            basis_m(GroupLabel::SL2Z, 3, 80),
            Err(GeneratorError::OddWeight(3))
        );
    }

    #[test]
    fn level_four_weight_six_cusp_form() {
        let s = basis_s(GroupLabel::Gamma0_4, 6, 40).unwrap();
        assert_eq!(s.dim(), 1);
        let printed = [(1, 1), (3, -12), (5, 54), (7, -88), (9, -99)];
        for (n, c) in printed {
            assert_eq!(s.basis[0].coeff_q(n), int(c));
        }
        let eta = eta_product(&[(2, 12)], 40).unwrap();
        assert_eq!(s.coordinates(&eta), Some(vec![int(1)]));
    }

    #[test]
    fn chi_space_examples() {
        let s6 = basis_s_chi(6, 40).unwrap();
        assert_eq!(s6.dim(), 1);
        let printed = [1, -12, 54, -88, -99];
        for (i, c) in printed.iter().enumerate() {
            assert_eq!(s6.basis[0].coeff(2 * i as u64 + 1), int(*c));
        }
        assert_eq!(basis_s_chi(8, 40).unwrap().dim(), 0);
        assert_eq!(basis_s_chi(18, 80).unwrap().dim(), 2);
    }

    #[test]
    fn dimensions_match_formulas_through_weight_24() {
        for group in [GroupLabel::SL2Z, GroupLabel::Gamma0_2, GroupLabel::Gamma0_4] {
            for k in (0..=24).step_by(2) {
                let p = default_precision(group, k);
                let m = basis_m(group, k, p).unwrap();
                let s = basis_s(group, k, p).unwrap();
                assert_eq!(m.dim(), dim_modular(group, k));
                assert_eq!(s.dim(), dim_cusp(group, k));
                assert!(m.contains_space(&s), "S_{k}({group}) not inside M_{k}");
                for b in &s.basis {
                    assert!(b.coeff(0).is_zero());
                }
            }
        }
    }

    #[test]
    fn echelon_pivots_increase_with_unit_leaders() {
        let s = basis_s(GroupLabel::Gamma0_4, 20, 200).unwrap();
        let pivots = s.pivots();
        assert!(pivots.windows(2).all(|w| w[0] < w[1]));
        for b in &s.basis {
            assert_eq!(b.coeff(b.valuation().unwrap()), int(1));
        }
        assert!(pivots.iter().all(|&p| p < s.sturm));
    }

    #[test]
    fn insufficient_precision_is_reported() {
        assert_eq!(
            basis_m(GroupLabel::Gamma0_4, 12, 4),
            Err(GeneratorError::InsufficientPrecision {
                precision: 4,
                required: 14
            })
        );
    }
}
