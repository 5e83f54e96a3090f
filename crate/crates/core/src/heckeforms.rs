//! Hecke operators on q-expansions, the old/new splitting of
//! `S_k(Gamma0(4))`, rational eigenform extraction, and exact checks of the
//! level-four statements: `U_2` kills the newspace, the newspace is odd
//! supported with `tau -> tau + 1/2` acting by `-1`, and `q -> q^2` maps the
//! level-one `chi` cusp forms onto the newspace.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::exactseries::{
    format_rational, is_prime, ExactRational, Grid, QExpansion, SeriesError, Translation,
};
use crate::generators::{
    basis_s, basis_s_chi, default_precision, dim_cusp, dim_modular, echelon_basis, FormSpace,
    GeneratorError, GroupLabel,
};
use crate::linalg::{RatMatrix, RatPoly};
use crate::report::Report;

/// Number of separating operators `T_3 + c T_5` tried, `c = 0, 1, ...`.
pub const SEPARATION_ATTEMPTS: u32 = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("prime {p} divides the level {level}")]
    PrimeDividesLevel { p: u64, level: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("operator needs an integer-grid series")]
    NeedsIntegerGrid,
    #[error("precision {precision} is below the required {required} for {operator}")]
    InsufficientPrecision {
        operator: String,
        precision: u64,
        required: u64,
    },
    #[error("{operator} does not preserve the space")]
    NotInvariant { operator: String },
    #[error("{what}: computed dimension {computed}, expected {expected}")]
    DimensionMismatch {
        what: String,
        computed: usize,
        expected: usize,
    },
    #[error("no separating operator found after {attempts} attempts")]
    SeparationFailure { attempts: u32 },
    #[error("weight {0} is outside the supported range")]
    UnsupportedWeight(u32),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

// Operators on expansions --------------------------------------------------

/// `T_p` on a weight-`k` form of trivial character and level `level`:
/// `a_n -> a_{np} + p^{k-1} a_{n/p}`.
pub fn apply_tp(f: &QExpansion, k: u32, p: u64, level: u64) -> Result<QExpansion, HeckeError> {
    if !is_prime(p) {
        return Err(HeckeError::NotPrime(p));
    }
    if level.is_multiple_of(p) {
        return Err(HeckeError::PrimeDividesLevel { p, level });
    }
    if f.grid() != Grid::Integer {
        return Err(HeckeError::NeedsIntegerGrid);
    }
    let precision = f.precision() / p;
    let pk = ExactRational::from_integer(BigInt::from(p).pow(k - 1));
    let mut terms = Vec::new();
    for m in (0..precision).step_by(2) {
        let n = m / 2;
        let mut c = f.coeff_q(n * p);
        if n % p == 0 {
            c += &pk * f.coeff_q(n / p);
        }
        terms.push((m, c));
    }
    Ok(QExpansion::from_coeffs(Grid::Integer, precision, terms)?)
}

/// `U_2`: `a_n -> a_{2n}`.
pub fn apply_u2(f: &QExpansion) -> Result<QExpansion, HeckeError> {
    if f.grid() != Grid::Integer {
        return Err(HeckeError::NeedsIntegerGrid);
    }
    let precision = f.precision() / 2;
    let terms = f
        .iter()
        .filter(|(m, _)| m % 4 == 0 && m / 2 < precision)
        .map(|(m, c)| (m / 2, c.clone()))
        .collect::<Vec<_>>();
    Ok(QExpansion::from_coeffs(Grid::Integer, precision, terms)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OperatorLabel {
    Tp(u64),
    U2,
    V(u64),
    TranslationHalf,
}

impl fmt::Display for OperatorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorLabel::Tp(p) => write!(f, "T_{p}"),
            OperatorLabel::U2 => write!(f, "U_2"),
            OperatorLabel::V(d) => write!(f, "V_{d}"),
            OperatorLabel::TranslationHalf => write!(f, "T_1/2"),
        }
    }
}

/// Matrix of an endomorphism of a [`FormSpace`]; row `i` holds the
/// coordinates of the image of basis vector `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorMatrix {
    pub label: OperatorLabel,
    pub entries: RatMatrix,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.entries.rows()
    }
}

fn apply_label(
    label: OperatorLabel,
    f: &QExpansion,
    k: u32,
    level: u64,
) -> Result<QExpansion, HeckeError> {
    match label {
        OperatorLabel::Tp(p) => apply_tp(f, k, p, level),
        OperatorLabel::U2 => apply_u2(f),
        OperatorLabel::V(d) => Ok(f.rescale_variable(d)),
        OperatorLabel::TranslationHalf => Ok(f.translation_sign_action(Translation::Half)?),
    }
}

/// Exact matrix of `label` on `space`. Fails rather than guessing when the
/// images are not determined at the space's Sturm precision.
pub fn operator_matrix(
    space: &FormSpace,
    label: OperatorLabel,
) -> Result<OperatorMatrix, HeckeError> {
    let factor = match label {
        OperatorLabel::Tp(p) => p,
        OperatorLabel::U2 => 2,
        _ => 1,
    };
    let required = factor * space.sturm;
    if space.precision < required {
        return Err(HeckeError::InsufficientPrecision {
            operator: label.to_string(),
            precision: space.precision,
            required,
        });
    }
    let n = space.dim();
    let mut rows = Vec::with_capacity(n);
    for b in &space.basis {
        let image = apply_label(label, b, space.weight, space.group.level())?;
        let coords = space
            .coordinates(&image.truncate(space.precision))
            .ok_or_else(|| HeckeError::NotInvariant {
                operator: label.to_string(),
            })?;
        rows.push(coords);
    }
    Ok(OperatorMatrix {
        label,
        entries: RatMatrix::from_rows(rows, n),
    })
}

// Old and new subspaces at level four -------------------------------------

fn level4_precision(k: u32, precision: Option<u64>) -> u64 {
    precision.unwrap_or_else(|| default_precision(GroupLabel::Gamma0_4, k))
}

fn check_weight(k: u32) -> Result<(), HeckeError> {
    if k % 2 == 1 {
        return Err(GeneratorError::OddWeight(k).into());
    }
    if k < 4 {
        return Err(HeckeError::UnsupportedWeight(k));
    }
    Ok(())
}

/// Span of `S_k(Gamma0(2))` and its image under `q -> q^2` inside
/// `S_k(Gamma0(4))`.
pub fn oldspace_level4(k: u32, precision: Option<u64>) -> Result<FormSpace, HeckeError> {
    check_weight(k)?;
    let precision = level4_precision(k, precision);
    let full = basis_s(GroupLabel::Gamma0_4, k, precision)?;
    oldspace_inside(&full)
}

fn oldspace_inside(full: &FormSpace) -> Result<FormSpace, HeckeError> {
    let k = full.weight;
    let precision = full.precision;
    let level2 = basis_s(GroupLabel::Gamma0_2, k, precision)?;
    let mut spanning: Vec<QExpansion> = level2.basis.clone();
    spanning.extend(
        level2
            .basis
            .iter()
            .map(|b| b.rescale_variable(2).truncate(precision)),
    );
    let old = FormSpace {
        basis: echelon_basis(&spanning, Grid::Integer, precision),
        ..full.clone()
    };
    let expected = 2 * dim_cusp(GroupLabel::Gamma0_2, k) - dim_cusp(GroupLabel::SL2Z, k);
    if old.dim() != expected {
        return Err(HeckeError::DimensionMismatch {
            what: format!("old subspace of S_{k}(g0_4)"),
            computed: old.dim(),
            expected,
        });
    }
    if !full.contains_space(&old) {
        return Err(HeckeError::NotInvariant {
            operator: "level raising".into(),
        });
    }
    Ok(old)
}

/// Full cusp space, its old part and the Hecke-stable complement.
#[derive(Debug, Clone)]
pub struct Level4Decomposition {
    pub full: FormSpace,
    pub old: FormSpace,
    pub new: FormSpace,
    /// `c` in the separating operator `T_3 + c T_5`.
    pub separating_c: u32,
    pub charpoly_old: RatPoly,
    pub charpoly_new: RatPoly,
}

/// Matrix of `op` restricted to `sub`, where `op` acts on `full`.
fn restrict(full: &FormSpace, sub: &FormSpace, op: &RatMatrix) -> Result<RatMatrix, HeckeError> {
    let mut rows = Vec::with_capacity(sub.dim());
    for b in &sub.basis {
        let coords = full
            .coordinates(b)
            .ok_or_else(|| HeckeError::NotInvariant {
                operator: "inclusion".into(),
            })?;
        let image = full.combination(&op.apply_row(&coords));
        rows.push(
            sub.coordinates(&image)
                .ok_or_else(|| HeckeError::NotInvariant {
                    operator: "separating operator".into(),
                })?,
        );
    }
    Ok(RatMatrix::from_rows(rows, sub.dim()))
}

/// Splits `S_k(Gamma0(4))` into old and new parts by factoring the
/// characteristic polynomial of a separating Hecke operator.
pub fn decompose_level4(k: u32, precision: Option<u64>) -> Result<Level4Decomposition, HeckeError> {
    check_weight(k)?;
    let precision = level4_precision(k, precision);
    let full = basis_s(GroupLabel::Gamma0_4, k, precision)?;
    let old = oldspace_inside(&full)?;
    let t3 = operator_matrix(&full, OperatorLabel::Tp(3))?.entries;
    let mut t5: Option<RatMatrix> = None;
    for c in 0..SEPARATION_ATTEMPTS {
        let op = if c == 0 {
            t3.clone()
        } else {
            if t5.is_none() {
                t5 = Some(operator_matrix(&full, OperatorLabel::Tp(5))?.entries);
            }
            let cc = ExactRational::from_integer(BigInt::from(c));
            t3.add(&t5.as_ref().unwrap().scale(&cc))
        };
        let total = op.charpoly();
        let charpoly_old = restrict(&full, &old, &op)?.charpoly();
        let (charpoly_new, rem) = total.div_rem(&charpoly_old);
        assert!(
            rem.is_zero(),
            "old characteristic polynomial must divide the total"
        );
        if charpoly_old.gcd(&charpoly_new) != RatPoly::one() {
            continue;
        }
        let kernel = op.eval_poly(&charpoly_new).left_kernel();
        let vectors: Vec<QExpansion> = kernel.iter().map(|v| full.combination(v)).collect();
        let new = FormSpace {
            basis: echelon_basis(&vectors, Grid::Integer, precision),
            ..full.clone()
        };
        let expected = full.dim() - old.dim();
        if new.dim() != expected {
            return Err(HeckeError::DimensionMismatch {
                what: format!("new subspace of S_{k}(g0_4)"),
                computed: new.dim(),
                expected,
            });
        }
        return Ok(Level4Decomposition {
            full,
            old,
            new,
            separating_c: c,
            charpoly_old,
            charpoly_new,
        });
    }
    Err(HeckeError::SeparationFailure {
        attempts: SEPARATION_ATTEMPTS,
    })
}

pub fn newspace_level4(k: u32, precision: Option<u64>) -> Result<FormSpace, HeckeError> {
    Ok(decompose_level4(k, precision)?.new)
}

// Eigenforms ---------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigenform {
    pub weight: u32,
    pub level: u64,
    pub coefficients: QExpansion,
    /// `a_p` for odd primes `p` not dividing the level, each verified as an
    /// exact `T_p` eigenvalue.
    pub eigenvalues: BTreeMap<u64, ExactRational>,
    pub a2: ExactRational,
}

impl Eigenform {
    pub fn a(&self, n: u64) -> ExactRational {
        self.coefficients.coeff_q(n)
    }

    /// Largest `n` whose coefficient is known.
    pub fn max_index(&self) -> u64 {
        (self.coefficients.precision() - 1) / 2
    }

    /// `a_{p^2} = a_p^2 - p^{k-1}` for `p` not dividing the level.
    pub fn hecke_relation_holds(&self, p: u64) -> bool {
        let pk = ExactRational::from_integer(BigInt::from(p).pow(self.weight - 1));
        let ap = self.a(p);
        self.a(p * p) == &ap * &ap - pk
    }

    /// `a_{mn} = a_m a_n` for coprime `m, n`.
    pub fn multiplicative_on(&self, m: u64, n: u64) -> bool {
        self.a(m * n) == self.a(m) * self.a(n)
    }
}

/// Part of a space on which the separating operator has no rational eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSubspace {
    pub dim: usize,
    /// Characteristic polynomial of `T_3` on the subspace.
    pub charpoly: RatPoly,
    /// Its squarefree part; the minimal polynomial when `T_3` is semisimple.
    pub minimal_polynomial: RatPoly,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EigenDecomposition {
    pub eigenforms: Vec<Eigenform>,
    pub other: Vec<InvariantSubspace>,
}

fn derivative(p: &RatPoly) -> RatPoly {
    RatPoly::new(
        p.coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * ExactRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

fn squarefree_part(p: &RatPoly) -> RatPoly {
    if p.degree().unwrap_or(0) == 0 {
        return p.monic();
    }
    let g = p.gcd(&derivative(p));
    p.div_rem(&g).0.monic()
}

/// Search bound for integer `T_p` eigenvalues: `2 p^{(k-1)/2}` rounded up.
fn eigenvalue_bound(p: u64, k: u32) -> BigInt {
    let b = 2.0 * (p as f64).powf((k as f64 - 1.0) / 2.0);
    BigInt::from(b.ceil() as u128 + 1)
}

/// Normalized eigenforms for the rational eigenvalues of `T_3` on `space`,
/// and descriptors for the rest.
pub fn extract_rational_eigenforms(space: &FormSpace) -> Result<EigenDecomposition, HeckeError> {
    let mut out = EigenDecomposition::default();
    if space.dim() == 0 {
        return Ok(out);
    }
    let level = space.group.level();
    let k = space.weight;
    let t3 = operator_matrix(space, OperatorLabel::Tp(3))?.entries;
    let charpoly = t3.charpoly();
    let mut rest = charpoly.clone();
    for root in charpoly.integer_roots(&eigenvalue_bound(3, k)) {
        let lambda = ExactRational::from_integer(root.clone());
        let linear = RatPoly::linear_root(&lambda);
        let mut mult = 0usize;
        loop {
            let (q, r) = rest.div_rem(&linear);
            if !r.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        let shifted = t3.add(&RatMatrix::identity(space.dim()).scale(&-lambda.clone()));
        let kernel = shifted.left_kernel();
        let normalizable = kernel.len() == 1 && mult == 1;
        let eigenform = if normalizable {
            let f = space.combination(&kernel[0]);
            let a1 = f.coeff_q(1);
            (!a1.is_zero()).then(|| f.scale(&a1.recip()))
        } else {
            None
        };
        match eigenform {
            Some(f) => out.eigenforms.push(finish_eigenform(f, k, level, space)?),
            None => out.other.push(InvariantSubspace {
                dim: mult,
                charpoly: (0..mult).fold(RatPoly::one(), |acc, _| acc.mul(&linear)),
                minimal_polynomial: linear.clone(),
            }),
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.other.push(InvariantSubspace {
            dim: rest.degree().unwrap(),
            minimal_polynomial: squarefree_part(&rest),
            charpoly: rest,
        });
    }
    Ok(out)
}

fn finish_eigenform(
    f: QExpansion,
    k: u32,
    level: u64,
    space: &FormSpace,
) -> Result<Eigenform, HeckeError> {
    let mut eigenvalues = BTreeMap::new();
    let mut p = 3;
    while p * space.sturm <= space.precision {
        if is_prime(p) && !level.is_multiple_of(p) {
            let ap = f.coeff_q(p);
            let image = apply_tp(&f, k, p, level)?;
            let expected = f.scale(&ap).truncate(image.precision());
            if image != expected {
                return Err(HeckeError::NotInvariant {
                    operator: format!("T_{p} eigen-relation"),
                });
            }
            eigenvalues.insert(p, ap);
        }
        p += 2;
    }
    Ok(Eigenform {
        weight: k,
        level,
        a2: f.coeff_q(2),
        coefficients: f,
        eigenvalues,
    })
}

// Exact verification reports ------------------------------------------------

fn rational_list(f: &QExpansion, upto: u64) -> Vec<String> {
    (0..=upto).map(|n| format_rational(&f.coeff_q(n))).collect()
}

/// `U_2 g = 0`, odd support, and `g(tau + 1/2) = -g(tau)` for every newspace
/// basis vector.
pub fn verify_newspace_odd_support(k: u32, precision: Option<u64>) -> Result<Report, HeckeError> {
    let decomposition = decompose_level4(k, precision)?;
    let new = &decomposition.new;
    let mut failures = Vec::new();
    for (i, g) in new.basis.iter().enumerate() {
        let u2 = apply_u2(g)?;
        if !u2.is_zero() {
            failures.push(json!({"basis": i, "property": "U_2 g = 0",
                "exponents": u2.support().map(|m| m / 2).collect::<Vec<_>>()}));
        }
        let even: Vec<u64> = g.support().map(|m| m / 2).filter(|n| n % 2 == 0).collect();
        if !even.is_empty() {
            failures.push(json!({"basis": i, "property": "odd support", "exponents": even}));
        }
        let shifted = g.translation_sign_action(Translation::Half)?;
        let sum = shifted.add(g)?;
        if !sum.is_zero() {
            failures.push(json!({"basis": i, "property": "g(tau+1/2) = -g(tau)",
                "exponents": sum.support().map(|m| m / 2).collect::<Vec<_>>()}));
        }
    }
    Ok(Report::new(
        "newspace-odd-support",
        Some(k),
        failures.is_empty(),
        json!({
            "newspace_dim": new.dim(),
            "precision": new.precision,
            "failures": failures,
        }),
    ))
}

/// The odd-supported old vector `h - a_2 V_2 h` built from the level-two
/// eigenform `h` of weight `k`.
pub fn odd_old_vector(k: u32, precision: u64) -> Result<QExpansion, HeckeError> {
    let level2 = basis_s(GroupLabel::Gamma0_2, k, precision)?;
    let eig = extract_rational_eigenforms(&level2)?;
    let h = eig
        .eigenforms
        .first()
        .ok_or(HeckeError::DimensionMismatch {
            what: format!("rational eigenforms in S_{k}(g0_2)"),
            computed: 0,
            expected: 1,
        })?;
    let h = &h.coefficients;
    let a2 = h.coeff_q(2);
    Ok(h.sub(&h.rescale_variable(2).truncate(h.precision()).scale(&a2))?)
}

/// `q -> q^2` carries the level-one `chi` cusp forms onto the level-four
/// newspace; the echelon bases must coincide.
pub fn verify_chi_lift(k: u32, precision: Option<u64>) -> Result<Report, HeckeError> {
    let precision = level4_precision(k, precision);
    let new = newspace_level4(k, Some(precision))?;
    let chi = basis_s_chi(k, precision)?;
    let lifted: Vec<QExpansion> = chi
        .basis
        .iter()
        .map(|f| f.rescale_variable(2).truncate(precision).normalize_grid())
        .collect();
    let lifted = echelon_basis(&lifted, Grid::Integer, precision);
    let expected_dim = if k >= 6 {
        dim_modular(GroupLabel::SL2Z, k - 6)
    } else {
        0
    };
    let same_basis = lifted == new.basis;
    let pass = same_basis && new.dim() == expected_dim && chi.dim() == expected_dim;
    let show = |b: &QExpansion| rational_list(b, new.sturm / 2 + 1);
    Ok(Report::new(
        "chi-lift",
        Some(k),
        pass,
        json!({
            "dim_chi": chi.dim(),
            "dim_new": new.dim(),
            "dim_expected": expected_dim,
            "precision": precision,
            "sturm": new.sturm,
            "identical_echelon_bases": same_basis,
            "lifted_chi_basis": lifted.iter().map(show).collect::<Vec<_>>(),
            "newspace_basis": new.basis.iter().map(show).collect::<Vec<_>>(),
        }),
    ))
}

/// Trivial Hecke bound screen `|a_p| <= 2 p^{k/2}`.
pub fn within_trivial_bound(ap: &ExactRational, p: u64, k: u32) -> bool {
    let bound = 2.0 * (p as f64).powf(k as f64 / 2.0);
    ap.abs().to_f64().is_some_and(|x| x <= bound)
}
