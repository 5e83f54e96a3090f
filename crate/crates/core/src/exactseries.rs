//! Exact truncated q-expansions over the rationals.
//!
//! Exponents are stored as *twice-exponents*: key `m` stands for `q^(m/2)`.
//! A series on the [`Grid::Integer`] grid only has even keys, while a series
//! on the [`Grid::Half`] grid may also carry odd keys (powers `q^(n+1/2)`).
//! Precision is measured in the same units: a series with precision `P` knows
//! every coefficient with key `m < P`, and nothing beyond.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Reduced fraction with positive denominator; zero is `0/1`.
pub type ExactRational = BigRational;

/// Upper bound applied when an operation would grow the precision.
pub const DEFAULT_PRECISION_CAP: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("grid mismatch: {0:?} vs {1:?}")]
    GridMismatch(Grid, Grid),
    #[error("odd twice-exponent {0} on the integer grid")]
    OddKeyOnIntegerGrid(u64),
    #[error("translation multiplier at twice-exponent {0} is not real")]
    NonRealMultiplier(u64),
    #[error("eta product prefactor {numerator}/24 is not a non-negative half-integer")]
    PrefactorNotOnGrid { numerator: i64 },
    #[error("eta product level must be positive")]
    ZeroEtaLevel,
    #[error("precision must be positive")]
    ZeroPrecision,
    #[error("malformed series: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Grid {
    Integer,
    Half,
}

impl Grid {
    pub fn label(self) -> &'static str {
        match self {
            Grid::Integer => "int",
            Grid::Half => "half",
        }
    }
}

/// Translation `tau -> tau + t` for the two shifts that act by real signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Translation {
    One,
    Half,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    grid: Grid,
    precision: u64,
    coeffs: BTreeMap<u64, ExactRational>,
}

impl QExpansion {
    pub fn zero(grid: Grid, precision: u64) -> Self {
        QExpansion {
            grid,
            precision,
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant series 1 on the integer grid.
    pub fn one(precision: u64) -> Self {
        Self::monomial(Grid::Integer, precision, 0, ExactRational::one()).expect("key 0 is even")
    }

    /// `c * q^(m/2)`, truncated away if `m >= precision`.
    pub fn monomial(
        grid: Grid,
        precision: u64,
        m: u64,
        c: ExactRational,
    ) -> Result<Self, SeriesError> {
        Self::from_coeffs(grid, precision, [(m, c)])
    }

    /// Builds a series from `(twice-exponent, coefficient)` pairs. Keys at or
    /// beyond the precision are dropped, repeated keys are summed and zeros
    /// are removed.
    pub fn from_coeffs<I>(grid: Grid, precision: u64, terms: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (u64, ExactRational)>,
    {
        let mut coeffs: BTreeMap<u64, ExactRational> = BTreeMap::new();
        for (m, c) in terms {
            if grid == Grid::Integer && m % 2 == 1 {
                return Err(SeriesError::OddKeyOnIntegerGrid(m));
            }
            if m >= precision {
                continue;
            }
            *coeffs.entry(m).or_insert_with(ExactRational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(QExpansion {
            grid,
            precision,
            coeffs,
        })
    }

    /// Integer-grid series from coefficients of `q^0, q^1, ...`.
    pub fn from_integer_coeffs<I, T>(precision: u64, coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Self::from_coeffs(
            Grid::Integer,
            precision,
            coeffs
                .into_iter()
                .enumerate()
                .map(|(n, c)| (2 * n as u64, ExactRational::from_integer(c.into()))),
        )
        .expect("keys are even")
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn precision(&self) -> u64 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at twice-exponent `m`; zero when absent.
    pub fn coeff(&self, m: u64) -> ExactRational {
        self.coeffs
            .get(&m)
            .cloned()
            .unwrap_or_else(ExactRational::zero)
    }

    /// Coefficient of `q^n` for an integer exponent `n`.
    pub fn coeff_q(&self, n: u64) -> ExactRational {
        self.coeff(2 * n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &ExactRational)> + '_ {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.coeffs.keys().copied()
    }

    /// Smallest twice-exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<u64> {
        self.coeffs.keys().next().copied()
    }

    /// Keeps only keys below `precision` (never raises the precision).
    pub fn truncate(&self, precision: u64) -> Self {
        let precision = precision.min(self.precision);
        QExpansion {
            grid: self.grid,
            precision,
            coeffs: self
                .coeffs
                .range(..precision)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Integer-grid series viewed on the half grid; half-grid input is unchanged.
    pub fn as_half(&self) -> Self {
        QExpansion {
            grid: Grid::Half,
            ..self.clone()
        }
    }

    /// Relabels a half-grid series whose keys are all even as an integer series.
    pub fn normalize_grid(&self) -> Self {
        let mut out = self.clone();
        if out.grid == Grid::Half && out.coeffs.keys().all(|m| m % 2 == 0) {
            out.grid = Grid::Integer;
        }
        out
    }

    /// True when every supported integer exponent is odd.
    pub fn has_odd_support(&self) -> bool {
        self.grid == Grid::Integer && self.coeffs.keys().all(|m| (m / 2) % 2 == 1)
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.grid, self.precision);
        }
        QExpansion {
            grid: self.grid,
            precision: self.precision,
            coeffs: self.coeffs.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-ExactRational::one())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, |a, b| a - b)
    }

    fn combine(
        &self,
        other: &Self,
        op: impl Fn(&ExactRational, &ExactRational) -> ExactRational,
    ) -> Result<Self, SeriesError> {
        if self.grid != other.grid {
            return Err(SeriesError::GridMismatch(self.grid, other.grid));
        }
        let precision = self.precision.min(other.precision);
        let zero = ExactRational::zero();
        let mut coeffs = BTreeMap::new();
        let keys: std::collections::BTreeSet<u64> = self
            .coeffs
            .range(..precision)
            .chain(other.coeffs.range(..precision))
            .map(|(m, _)| *m)
            .collect();
        for m in keys {
            let c = op(
                self.coeffs.get(&m).unwrap_or(&zero),
                other.coeffs.get(&m).unwrap_or(&zero),
            );
            if !c.is_zero() {
                coeffs.insert(m, c);
            }
        }
        Ok(QExpansion {
            grid: self.grid,
            precision,
            coeffs,
        })
    }

    /// Truncated Cauchy product. Two half-grid factors give an integer-grid
    /// result when every surviving key is even.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        if self.grid != other.grid {
            return Err(SeriesError::GridMismatch(self.grid, other.grid));
        }
        let precision = self.precision.min(other.precision);
        let len = precision as usize;
        let (a, da) = self.to_scaled_ints(len);
        let (b, db) = other.to_scaled_ints(len);
        let prod = convolve(&a, &b, len);
        let denom = da * db;
        let out = QExpansion {
            grid: self.grid,
            precision,
            coeffs: prod
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m as u64, ExactRational::new(c, denom.clone())))
                .collect(),
        };
        Ok(if self.grid == Grid::Half {
            out.normalize_grid()
        } else {
            out
        })
    }

    pub fn pow(&self, e: u32) -> Result<Self, SeriesError> {
        let mut result = Self::one(self.precision);
        if self.grid == Grid::Half {
            result = result.as_half();
        }
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = mul_embedding(&result, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
                if self.grid == Grid::Half {
                    base = base.as_half();
                }
            }
        }
        Ok(result)
    }

    /// `q -> q^d`, capped at [`DEFAULT_PRECISION_CAP`].
    pub fn rescale_variable(&self, d: u64) -> Self {
        self.rescale_variable_capped(d, DEFAULT_PRECISION_CAP)
    }

    pub fn rescale_variable_capped(&self, d: u64, cap: u64) -> Self {
        assert!(d >= 1, "rescale factor must be positive");
        let precision = self
            .precision
            .saturating_mul(d)
            .min(cap.max(self.precision));
        QExpansion {
            grid: self.grid,
            precision,
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| (m * d, c.clone()))
                .filter(|(m, _)| *m < precision)
                .collect(),
        }
    }

    /// Action of `tau -> tau + t`: the coefficient at twice-exponent `m` picks
    /// up `exp(pi i m t)`, which must be `+1` or `-1`.
    pub fn translation_sign_action(&self, t: Translation) -> Result<Self, SeriesError> {
        let mut coeffs = BTreeMap::new();
        for (m, c) in &self.coeffs {
            let exponent = match t {
                Translation::One => *m,
                Translation::Half => {
                    if m % 2 == 1 {
                        return Err(SeriesError::NonRealMultiplier(*m));
                    }
                    m / 2
                }
            };
            let c = if exponent % 2 == 0 {
                c.clone()
            } else {
                -c.clone()
            };
            coeffs.insert(*m, c);
        }
        Ok(QExpansion {
            grid: self.grid,
            precision: self.precision,
            coeffs,
        })
    }

    /// Dense numerators over a common denominator for keys `< len`.
    pub(crate) fn to_scaled_ints(&self, len: usize) -> (Vec<BigInt>, BigInt) {
        let denom = self
            .coeffs
            .range(..len as u64)
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut out = vec![BigInt::zero(); len];
        for (m, c) in self.coeffs.range(..len as u64) {
            out[*m as usize] = c.numer() * (&denom / c.denom());
        }
        (out, denom)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("series serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self, SeriesError> {
        serde_json::from_str(s).map_err(|e| SeriesError::Parse(e.to_string()))
    }
}

/// Product that lets an integer-grid factor embed into the half grid.
pub(crate) fn mul_embedding(a: &QExpansion, b: &QExpansion) -> Result<QExpansion, SeriesError> {
    match (a.grid, b.grid) {
        (Grid::Integer, Grid::Half) => a.as_half().mul(b),
        (Grid::Half, Grid::Integer) => a.mul(&b.as_half()),
        _ => a.mul(b),
    }
}

impl fmt::Display for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in &self.coeffs {
            let (sign, abs) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            let power = if m % 2 == 0 {
                format!("{}", m / 2)
            } else {
                format!("{}/2", m)
            };
            match (*m, abs.is_one()) {
                (0, _) => write!(f, "{}", abs)?,
                (2, true) => write!(f, "q")?,
                (2, false) => write!(f, "{}*q", abs)?,
                (_, true) => write!(f, "q^{}", power)?,
                (_, false) => write!(f, "{}*q^{}", abs, power)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        let p = self.precision;
        if p.is_multiple_of(2) {
            write!(f, " + O(q^{})", p / 2)
        } else {
            write!(f, " + O(q^{}/2)", p)
        }
    }
}

pub fn format_rational(r: &ExactRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"` or a bare integer; the result is reduced.
pub fn parse_rational(s: &str) -> Result<ExactRational, SeriesError> {
    let bad = || SeriesError::Parse(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(ExactRational::new(n, d))
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    grid: String,
    precision: u64,
    coeffs: BTreeMap<String, String>,
}

impl Serialize for QExpansion {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SeriesRepr {
            grid: self.grid.label().to_string(),
            precision: self.precision,
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| (m.to_string(), format_rational(c)))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QExpansion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = SeriesRepr::deserialize(deserializer)?;
        let grid = match repr.grid.as_str() {
            "int" => Grid::Integer,
            "half" => Grid::Half,
            other => return Err(D::Error::custom(format!("unknown grid {other:?}"))),
        };
        let mut coeffs = BTreeMap::new();
        for (k, v) in repr.coeffs {
            let m: u64 = k
                .parse()
                .map_err(|_| D::Error::custom(format!("bad key {k:?}")))?;
            if m >= repr.precision {
                return Err(D::Error::custom(format!("key {m} beyond precision")));
            }
            if grid == Grid::Integer && m % 2 == 1 {
                return Err(D::Error::custom(format!("odd key {m} on integer grid")));
            }
            let c = parse_rational(&v).map_err(D::Error::custom)?;
            if c.is_zero() {
                return Err(D::Error::custom(format!("stored zero at key {m}")));
            }
            coeffs.insert(m, c);
        }
        Ok(QExpansion {
            grid,
            precision: repr.precision,
            coeffs,
        })
    }
}

// Integer kernels ----------------------------------------------------------

fn max_bits(v: &[BigInt]) -> u64 {
    v.iter().map(|x| x.bits()).max().unwrap_or(0)
}

/// Truncated convolution of integer sequences, with an `i128` fast path when
/// the result provably fits.
pub(crate) fn convolve(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let la = a.len().min(len);
    let lb = b.len().min(len);
    let terms = la.min(lb).max(1) as u64;
    let bound = max_bits(&a[..la]) + max_bits(&b[..lb]) + 64 - terms.leading_zeros() as u64;
    if bound < 126 {
        let a: Vec<i128> = a[..la].iter().map(|x| x.to_i128().unwrap()).collect();
        let b: Vec<i128> = b[..lb].iter().map(|x| x.to_i128().unwrap()).collect();
        let mut out = vec![0i128; len];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().take(len - i).enumerate() {
                out[i + j] += x * y;
            }
        }
        return out.into_iter().map(BigInt::from).collect();
    }
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a[..la].iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b[..lb].iter().take(len - i).enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn int_power(base: &[BigInt], e: u32, len: usize) -> Vec<BigInt> {
    let mut result = vec![BigInt::zero(); len];
    if len == 0 {
        return result;
    }
    result[0] = BigInt::one();
    let mut base = base.to_vec();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = convolve(&result, &base, len);
        }
        e >>= 1;
        if e > 0 {
            base = convolve(&base, &base, len);
        }
    }
    result
}

/// `prod_{n>=1} (1 - x^n)^sign` truncated to `len` coefficients, built one
/// binomial factor at a time (geometric series for the inverse).
fn euler_product(len: usize, inverse: bool) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); len];
    if len == 0 {
        return c;
    }
    c[0] = BigInt::one();
    for n in 1..len {
        if inverse {
            for i in n..len {
                let t = c[i - n].clone();
                c[i] += t;
            }
        } else {
            for i in (n..len).rev() {
                let t = c[i - n].clone();
                c[i] -= t;
            }
        }
    }
    c
}

/// Expansion of `prod_(d,e) eta(d tau)^e` to the given precision.
///
/// The leading power is `q^((1/24) sum d e)`; it must be a non-negative
/// half-integer. The result lives on the half grid exactly when that power is
/// not an integer.
pub fn eta_product(factors: &[(u64, i64)], precision: u64) -> Result<QExpansion, SeriesError> {
    if precision == 0 {
        return Err(SeriesError::ZeroPrecision);
    }
    if factors.iter().any(|(d, _)| *d == 0) {
        return Err(SeriesError::ZeroEtaLevel);
    }
    let weighted: i64 = factors.iter().map(|(d, e)| *d as i64 * e).sum();
    if weighted < 0 || weighted % 12 != 0 {
        return Err(SeriesError::PrefactorNotOnGrid {
            numerator: weighted,
        });
    }
    let offset = (weighted / 12) as u64;
    let grid = if offset % 2 == 1 {
        Grid::Half
    } else {
        Grid::Integer
    };
    if offset >= precision {
        return Ok(QExpansion::zero(grid, precision));
    }
    // Number of integer powers of q needed for keys offset + 2n < precision.
    let len = (precision - offset).div_ceil(2) as usize;

    let mut exps: BTreeMap<u64, i64> = BTreeMap::new();
    for (d, e) in factors {
        *exps.entry(*d).or_insert(0) += e;
    }
    let mut body = vec![BigInt::zero(); len];
    body[0] = BigInt::one();
    for (d, e) in exps {
        if e == 0 {
            continue;
        }
        let inner_len = (len - 1) / d as usize + 1;
        let base = euler_product(inner_len, e < 0);
        let powered = int_power(&base, e.unsigned_abs() as u32, inner_len);
        let mut stretched = vec![BigInt::zero(); len];
        for (i, c) in powered.into_iter().enumerate() {
            stretched[i * d as usize] = c;
        }
        body = convolve(&body, &stretched, len);
    }
    QExpansion::from_coeffs(
        grid,
        precision,
        body.into_iter()
            .enumerate()
            .map(|(n, c)| (offset + 2 * n as u64, ExactRational::from_integer(c))),
    )
}

// Arithmetic functions -----------------------------------------------------

/// Sum of `d^power` over the divisors `d` of `n` that satisfy `keep`.
fn divisor_power_sum(n: u64, power: u32, keep: impl Fn(u64) -> bool) -> BigInt {
    assert!(n >= 1, "divisor sums need n >= 1");
    let mut total = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let e = n / d;
            if keep(d) {
                total += BigInt::from(d).pow(power);
            }
            if e != d && keep(e) {
                total += BigInt::from(e).pow(power);
            }
        }
        d += 1;
    }
    total
}

pub fn sigma(n: u64) -> u64 {
    divisor_power_sum(n, 1, |_| true).to_u64().unwrap()
}

pub fn sigma_odd(n: u64) -> u64 {
    divisor_power_sum(n, 1, |d| d % 2 == 1).to_u64().unwrap()
}

/// `sigma_power(n, r) = sum_{d | n} d^r`.
pub fn sigma_power(n: u64, r: u32) -> BigInt {
    divisor_power_sum(n, r, |_| true)
}

/// Sum of the divisors of `n` not divisible by 4 (Jacobi's four-square count / 8).
pub fn sigma_not_div4(n: u64) -> u64 {
    divisor_power_sum(n, 1, |d| d % 4 != 0).to_u64().unwrap()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u64, c: i64) -> (u64, ExactRational) {
        (2 * n, ExactRational::from_integer(c.into()))
    }

    fn int_series(p: u64, terms: &[(u64, i64)]) -> QExpansion {
        QExpansion::from_coeffs(Grid::Integer, p, terms.iter().map(|&(n, c)| q(n, c))).unwrap()
    }

    /// Brute force: expand `prod (1 - q^n)^e` one factor at a time on a plain
    /// integer vector.
    fn brute_eta_body(e: i64, n_terms: usize) -> Vec<i64> {
        let mut c = vec![0i64; n_terms];
        c[0] = 1;
        for n in 1..n_terms {
            for _ in 0..e {
                let mut next = c.clone();
                for i in n..n_terms {
                    next[i] -= c[i - n];
                }
                c = next;
            }
        }
        c
    }

    #[test]
    fn additive_inverse_and_coefficientwise_sum() {
        let a = int_series(20, &[(1, 1)]);
        assert!(a.add(&a.neg()).unwrap().is_zero());
        let b = int_series(20, &[(0, 1), (1, 8)]);
        let c = int_series(20, &[(1, 24)]);
        assert_eq!(b.add(&c).unwrap(), int_series(20, &[(0, 1), (1, 32)]));
    }

    #[test]
    fn add_rejects_grid_mismatch() {
        let a = QExpansion::zero(Grid::Integer, 10);
        let b = QExpansion::zero(Grid::Half, 10);
        assert_eq!(
            a.add(&b),
            Err(SeriesError::GridMismatch(Grid::Integer, Grid::Half))
        );
    }

    #[test]
    fn precision_shrinks_to_minimum() {
        let a = int_series(20, &[(6, 1)]);
        let b = int_series(10, &[(0, 1)]);
        let s = a.add(&b).unwrap();
        assert_eq!(s.precision(), 10);
        assert_eq!(s, int_series(10, &[(0, 1)]));
    }

    #[test]
    fn half_times_half_lands_on_integer_grid() {
        let h = QExpansion::monomial(Grid::Half, 20, 1, ExactRational::one()).unwrap();
        let p = h.mul(&h).unwrap();
        assert_eq!(p.grid(), Grid::Integer);
        assert_eq!(p, int_series(20, &[(1, 1)]));
    }

    #[test]
    fn one_is_multiplicative_identity() {
        let f = int_series(30, &[(1, 3), (4, -7), (9, 2)]);
        assert_eq!(QExpansion::one(30).mul(&f).unwrap(), f);
    }

    #[test]
    fn rescale_examples() {
        let f = QExpansion::from_coeffs(
            Grid::Half,
            20,
            [
                (1, ExactRational::one()),
                (3, ExactRational::from_integer((-12).into())),
            ],
        )
        .unwrap();
        assert_eq!(f.rescale_variable(1), f);
        let g = f.rescale_variable(2).normalize_grid();
        assert_eq!(g, int_series(40, &[(1, 1), (3, -12)]));
    }

    #[test]
    fn translation_examples() {
        let f = QExpansion::from_coeffs(
            Grid::Half,
            20,
            [
                (1, ExactRational::one()),
                (5, ExactRational::from_integer(3.into())),
            ],
        )
        .unwrap();
        assert_eq!(
            f.translation_sign_action(Translation::One).unwrap(),
            f.neg()
        );
        assert_eq!(
            f.translation_sign_action(Translation::Half),
            Err(SeriesError::NonRealMultiplier(1))
        );
        let g = int_series(30, &[(1, 1), (3, -12), (5, 54)]);
        assert_eq!(
            g.translation_sign_action(Translation::Half).unwrap(),
            g.neg()
        );
        let sq = int_series(30, &[(2, 1)]);
        assert_eq!(sq.translation_sign_action(Translation::Half).unwrap(), sq);
    }

    #[test]
    fn eta_twelve_on_both_grids() {
        let printed = [1i64, -12, 54, -88, -99, 540, -418];
        let f = eta_product(&[(1, 12)], 14).unwrap();
        assert_eq!(f.grid(), Grid::Half);
        for (i, c) in printed.iter().enumerate() {
            assert_eq!(
                f.coeff(2 * i as u64 + 1),
                ExactRational::from_integer((*c).into())
            );
        }
        let g = eta_product(&[(2, 12)], 28).unwrap();
        assert_eq!(g.grid(), Grid::Integer);
        let expected = int_series(
            28,
            &[
                (1, 1),
                (3, -12),
                (5, 54),
                (7, -88),
                (9, -99),
                (11, 540),
                (13, -418),
            ],
        );
        assert_eq!(g, expected);
    }

    #[test]
    fn delta_matches_brute_force_product() {
        let body = brute_eta_body(24, 12);
        let delta = eta_product(&[(1, 24)], 26).unwrap();
        for (n, c) in body.iter().enumerate() {
            assert_eq!(
                delta.coeff_q(n as u64 + 1),
                ExactRational::from_integer((*c).into())
            );
        }
        assert_eq!(delta.coeff_q(2), ExactRational::from_integer((-24).into()));
    }

    #[test]
    fn eta_square_squares_to_delta_prefix() {
        let e12 = eta_product(&[(1, 12)], 12).unwrap();
        let delta = eta_product(&[(1, 24)], 12).unwrap();
        assert_eq!(e12.mul(&e12).unwrap(), delta);
    }

    #[test]
    fn negative_exponents_invert() {
        let quotient = eta_product(&[(1, -12), (2, 12)], 40).unwrap();
        let eta12 = eta_product(&[(1, 12)], 40).unwrap();
        let product = quotient.mul(&eta12).unwrap();
        assert_eq!(product, eta_product(&[(2, 12)], 40).unwrap());
    }

    #[test]
    fn eta_prefactor_errors() {
        assert_eq!(
            eta_product(&[(1, 1)], 10),
            Err(SeriesError::PrefactorNotOnGrid { numerator: 1 })
        );
        assert!(eta_product(&[(1, -12)], 10).is_err());
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(1), 1);
        assert_eq!(sigma(6), 12);
        assert_eq!(sigma_odd(12), 4);
        assert_eq!(sigma_power(2, 3), BigInt::from(9));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let f = QExpansion::from_coeffs(
            Grid::Half,
            9,
            [
                (1, ExactRational::new(3.into(), 4.into())),
                (8, ExactRational::from_integer((-5).into())),
            ],
        )
        .unwrap();
        let s = f.to_json();
        assert_eq!(
            s,
            r#"{"grid":"half","precision":9,"coeffs":{"1":"3/4","8":"-5/1"}}"#
        );
        let back = QExpansion::from_json(&s).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn json_rejects_invalid_series() {
        assert!(
            QExpansion::from_json(r#"{"grid":"int","precision":4,"coeffs":{"1":"1/1"}}"#).is_err()
        );
        assert!(
            QExpansion::from_json(r#"{"grid":"int","precision":4,"coeffs":{"6":"1/1"}}"#).is_err()
        );
        assert!(
            QExpansion::from_json(r#"{"grid":"int","precision":4,"coeffs":{"2":"0/1"}}"#).is_err()
        );
    }
}
