//! Words in `S`, `T` for SL2(Z), the six characters of PSL2(Z), congruence
//! subgroup membership, and free-generator decompositions for Gamma0(4).
//!
//! A character is stored as the residue `a mod 6` with `chi(T) = zeta6^a` and
//! `chi(S) = (-1)^a`; the relations `S^2 = (ST)^3 = 1` in PSL2(Z) force every
//! character to have this shape.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::json;
use thiserror::Error;

use crate::report::Report;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("matrix has determinant {0}, expected 1")]
    NonUnimodular(BigInt),
    #[error("matrix is not in {0}")]
    NotInGroup(&'static str),
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
}

fn parse_err(what: &'static str, input: &str) -> WordError {
    WordError::Parse {
        what,
        input: input.to_string(),
    }
}

/// Integer matrix `[[a, b], [c, d]]` of determinant one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl Mat2 {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self, WordError> {
        let m = Mat2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        };
        let det = &m.a * &m.d - &m.b * &m.c;
        if !det.is_one() {
            return Err(WordError::NonUnimodular(det));
        }
        Ok(m)
    }

    fn raw(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::raw(1.into(), 0.into(), 0.into(), 1.into())
    }

    pub fn s() -> Self {
        Self::raw(0.into(), (-1).into(), 1.into(), 0.into())
    }

    pub fn t_pow(n: impl Into<BigInt>) -> Self {
        Self::raw(1.into(), n.into(), 0.into(), 1.into())
    }

    pub fn t() -> Self {
        Self::t_pow(1)
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Self::raw(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    pub fn neg(&self) -> Mat2 {
        Self::raw(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    pub fn inverse(&self) -> Mat2 {
        Self::raw(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    /// Matrix up to sign, normalized so the first nonzero of `(c, d)` is positive.
    pub fn projective(&self) -> Mat2 {
        if self.c.is_negative() || (self.c.is_zero() && self.d.is_negative()) {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Largest bit length among the entries.
    pub fn max_bits(&self) -> u64 {
        self.entries().iter().map(|x| x.bits()).max().unwrap_or(0)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for Mat2 {
    type Err = WordError;
    /// Parses `[[a,b],[c,d]]`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, WordError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix("[[")
            .and_then(|x| x.strip_suffix("]]"))
            .ok_or_else(|| parse_err("matrix", s))?;
        let (top, bottom) = inner
            .split_once("],[")
            .ok_or_else(|| parse_err("matrix", s))?;
        let pair = |row: &str| -> Result<(BigInt, BigInt), WordError> {
            let (x, y) = row.split_once(',').ok_or_else(|| parse_err("matrix", s))?;
            Ok((
                x.parse().map_err(|_| parse_err("matrix", s))?,
                y.parse().map_err(|_| parse_err("matrix", s))?,
            ))
        };
        let (a, b) = pair(top)?;
        let (c, d) = pair(bottom)?;
        Mat2::new(a, b, c, d)
    }
}

// Words ------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    S,
    T,
    TInv,
}

/// Run-length form of a letter sequence: `T(n)` stands for `n` copies of
/// `T` (or `-n` copies of `T^-1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Syllable {
    S,
    T(BigInt),
}

/// `sign * w` for a reduced word `w`: no `T^0`, no adjacent `T` runs, no `S S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupWord {
    negative: bool,
    syllables: Vec<Syllable>,
}

impl GroupWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_letters(negative: bool, letters: &[Letter]) -> Self {
        let mut w = GroupWord {
            negative,
            syllables: Vec::new(),
        };
        for l in letters {
            match l {
                Letter::S => w.push_s(),
                Letter::T => w.push_t(BigInt::one()),
                Letter::TInv => w.push_t(-BigInt::one()),
            }
        }
        w
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    /// Appends `S`; `S S` collapses to a sign flip.
    pub fn push_s(&mut self) {
        if self.syllables.last() == Some(&Syllable::S) {
            self.syllables.pop();
            self.negative = !self.negative;
        } else {
            self.syllables.push(Syllable::S);
        }
    }

    pub fn push_t(&mut self, n: BigInt) {
        if n.is_zero() {
            return;
        }
        if let Some(Syllable::T(m)) = self.syllables.last_mut() {
            *m += n;
            if m.is_zero() {
                self.syllables.pop();
            }
        } else {
            self.syllables.push(Syllable::T(n));
        }
    }

    pub fn negate(&mut self) {
        self.negative = !self.negative;
    }

    /// Expanded letters; only sensible for short exponents.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for s in &self.syllables {
            match s {
                Syllable::S => out.push(Letter::S),
                Syllable::T(n) => {
                    let l = if n.is_positive() {
                        Letter::T
                    } else {
                        Letter::TInv
                    };
                    let count = n.abs().to_usize().expect("exponent fits in memory");
                    out.extend(std::iter::repeat_n(l, count));
                }
            }
        }
        out
    }

    pub fn syllable_count(&self) -> usize {
        self.syllables.len()
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut w = self.clone();
        w.negative ^= other.negative;
        for s in &other.syllables {
            match s {
                Syllable::S => w.push_s(),
                Syllable::T(n) => w.push_t(n.clone()),
            }
        }
        w
    }

    pub fn inverse(&self) -> GroupWord {
        let mut w = GroupWord {
            negative: self.negative,
            syllables: Vec::new(),
        };
        for s in self.syllables.iter().rev() {
            match s {
                // S^-1 = -S
                Syllable::S => {
                    w.push_s();
                    w.negate();
                }
                Syllable::T(n) => w.push_t(-n.clone()),
            }
        }
        w
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negative { "-" } else { "" };
        if self.syllables.is_empty() {
            return write!(f, "{sign}I");
        }
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|s| match s {
                Syllable::S => "S".to_string(),
                Syllable::T(n) if n.is_one() => "T".to_string(),
                Syllable::T(n) => format!("T^{n}"),
            })
            .collect();
        write!(f, "{sign}{}", parts.join(" "))
    }
}

impl FromStr for GroupWord {
    type Err = WordError;
    /// Parses e.g. `"-S T^-1 S"`, `"T^5"`, `"I"`, `"-I"`.
    fn from_str(s: &str) -> Result<Self, WordError> {
        let t = s.trim();
        let (negative, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, t),
        };
        let mut w = GroupWord {
            negative,
            syllables: Vec::new(),
        };
        if body == "I" {
            return Ok(w);
        }
        if body.is_empty() {
            return Err(parse_err("word", s));
        }
        for tok in body.split_whitespace() {
            match tok {
                "S" => w.push_s(),
                "T" => w.push_t(BigInt::one()),
                _ => {
                    let n = tok
                        .strip_prefix("T^")
                        .and_then(|e| e.parse::<BigInt>().ok())
                        .ok_or_else(|| parse_err("word", s))?;
                    w.push_t(n);
                }
            }
        }
        Ok(w)
    }
}

pub fn word_to_matrix(w: &GroupWord) -> Mat2 {
    let mut m = Mat2::identity();
    for s in &w.syllables {
        m = match s {
            Syllable::S => m.mul(&Mat2::s()),
            Syllable::T(n) => m.mul(&Mat2::t_pow(n.clone())),
        };
    }
    if w.negative {
        m.neg()
    } else {
        m
    }
}

/// `floor(x / y + 1/2)`.
fn nearest_quotient(x: &BigInt, y: &BigInt) -> BigInt {
    (BigInt::from(2) * x + y).div_floor(&(BigInt::from(2) * y))
}

/// Writes `m` as a signed word in `S` and `T` by nearest-integer Euclidean
/// reduction of the first column.
pub fn matrix_to_word(m: &Mat2) -> Result<GroupWord, WordError> {
    let det = &m.a * &m.d - &m.b * &m.c;
    if !det.is_one() {
        return Err(WordError::NonUnimodular(det));
    }
    // Left factors in the order applied: cur = X_r ... X_1 m.
    let mut applied: Vec<Syllable> = Vec::new();
    let mut cur = m.clone();
    while !cur.c.is_zero() {
        cur = Mat2::s().mul(&cur);
        applied.push(Syllable::S);
        if cur.c.is_zero() {
            break;
        }
        let n = -nearest_quotient(&cur.a, &cur.c);
        if !n.is_zero() {
            cur = Mat2::t_pow(n.clone()).mul(&cur);
            applied.push(Syllable::T(n));
        }
    }
    // cur = a * T^(a b) with a = d = +-1.
    let mut w = GroupWord::identity();
    if cur.a.is_negative() {
        w.negate();
    }
    for x in &applied {
        match x {
            Syllable::S => {
                w.push_s();
                w.negate();
            }
            Syllable::T(n) => w.push_t(-n.clone()),
        }
    }
    w.push_t(&cur.a * &cur.b);
    Ok(w)
}

// Characters -------------------------------------------------------------------

/// A sixth root of unity `zeta6^k`, stored by its exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity6(u8);

impl RootOfUnity6 {
    pub fn new(k: i64) -> Self {
        RootOfUnity6(k.rem_euclid(6) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    pub fn pow(self, n: i64) -> Self {
        Self::new(self.0 as i64 * n)
    }

    /// `+1` or `-1` when the value is real.
    pub fn as_sign(self) -> Option<i8> {
        match self.0 {
            0 => Some(1),
            3 => Some(-1),
            _ => None,
        }
    }

    /// `(re, im)` of `exp(2 pi i k / 6)`.
    pub fn to_complex(self) -> (f64, f64) {
        let angle = std::f64::consts::PI * self.0 as f64 / 3.0;
        match self.0 {
            0 => (1.0, 0.0),
            3 => (-1.0, 0.0),
            _ => (angle.cos(), angle.sin()),
        }
    }
}

impl std::ops::Mul for RootOfUnity6 {
    type Output = Self;

    // Exponents of zeta6 add.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: Self) -> Self {
        Self::new(self.0 as i64 + o.0 as i64)
    }
}

impl fmt::Display for RootOfUnity6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "1"),
            3 => write!(f, "-1"),
            k => write!(f, "zeta6^{k}"),
        }
    }
}

/// Character of PSL2(Z) with `chi(T) = zeta6^a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    a: u8,
}

impl Character {
    pub fn new(a: i64) -> Self {
        Character {
            a: a.rem_euclid(6) as u8,
        }
    }

    pub fn trivial() -> Self {
        Self::new(0)
    }

    /// The nontrivial real character, `chi(S) = chi(T) = -1`.
    pub fn chi() -> Self {
        Self::new(3)
    }

    pub fn residue(self) -> u8 {
        self.a
    }

    pub fn on_t(self) -> RootOfUnity6 {
        RootOfUnity6::new(self.a as i64)
    }

    pub fn on_s(self) -> RootOfUnity6 {
        self.on_t().pow(3)
    }

    pub fn is_real(self) -> bool {
        self.a.is_multiple_of(3)
    }

    pub fn eval_word(self, w: &GroupWord) -> RootOfUnity6 {
        let mut acc = RootOfUnity6::new(0);
        for s in &w.syllables {
            acc = acc
                * match s {
                    Syllable::S => self.on_s(),
                    Syllable::T(n) => {
                        let r = n.mod_floor(&BigInt::from(6)).to_i64().unwrap();
                        self.on_t().pow(r)
                    }
                };
        }
        acc
    }
}

pub fn enumerate_characters() -> Vec<Character> {
    (0..6).map(Character::new).collect()
}

/// `chi(M)`; the sign of `M` is ignored.
pub fn char_eval(chi: Character, m: &Mat2) -> Result<RootOfUnity6, WordError> {
    Ok(chi.eval_word(&matrix_to_word(m)?))
}

// Congruence subgroups ---------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CongruenceGroup {
    Gamma0_2,
    Gamma0_4,
    Gamma2,
}

impl CongruenceGroup {
    pub fn name(self) -> &'static str {
        match self {
            CongruenceGroup::Gamma0_2 => "Gamma0(2)",
            CongruenceGroup::Gamma0_4 => "Gamma0(4)",
            CongruenceGroup::Gamma2 => "Gamma(2)",
        }
    }
}

pub fn membership(m: &Mat2, group: CongruenceGroup) -> bool {
    let divisible = |x: &BigInt, n: i64| x.mod_floor(&BigInt::from(n)).is_zero();
    match group {
        CongruenceGroup::Gamma0_2 => divisible(&m.c, 2),
        CongruenceGroup::Gamma0_4 => divisible(&m.c, 4),
        CongruenceGroup::Gamma2 => divisible(&m.b, 2) && divisible(&m.c, 2),
    }
}

/// Free generators of Gamma0(4) modulo `-I`: `T` and `S T^4 S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gamma04Gen {
    T,
    ST4S,
}

impl Gamma04Gen {
    pub fn matrix(self) -> Mat2 {
        match self {
            Gamma04Gen::T => Mat2::t(),
            Gamma04Gen::ST4S => Mat2::s().mul(&Mat2::t_pow(4)).mul(&Mat2::s()),
        }
    }
}

/// `sign * g_1^e_1 ... g_r^e_r` with adjacent generators distinct.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Gamma04Word {
    negative: bool,
    factors: Vec<(Gamma04Gen, BigInt)>,
}

impl Gamma04Word {
    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn factors(&self) -> &[(Gamma04Gen, BigInt)] {
        &self.factors
    }

    fn push(&mut self, g: Gamma04Gen, e: BigInt) {
        if e.is_zero() {
            return;
        }
        if let Some((last, n)) = self.factors.last_mut() {
            if *last == g {
                *n += e;
                if n.is_zero() {
                    self.factors.pop();
                }
                return;
            }
        }
        self.factors.push((g, e));
    }

    pub fn to_matrix(&self) -> Mat2 {
        let mut m = Mat2::identity();
        for (g, e) in &self.factors {
            let base = if e.is_negative() {
                g.matrix().inverse()
            } else {
                g.matrix()
            };
            let mut n = e.abs();
            // Square-and-multiply; exponents can be large.
            let mut p = base;
            let mut acc = Mat2::identity();
            while !n.is_zero() {
                if n.is_odd() {
                    acc = acc.mul(&p);
                }
                n >>= 1;
                if !n.is_zero() {
                    p = p.mul(&p);
                }
            }
            m = m.mul(&acc);
        }
        if self.negative {
            m.neg()
        } else {
            m
        }
    }

    /// True when every `T` exponent is even, i.e. the word lies in the
    /// subgroup generated by `T^2`, `S T^4 S` and `-I`.
    pub fn uses_even_translations(&self) -> bool {
        self.factors
            .iter()
            .all(|(g, e)| *g != Gamma04Gen::T || e.is_even())
    }
}

impl fmt::Display for Gamma04Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negative { "-" } else { "" };
        if self.factors.is_empty() {
            return write!(f, "{sign}I");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(g, e)| match (g, e.is_one()) {
                (Gamma04Gen::T, true) => "T".to_string(),
                (Gamma04Gen::T, false) => format!("T^{e}"),
                (Gamma04Gen::ST4S, true) => "(ST^4S)".to_string(),
                (Gamma04Gen::ST4S, false) => format!("(ST^4S)^{e}"),
            })
            .collect();
        write!(f, "{sign}{}", parts.join(" "))
    }
}

impl FromStr for Gamma04Word {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, WordError> {
        let t = s.trim();
        let (negative, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, t),
        };
        let mut w = Gamma04Word {
            negative,
            factors: Vec::new(),
        };
        if body == "I" {
            return Ok(w);
        }
        if body.is_empty() {
            return Err(parse_err("Gamma0(4) word", s));
        }
        for tok in body.split_whitespace() {
            let (g, e) = if tok == "T" {
                (Gamma04Gen::T, BigInt::one())
            } else if let Some(e) = tok.strip_prefix("T^") {
                (
                    Gamma04Gen::T,
                    e.parse().map_err(|_| parse_err("Gamma0(4) word", s))?,
                )
            } else if tok == "(ST^4S)" {
                (Gamma04Gen::ST4S, BigInt::one())
            } else if let Some(e) = tok.strip_prefix("(ST^4S)^") {
                (
                    Gamma04Gen::ST4S,
                    e.parse().map_err(|_| parse_err("Gamma0(4) word", s))?,
                )
            } else {
                return Err(parse_err("Gamma0(4) word", s));
            };
            w.push(g, e);
        }
        Ok(w)
    }
}

/// Decomposes an element of Gamma0(4) over `T`, `S T^4 S` and `-I`.
///
/// Conjugation `[[a,b],[c,d]] -> [[a,2b],[c/2,d]]` carries Gamma0(4) onto
/// Gamma(2), sending `T` to `A = [[1,2],[0,1]]` and `[[1,0],[4,1]]` to
/// `B = [[1,0],[2,1]]`. The image is reduced by ping-pong on `|a|` against
/// `|c|` and the word mapped back.
pub fn decompose_gamma0_4(m: &Mat2) -> Result<Gamma04Word, WordError> {
    if !membership(m, CongruenceGroup::Gamma0_4) {
        return Err(WordError::NotInGroup("Gamma0(4)"));
    }
    let two = BigInt::from(2);
    let mut a = m.a.clone();
    let mut b = &m.b * &two;
    let mut c = &m.c / &two;
    let mut d = m.d.clone();
    // Left factors applied, as (is_A, exponent): cur = X_r ... X_1 N.
    let mut applied: Vec<(bool, BigInt)> = Vec::new();
    while !c.is_zero() {
        if a.abs() > c.abs() {
            // A^-n N = [[a - 2nc, b - 2nd], [c, d]]
            let n = nearest_quotient(&a, &(&c * &two));
            a -= &two * &n * &c;
            b -= &two * &n * &d;
            applied.push((true, -n));
        } else {
            // B^-n N = [[a, b], [c - 2na, d - 2nb]]
            let n = nearest_quotient(&c, &(&a * &two));
            c -= &two * &n * &a;
            d -= &two * &n * &b;
            applied.push((false, -n));
        }
    }
    // Now N' = a * A^(a b / 2) with a = d = +-1.
    let mut w = Gamma04Word {
        negative: a.is_negative(),
        factors: Vec::new(),
    };
    for (is_a, n) in applied {
        let e = -n;
        if is_a {
            w.push(Gamma04Gen::T, e);
        } else {
            // B^e -> [[1,0],[4,1]]^e = (-1)^e (ST^4S)^(-e)
            if e.is_odd() {
                w.negative = !w.negative;
            }
            w.push(Gamma04Gen::ST4S, -e);
        }
    }
    w.push(Gamma04Gen::T, &a * &b / &two);
    Ok(w)
}

// Random elements --------------------------------------------------------------

pub fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> GroupWord {
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<Letter> = (0..len)
        .map(|_| match rng.gen_range(0..3) {
            0 => Letter::S,
            1 => Letter::T,
            _ => Letter::TInv,
        })
        .collect();
    GroupWord::from_letters(rng.gen_bool(0.5), &letters)
}

/// Random product of `T^2`, `S T^2 S`, their inverses and `-I`.
pub fn random_gamma2_element<R: Rng>(rng: &mut R, max_len: usize) -> Mat2 {
    let gens = [
        Mat2::t_pow(2),
        Mat2::t_pow(-2),
        Mat2::s().mul(&Mat2::t_pow(2)).mul(&Mat2::s()),
        Mat2::s().mul(&Mat2::t_pow(-2)).mul(&Mat2::s()),
        Mat2::identity().neg(),
    ];
    random_product(rng, &gens, max_len)
}

/// Random product of `T^2`, `S T^4 S`, their inverses and `-I`.
pub fn random_gamma0_4_element<R: Rng>(rng: &mut R, max_len: usize) -> Mat2 {
    let st4s = Gamma04Gen::ST4S.matrix();
    let gens = [
        Mat2::t_pow(2),
        Mat2::t_pow(-2),
        st4s.clone(),
        st4s.inverse(),
        Mat2::identity().neg(),
    ];
    random_product(rng, &gens, max_len)
}

fn random_product<R: Rng>(rng: &mut R, gens: &[Mat2], max_len: usize) -> Mat2 {
    let len = rng.gen_range(0..=max_len);
    (0..len).fold(Mat2::identity(), |acc, _| {
        acc.mul(&gens[rng.gen_range(0..gens.len())])
    })
}

// Reports ----------------------------------------------------------------------

fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// Character enumeration: six characters, two real, the nontrivial real one
/// has `chi(S) = chi(T) = -1`, and it is trivial on random elements of Gamma(2).
pub fn verify_character_enumeration(seed: u64, samples: usize) -> Report {
    let chars = enumerate_characters();
    let real: Vec<u8> = chars
        .iter()
        .filter(|c| c.is_real())
        .map(|c| c.residue())
        .collect();
    let relations_hold = chars.iter().all(|c| {
        let st = GroupWord::from_letters(false, &[Letter::S, Letter::T]);
        c.on_s().pow(2).is_one() && c.eval_word(&st).pow(3).is_one()
    });
    let chi = Character::chi();
    let chi_values_ok = chi.on_s().as_sign() == Some(-1) && chi.on_t().as_sign() == Some(-1);
    let mut rng = seeded(seed);
    let mut gamma2_failures = Vec::new();
    for i in 0..samples {
        let m = random_gamma2_element(&mut rng, 20);
        let v = char_eval(chi, &m).expect("products of unimodular matrices are unimodular");
        if !v.is_one() || !membership(&m, CongruenceGroup::Gamma2) {
            gamma2_failures
                .push(json!({"sample": i, "matrix": m.to_string(), "value": v.to_string()}));
        }
    }
    let pass = chars.len() == 6
        && real == [0, 3]
        && relations_hold
        && chi_values_ok
        && gamma2_failures.is_empty();
    let mut report = Report::new(
        "characters",
        None,
        pass,
        json!({
            "characters": chars.len(),
            "real_residues": real,
            "relations_hold": relations_hold,
            "chi_S": chi.on_s().to_string(),
            "chi_T": chi.on_t().to_string(),
            "gamma2_samples": samples,
            "gamma2_failures": gamma2_failures,
        }),
    );
    report.seed = Some(seed);
    report
}

/// Decomposition round trips in Gamma0(4) and SL2(Z).
pub fn verify_gamma0_4_generators(seed: u64, gamma04_samples: usize, sl2_samples: usize) -> Report {
    let mut rng = seeded(seed);
    let chi = Character::chi();
    let mut gamma04_failures = Vec::new();
    for i in 0..gamma04_samples {
        let m = random_gamma0_4_element(&mut rng, 30);
        let ok = match decompose_gamma0_4(&m) {
            Ok(w) => w.to_matrix() == m && w.uses_even_translations(),
            Err(_) => false,
        };
        if !ok {
            gamma04_failures.push(json!({"sample": i, "matrix": m.to_string()}));
        }
    }
    let mut sl2_failures = Vec::new();
    for i in 0..sl2_samples {
        let w = random_word(&mut rng, 40);
        let m = word_to_matrix(&w);
        let ok = matrix_to_word(&m).is_ok_and(|v| word_to_matrix(&v) == m);
        if !ok {
            sl2_failures.push(json!({"sample": i, "word": w.to_string()}));
        }
    }
    let generators_trivial = [Mat2::t_pow(2), Gamma04Gen::ST4S.matrix()]
        .iter()
        .all(|g| char_eval(chi, g).is_ok_and(|v| v.is_one()));
    let pass = gamma04_failures.is_empty() && sl2_failures.is_empty() && generators_trivial;
    let mut report = Report::new(
        "gamma0-4-generators",
        None,
        pass,
        json!({
            "gamma0_4_samples": gamma04_samples,
            "gamma0_4_failures": gamma04_failures,
            "sl2z_samples": sl2_samples,
            "sl2z_failures": sl2_failures,
            "chi_trivial_on_T2_and_ST4S": generators_trivial,
        }),
    );
    report.seed = Some(seed);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        Mat2::new(a, b, c, d).unwrap()
    }

    #[test]
    fn word_to_matrix_examples() {
        assert_eq!(word_to_matrix(&GroupWord::identity()), Mat2::identity());
        let s = GroupWord::from_letters(false, &[Letter::S]);
        assert_eq!(word_to_matrix(&s), m(0, -1, 1, 0));
        let w = GroupWord::from_letters(true, &[Letter::S, Letter::TInv, Letter::S]);
        assert_eq!(word_to_matrix(&w), m(1, 0, 1, 1));
    }

    #[test]
    fn matrix_to_word_examples() {
        let w = matrix_to_word(&Mat2::t_pow(5)).unwrap();
        assert_eq!(w.letters(), vec![Letter::T; 5]);
        let w = matrix_to_word(&m(1, 0, 1, 1)).unwrap();
        assert_eq!(w.to_string(), "-S T^-1 S");
        assert!(matches!(
            Mat2::new(2, 0, 0, 1),
            Err(WordError::NonUnimodular(_))
        ));
    }

    #[test]
    fn word_text_round_trip() {
        for text in ["-S T^-1 S", "T^5", "I", "-I", "S T^-12 S T"] {
            let w: GroupWord = text.parse().unwrap();
            assert_eq!(w.to_string(), text);
        }
        let merged: GroupWord = "T T S S".parse().unwrap();
        assert_eq!(merged.to_string(), "-T^2");
        assert!("S X".parse::<GroupWord>().is_err());
    }

    #[test]
    fn matrix_text_round_trip() {
        let a: Mat2 = "[[1, 0], [1, 1]]".parse().unwrap();
        assert_eq!(a.to_string(), "[[1,0],[1,1]]");
        let big: Mat2 = "[[1,123456789012345678901234567890],[0,1]]"
            .parse()
            .unwrap();
        assert_eq!(big.to_string().parse::<Mat2>().unwrap(), big);
        assert!("[[1,2],[3,4]]".parse::<Mat2>().is_err());
        assert!("[[1,2]]".parse::<Mat2>().is_err());
    }

    /// Homomorphisms C2 * C3 -> C^x: choose chi(S) in {+-1} and chi(ST) a
    /// cube root of unity; then chi(T) = chi(S)^-1 chi(ST).
    #[test]
    fn enumeration_matches_free_product_oracle() {
        let mut oracle: Vec<u8> = Vec::new();
        for s in [0i64, 3] {
            for st in [0i64, 2, 4] {
                oracle.push(RootOfUnity6::new(st - s).exponent());
            }
        }
        oracle.sort();
        let ours: Vec<u8> = enumerate_characters().iter().map(|c| c.residue()).collect();
        assert_eq!(ours, oracle);
        let real: Vec<u8> = enumerate_characters()
            .into_iter()
            .filter(|c| c.is_real())
            .map(|c| c.residue())
            .collect();
        assert_eq!(real, vec![0, 3]);
        let chi = Character::chi();
        assert_eq!(chi.on_s().as_sign(), Some(-1));
        assert_eq!(chi.on_t().as_sign(), Some(-1));
    }

    #[test]
    fn char_eval_examples() {
        let chi = Character::chi();
        assert_eq!(char_eval(chi, &Mat2::t()).unwrap().to_string(), "-1");
        for c in enumerate_characters() {
            assert!(char_eval(c, &Mat2::identity()).unwrap().is_one());
            assert!(char_eval(c, &Mat2::identity().neg()).unwrap().is_one());
        }
    }

    #[test]
    fn membership_examples() {
        assert!(membership(&Mat2::t_pow(2), CongruenceGroup::Gamma2));
        assert!(!membership(&Mat2::s(), CongruenceGroup::Gamma0_4));
        let st4s = Gamma04Gen::ST4S.matrix();
        assert_eq!(st4s, m(-1, 0, 4, -1));
        assert!(membership(&st4s, CongruenceGroup::Gamma0_4));
        assert!(membership(&st4s, CongruenceGroup::Gamma0_2));
    }

    #[test]
    fn gamma0_4_examples() {
        let w = decompose_gamma0_4(&Mat2::t_pow(2)).unwrap();
        assert_eq!(w.to_string(), "T^2");
        let w = decompose_gamma0_4(&Gamma04Gen::ST4S.matrix()).unwrap();
        assert_eq!(w.to_string(), "(ST^4S)");
        let w = decompose_gamma0_4(&Mat2::t()).unwrap();
        assert_eq!(w.to_string(), "T");
        assert!(!w.uses_even_translations());
        assert_eq!(
            decompose_gamma0_4(&Mat2::s()),
            Err(WordError::NotInGroup("Gamma0(4)"))
        );
        let parsed: Gamma04Word = "-T^2 (ST^4S)^-3".parse().unwrap();
        assert_eq!(parsed.to_string(), "-T^2 (ST^4S)^-3");
        assert_eq!(decompose_gamma0_4(&parsed.to_matrix()).unwrap(), parsed);
    }

    #[test]
    fn reports_pass() {
        assert!(verify_character_enumeration(7, 200).pass);
        assert!(verify_gamma0_4_generators(7, 500, 1000).pass);
    }

    #[test]
    fn word_length_is_logarithmic() {
        let big = m(1_000_000_007, 1, 1_000_000_006, 1);
        let w = matrix_to_word(&big).unwrap();
        assert!(w.syllable_count() as u64 <= 4 * (big.max_bits() + 2));
        assert_eq!(word_to_matrix(&w), big);
    }
}
