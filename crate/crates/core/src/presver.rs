//! Rewriting in the algebra generated by `E+`, `E-`, `K`, `K-` (for `K^{-1}`)
//! subject to
//!
//! ```text
//! K E+ = v^e E+ K,   K E- = v^-e E- K,   E+ E- - E- E+ = (K - K^-1) / (v^d - v^-d)
//! ```
//!
//! together with exact checks of the Serre-type consequences of these
//! relations and of the free-algebra telescoping identity.
//!
//! Every word is rewritten to the ordered form `E-^b K^a E+^m`. The rule set
//! is terminating and its normal forms are a basis, so an expression is zero
//! in the algebra exactly when its normal form has no terms.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::qlaurent::{eval_sqrt_q, qbinom, qint, LaurentPoly, QScalar};

/// Default bound on the number of rule applications in one reduction.
pub const TRACE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresError {
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("unknown generator symbol {0:?}")]
    UnknownSymbol(String),
    #[error("reduction exceeded {0} rule applications")]
    TraceCapExceeded(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
}

// ---- rational functions in v ----

/// Element of `Q(v)` as a reduced fraction of Laurent polynomials.
///
/// The denominator is a monic polynomial with nonzero constant term and is
/// coprime to the numerator, so structural equality is equality of values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatLaurent {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatLaurent {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, PresError> {
        if den.is_zero() {
            return Err(PresError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lo = den.min_exp().unwrap();
        let lc = den.coeff(den.max_exp().unwrap());
        let inv = lc.recip();
        Self { num: num.shift(-lo).scale(&inv), den: den.shift(-lo).scale(&inv) }
    }

    pub fn zero() -> Self {
        Self { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self { num: p, den: LaurentPoly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    /// `v^e`.
    pub fn v_pow(e: i64) -> Self {
        Self::from_poly(LaurentPoly::v_pow(e))
    }

    /// `1 / (v^d - v^-d)`.
    pub fn commutator_scalar(d: u32) -> Self {
        let d = d as i64;
        Self::reduce(LaurentPoly::one(), LaurentPoly::from_pairs([(1, d), (-1, -d)]))
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The value as a Laurent polynomial, if the denominator is trivial.
    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        self.den.is_one().then_some(&self.num)
    }

    /// Multiplication by `v^e` (keeps the fraction reduced for free).
    pub fn shift(&self, e: i64) -> Self {
        Self { num: self.num.shift(e), den: self.den.clone() }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::reduce(self.den.clone(), self.num.clone()))
    }

    /// Value at `v = √q`; `None` if the denominator vanishes there.
    pub fn eval_sqrt_q(&self, q: u64) -> Option<QScalar> {
        let d = eval_sqrt_q(&self.den, q);
        Some(eval_sqrt_q(&self.num, q) * d.inv()?)
    }
}

impl Default for RatLaurent {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for RatLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &RatLaurent {
    type Output = RatLaurent;
    fn add(self, rhs: &RatLaurent) -> RatLaurent {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatLaurent::reduce(&self.num + &rhs.num, self.den.clone());
        }
        RatLaurent::reduce(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub for &RatLaurent {
    type Output = RatLaurent;
    fn sub(self, rhs: &RatLaurent) -> RatLaurent {
        self + &(-rhs)
    }
}

impl Mul for &RatLaurent {
    type Output = RatLaurent;
    fn mul(self, rhs: &RatLaurent) -> RatLaurent {
        if self.is_zero() || rhs.is_zero() {
            return RatLaurent::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatLaurent::from_poly(&self.num * &rhs.num);
        }
        RatLaurent::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatLaurent {
    type Output = RatLaurent;
    fn neg(self) -> RatLaurent {
        RatLaurent { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatLaurent {
            type Output = RatLaurent;
            fn $m(self, rhs: RatLaurent) -> RatLaurent {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatLaurent {
    type Output = RatLaurent;
    fn neg(self) -> RatLaurent {
        -&self
    }
}

impl From<LaurentPoly> for RatLaurent {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, RatLaurent>, key: K, c: RatLaurent) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get() + &c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

// ---- free algebra ----

/// Element of the free algebra over `Q(v)` on string-named generators.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct NCExpr {
    terms: BTreeMap<Vec<String>, RatLaurent>,
}

impl NCExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The empty word with coefficient one.
    pub fn one() -> Self {
        Self::word(&[] as &[&str])
    }

    pub fn word<S: AsRef<str>>(symbols: &[S]) -> Self {
        Self::term(RatLaurent::one(), symbols)
    }

    pub fn term<S: AsRef<str>>(c: RatLaurent, symbols: &[S]) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(symbols.iter().map(|s| s.as_ref().to_string()).collect(), c);
        }
        Self { terms }
    }

    /// `g^n` for a single generator.
    pub fn power(symbol: &str, n: usize) -> Self {
        Self::word(&vec![symbol; n])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[String], &RatLaurent)> {
        self.terms.iter().map(|(w, c)| (w.as_slice(), c))
    }

    pub fn coeff<S: AsRef<str>>(&self, symbols: &[S]) -> RatLaurent {
        let key: Vec<String> = symbols.iter().map(|s| s.as_ref().to_string()).collect();
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &RatLaurent) -> Self {
        let mut out = Self::zero();
        for (w, x) in &self.terms {
            add_into(&mut out.terms, w.clone(), x * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl Add for &NCExpr {
    type Output = NCExpr;
    fn add(self, rhs: &NCExpr) -> NCExpr {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            add_into(&mut out.terms, w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &NCExpr {
    type Output = NCExpr;
    fn sub(self, rhs: &NCExpr) -> NCExpr {
        self + &(-rhs)
    }
}

impl Mul for &NCExpr {
    type Output = NCExpr;
    fn mul(self, rhs: &NCExpr) -> NCExpr {
        let mut out = NCExpr::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                let mut w = w1.clone();
                w.extend(w2.iter().cloned());
                add_into(&mut out.terms, w, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &NCExpr {
    type Output = NCExpr;
    fn neg(self) -> NCExpr {
        NCExpr { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }
}

macro_rules! forward_owned_expr {
    ($tr:ident, $m:ident) => {
        impl $tr for NCExpr {
            type Output = NCExpr;
            fn $m(self, rhs: NCExpr) -> NCExpr {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned_expr!(Add, add);
forward_owned_expr!(Sub, sub);
forward_owned_expr!(Mul, mul);

impl fmt::Display for NCExpr {
    /// Same syntax as [`parse_expr`] accepts, with rational coefficients
    /// written `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " ; ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for s in w {
                write!(f, " {s}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NCExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `Σ_{p=0}^{m} (-1)^p [m; p]_d x^p y x^{m-p}`.
pub fn serre_sum(x: &str, y: &str, m: u32, d: u32) -> NCExpr {
    let mut out = NCExpr::zero();
    for p in 0..=m {
        let mut c = qbinom(m, p, d);
        if p % 2 == 1 {
            c = -c;
        }
        let mut w = vec![x; p as usize];
        w.push(y);
        w.extend(std::iter::repeat_n(x, (m - p) as usize));
        out = &out + &NCExpr::term(c.into(), &w);
    }
    out
}

/// The Serre-type sum `Σ_{p=0}^{2n+1} (-1)^p [2n+1; p]_d (E+)^p E- (E+)^{2n+1-p}`.
pub fn serre_mixed_expr(n: u32, d: u32) -> NCExpr {
    assert!(n >= 1, "n must be positive");
    serre_sum("E+", "E-", 2 * n + 1, d)
}

/// The same sum with the roles of `E+` and `E-` exchanged.
pub fn serre_mixed_expr_mirrored(n: u32, d: u32) -> NCExpr {
    assert!(n >= 1, "n must be positive");
    serre_sum("E-", "E+", 2 * n + 1, d)
}

// ---- normal forms ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    EMinus,
    K,
    KInv,
    EPlus,
}

impl Gen {
    pub fn parse(s: &str) -> Result<Self, PresError> {
        match s {
            "E+" => Ok(Gen::EPlus),
            "E-" => Ok(Gen::EMinus),
            "K" => Ok(Gen::K),
            "K-" => Ok(Gen::KInv),
            _ => Err(PresError::UnknownSymbol(s.to_string())),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Gen::EPlus => "E+",
            Gen::EMinus => "E-",
            Gen::K => "K",
            Gen::KInv => "K-",
        }
    }

    fn rank(self) -> u8 {
        match self {
            Gen::EMinus => 0,
            Gen::K | Gen::KInv => 1,
            Gen::EPlus => 2,
        }
    }
}

/// Rewrite rules, named by the relation they use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `E+ E- -> E- E+ + (K - K^-1)/(v^d - v^-d)`.
    Commutator,
    /// `E+ K^{±1} -> v^{∓e} K^{±1} E+`.
    TorusPlus,
    /// `K^{±1} E- -> v^{∓e} E- K^{±1}`.
    TorusMinus,
    /// `K K^-1 -> 1` and `K^-1 K -> 1`.
    Cancel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: Rule,
    pub position: usize,
}

/// Which redex to rewrite when a word has several.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RewriteOrder {
    #[default]
    Leftmost,
    Rightmost,
    /// Uniformly random redex from a seeded generator.
    Shuffled(u64),
}

/// `Σ c · E-^b K^a E+^m`, keyed by `(b, a, m)`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct NormalElem {
    terms: BTreeMap<(u32, i64, u32), RatLaurent>,
}

impl NormalElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `E-^b K^a E+^m`.
    pub fn coeff(&self, b: u32, a: i64, m: u32) -> RatLaurent {
        self.terms.get(&(b, a, m)).cloned().unwrap_or_default()
    }

    /// Coefficient of `K^a E+^m`.
    pub fn coeff_km(&self, a: i64, m: u32) -> RatLaurent {
        self.coeff(0, a, m)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, i64, u32), &RatLaurent)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn scale(&self, c: &RatLaurent) -> Self {
        let mut out = Self::zero();
        for (k, x) in &self.terms {
            add_into(&mut out.terms, *k, x * c);
        }
        out
    }
}

impl Add for &NormalElem {
    type Output = NormalElem;
    fn add(self, rhs: &NormalElem) -> NormalElem {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            add_into(&mut out.terms, *k, c.clone());
        }
        out
    }
}

impl Sub for &NormalElem {
    type Output = NormalElem;
    fn sub(self, rhs: &NormalElem) -> NormalElem {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            add_into(&mut out.terms, *k, -c);
        }
        out
    }
}

impl fmt::Display for NormalElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(b, a, m), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if b > 0 {
                write!(f, " E-^{b}")?;
            }
            if a != 0 {
                write!(f, " K^{a}")?;
            }
            if m > 0 {
                write!(f, " E+^{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NormalElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Result of a reduction together with the rules applied.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub normal: NormalElem,
    pub trace: Vec<TraceStep>,
}

fn is_redex(a: Gen, b: Gen) -> bool {
    a.rank() > b.rank() || matches!((a, b), (Gen::K, Gen::KInv) | (Gen::KInv, Gen::K))
}

fn normal_key(w: &[Gen]) -> (u32, i64, u32) {
    let mut key = (0u32, 0i64, 0u32);
    for g in w {
        match g {
            Gen::EMinus => key.0 += 1,
            Gen::K => key.1 += 1,
            Gen::KInv => key.1 -= 1,
            Gen::EPlus => key.2 += 1,
        }
    }
    key
}

fn to_gens(e: &NCExpr) -> Result<Vec<(Vec<Gen>, RatLaurent)>, PresError> {
    e.terms
        .iter()
        .map(|(w, c)| Ok((w.iter().map(|s| Gen::parse(s)).collect::<Result<Vec<_>, _>>()?, c.clone())))
        .collect()
}

/// Rewrites `e` to normal form with torus exponent `exponent` and commutator
/// scalar `1/(v^d - v^-d)`. Any number of `E-` per word is accepted.
pub fn reduce(e: &NCExpr, d: u32, exponent: i64, order: RewriteOrder, cap: usize) -> Result<Reduction, PresError> {
    let c = RatLaurent::commutator_scalar(d);
    let mut rng = match order {
        RewriteOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut pending: BTreeMap<Vec<Gen>, RatLaurent> = BTreeMap::new();
    for (w, x) in to_gens(e)? {
        add_into(&mut pending, w, x);
    }
    let mut normal = NormalElem::zero();
    let mut trace = Vec::new();
    while let Some((w, x)) = pending.pop_first() {
        let redexes: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&i| is_redex(w[i], w[i + 1])).collect();
        if redexes.is_empty() {
            add_into(&mut normal.terms, normal_key(&w), x);
            continue;
        }
        if trace.len() >= cap {
            return Err(PresError::TraceCapExceeded(cap));
        }
        let i = match (&mut rng, order) {
            (Some(r), _) => redexes[r.gen_range(0..redexes.len())],
            (None, RewriteOrder::Rightmost) => *redexes.last().unwrap(),
            _ => redexes[0],
        };
        let swapped = || {
            let mut s = w.clone();
            s.swap(i, i + 1);
            s
        };
        let replaced = |mid: &[Gen]| {
            let mut s = w[..i].to_vec();
            s.extend_from_slice(mid);
            s.extend_from_slice(&w[i + 2..]);
            s
        };
        let rule = match (w[i], w[i + 1]) {
            (Gen::EPlus, Gen::EMinus) => {
                let cx = &x * &c;
                add_into(&mut pending, swapped(), x.clone());
                add_into(&mut pending, replaced(&[Gen::K]), cx.clone());
                add_into(&mut pending, replaced(&[Gen::KInv]), -cx);
                Rule::Commutator
            }
            (Gen::EPlus, t) => {
                let s = if t == Gen::K { -exponent } else { exponent };
                add_into(&mut pending, swapped(), x.shift(s));
                Rule::TorusPlus
            }
            (t, Gen::EMinus) => {
                let s = if t == Gen::K { -exponent } else { exponent };
                add_into(&mut pending, swapped(), x.shift(s));
                Rule::TorusMinus
            }
            _ => {
                add_into(&mut pending, replaced(&[]), x);
                Rule::Cancel
            }
        };
        trace.push(TraceStep { rule, position: i });
    }
    Ok(Reduction { normal, trace })
}

/// Normal form of an expression with at most one `E-` per word.
pub fn reduce_mixed(e: &NCExpr, d: u32, exponent: i64) -> Result<NormalElem, PresError> {
    reduce_mixed_traced(e, d, exponent, RewriteOrder::Leftmost).map(|r| r.normal)
}

pub fn reduce_mixed_traced(e: &NCExpr, d: u32, exponent: i64, order: RewriteOrder) -> Result<Reduction, PresError> {
    for (w, _) in e.terms() {
        if w.iter().filter(|s| s.as_str() == "E-").count() >= 2 {
            return Err(PresError::UnsupportedShape(format!("word {} has more than one E-", w.join(" "))));
        }
    }
    reduce(e, d, exponent, order, TRACE_CAP)
}

/// Outcome of the Serre-sum check for one `(n, d)`.
#[derive(Debug, Clone)]
pub struct Lemma41Outcome {
    pub holds: bool,
    pub residue: NormalElem,
    pub mirrored_residue: NormalElem,
    pub trace_len: usize,
}

/// Checks that both mixed Serre sums of order `2n+1` reduce to zero with
/// torus exponent `2d` and commutator scalar `1/(v^d - v^-d)`.
pub fn check_lemma_41_traced(n: u32, d: u32) -> Result<Lemma41Outcome, PresError> {
    let e = 2 * d as i64;
    let plus = reduce_mixed_traced(&serre_mixed_expr(n, d), d, e, RewriteOrder::Leftmost)?;
    let minus = reduce(&serre_mixed_expr_mirrored(n, d), d, e, RewriteOrder::Leftmost, TRACE_CAP)?;
    Ok(Lemma41Outcome {
        holds: plus.normal.is_zero() && minus.normal.is_zero(),
        trace_len: plus.trace.len() + minus.trace.len(),
        residue: plus.normal,
        mirrored_residue: minus.normal,
    })
}

pub fn check_lemma_41(n: u32, d: u32) -> bool {
    check_lemma_41_traced(n, d).map(|o| o.holds).unwrap_or(false)
}

/// `x^m y - y x^m = Σ_{a+a'=m-1} x^a (xy - yx) x^{a'}` in the free algebra.
pub fn check_s2(m: u32) -> bool {
    assert!(m >= 1, "m must be positive");
    let x = NCExpr::word(&["x"]);
    let y = NCExpr::word(&["y"]);
    let xm = x.pow(m);
    let lhs = &(&xm * &y) - &(&y * &xm);
    let comm = &(&x * &y) - &(&y * &x);
    let mut rhs = NCExpr::zero();
    for a in 0..m {
        rhs = &rhs + &(&(&x.pow(a) * &comm) * &x.pow(m - 1 - a));
    }
    lhs == rhs
}

/// The pairing step: the alternating sum of order `N = 2n+1` equals
/// `Σ_{p=0}^{n} (-1)^{p+1} [N; p]_d x^p (x^{N-2p} y - y x^{N-2p}) x^p`.
pub fn check_s2_reduction(n: u32, d: u32) -> bool {
    let big_n = 2 * n + 1;
    let lhs = serre_sum("x", "y", big_n, d);
    let x = NCExpr::word(&["x"]);
    let y = NCExpr::word(&["y"]);
    let mut rhs = NCExpr::zero();
    for p in 0..=n {
        let mut c = qbinom(big_n, p, d);
        if p % 2 == 0 {
            c = -c;
        }
        let xk = x.pow(big_n - 2 * p);
        let inner = &(&xk * &y) - &(&y * &xk);
        let term = &(&x.pow(p) * &inner) * &x.pow(p);
        rhs = &rhs + &term.scale(&c.into());
    }
    lhs == rhs
}

/// `Σ_{a=0}^{2n-2p} (E+)^{p+a} K (E+)^{2n-p-a} = [2(n-p)+1] (E+)^n K (E+)^n`
/// after reduction with torus exponent 2.
pub fn check_term_a(n: u32, p: u32) -> bool {
    assert!(p <= n, "p must lie in 0..=n");
    let word = |left: u32, right: u32| {
        let mut w = vec!["E+"; left as usize];
        w.push("K");
        w.extend(std::iter::repeat_n("E+", right as usize));
        NCExpr::word(&w)
    };
    let mut lhs = NCExpr::zero();
    for a in 0..=(2 * n - 2 * p) {
        lhs = &lhs + &word(p + a, 2 * n - p - a);
    }
    let rhs = word(n, n).scale(&qint(2 * (n as i64 - p as i64) + 1, 1).into());
    match (reduce_mixed(&lhs, 1, 2), reduce_mixed(&rhs, 1, 2)) {
        (Ok(l), Ok(r)) => l == r,
        _ => false,
    }
}

/// Compares, for every `p`, the `K (E+)^{2n}` coefficient of the reduced
/// paired Serre term `(E+)^p ((E+)^{N-2p} E- - E- (E+)^{N-2p}) (E+)^p` with
/// `v^{-2n} [2(n-p)+1] / (v - v^-1)`, and checks that their signed binomial
/// combination is the `K (E+)^{2n}` coefficient of the full sum, namely zero.
pub fn check_k_coefficient_chain(n: u32) -> bool {
    let big_n = 2 * n + 1;
    let c = RatLaurent::commutator_scalar(1);
    let e_plus = NCExpr::word(&["E+"]);
    let e_minus = NCExpr::word(&["E-"]);
    let mut total = RatLaurent::zero();
    for p in 0..=n {
        let xk = e_plus.pow(big_n - 2 * p);
        let inner = &(&xk * &e_minus) - &(&e_minus * &xk);
        let term = &(&e_plus.pow(p) * &inner) * &e_plus.pow(p);
        let Ok(nf) = reduce_mixed(&term, 1, 2) else { return false };
        let expect = &RatLaurent::from_poly(qint(2 * (n - p) as i64 + 1, 1).shift(-2 * n as i64)) * &c;
        if nf.coeff_km(1, 2 * n) != expect {
            return false;
        }
        let mut b = qbinom(big_n, p, 1);
        if p % 2 == 0 {
            b = -b;
        }
        total = &total + &(&RatLaurent::from_poly(b) * &expect);
    }
    let Ok(full) = reduce_mixed(&serre_mixed_expr(n, 1), 1, 2) else { return false };
    total.is_zero() && full.coeff_km(1, 2 * n) == total
}

// ---- text syntax ----

fn parse_rational(s: &str) -> Result<BigRational, PresError> {
    let err = || PresError::Parse(format!("bad coefficient {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| err())?;
            let b: i64 = b.trim().parse().map_err(|_| err())?;
            if b == 0 {
                return Err(err());
            }
            Ok(BigRational::new(a.into(), b.into()))
        }
        None => Ok(BigRational::from_integer(s.trim().parse::<i64>().map_err(|_| err())?.into())),
    }
}

/// Parses `"(1@2,1,1@-2) E+ E+ E- ; (-1) E- E+"`: terms separated by `;`,
/// each a Laurent coefficient `(c@e, ...)` (plain `c` means `c@0`) followed
/// by whitespace-separated generator symbols.
pub fn parse_expr(text: &str) -> Result<NCExpr, PresError> {
    let mut out = NCExpr::zero();
    for raw in text.split(';') {
        let term = raw.trim();
        if term.is_empty() {
            continue;
        }
        let (coef, rest) = if let Some(body) = term.strip_prefix('(') {
            let close = body.find(')').ok_or_else(|| PresError::Parse(format!("unclosed coefficient in {term:?}")))?;
            let mut poly = LaurentPoly::zero();
            for part in body[..close].split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                let (c, e) = match part.split_once('@') {
                    Some((c, e)) => {
                        (parse_rational(c)?, e.trim().parse::<i64>().map_err(|_| PresError::Parse(format!("bad exponent {e:?}")))?)
                    }
                    None => (parse_rational(part)?, 0),
                };
                poly = &poly + &LaurentPoly::monomial(c, e);
            }
            (poly, &body[close + 1..])
        } else {
            (LaurentPoly::one(), term)
        };
        let word: Vec<&str> = rest.split_whitespace().collect();
        out = &out + &NCExpr::term(coef.into(), &word);
    }
    Ok(out)
}

/// Sanity value: `Σ_{p=0}^{m} (-1)^p [m; p]_d` (zero for odd `m`).
pub fn alternating_binomial_sum(m: u32, d: u32) -> LaurentPoly {
    let mut s = LaurentPoly::zero();
    for p in 0..=m {
        let b = qbinom(m, p, d);
        s = if p % 2 == 0 { &s + &b } else { &s - &b };
    }
    s
}
