//! Laurent polynomials in `v` with rational coefficients, quantum integers and
//! binomials, and exact evaluation at `v = √q`.
//!
//! Everything here is exact. Coefficients are arbitrary precision rationals
//! so that no intermediate product can overflow.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Element of `Q[v, v^{-1}]`, stored as a sparse exponent map with no zero
/// coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    /// `c * v^e`.
    pub fn monomial(c: BigRational, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// `v^e`.
    pub fn v_pow(e: i64) -> Self {
        Self::monomial(BigRational::one(), e)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(BigRational::from_integer(c.into()), 0)
    }

    /// Builds a polynomial from `(coefficient, exponent)` pairs; repeated
    /// exponents are summed.
    pub fn from_pairs<I: IntoIterator<Item = (i64, i64)>>(pairs: I) -> Self {
        let mut out = Self::zero();
        for (c, e) in pairs {
            out.add_term(e, BigRational::from_integer(c.into()));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, e: i64) -> BigRational {
        self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, e: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// Substitutes `v ↦ v^d` (`d ≥ 1`).
    pub fn substitute_power(&self, d: i64) -> Self {
        assert!(d >= 1);
        Self { terms: self.terms.iter().map(|(e, c)| (e * d, c.clone())).collect() }
    }

    /// The bar involution `v ↦ v^{-1}`.
    pub fn bar(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// True when all coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    fn leading(&self) -> Option<(i64, &BigRational)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    /// Polynomial long division of the ordinary-polynomial parts. Both
    /// operands are first shifted so their lowest exponent is zero; returns
    /// `(quotient, remainder)` of those shifted polynomials.
    fn poly_div_rem(num: &Self, den: &Self) -> (Self, Self) {
        let den_lo = den.min_exp().expect("division by zero polynomial");
        let den = den.shift(-den_lo);
        let mut rem = match num.min_exp() {
            Some(lo) => num.shift(-lo),
            None => return (Self::zero(), Self::zero()),
        };
        let (dd, dc) = den.leading().map(|(e, c)| (e, c.clone())).unwrap();
        let mut quot = Self::zero();
        while let Some((re, rc)) = rem.leading().map(|(e, c)| (e, c.clone())) {
            if re < dd {
                break;
            }
            let factor = rc / &dc;
            let step = Self::monomial(factor, re - dd);
            rem = &rem - &(&step * &den);
            quot = &quot + &step;
        }
        (quot, rem)
    }

    /// Exact division. Returns `None` if `den` does not divide `self` in
    /// `Q[v, v^{-1}]`.
    pub fn div_exact(&self, den: &Self) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (q, r) = Self::poly_div_rem(self, den);
        if !r.is_zero() {
            return None;
        }
        Some(q.shift(self.min_exp().unwrap() - den.min_exp().unwrap()))
    }

    /// Greatest common divisor in `Q[v, v^{-1}]`, normalized to a monic
    /// polynomial with lowest exponent zero (units `c·v^k` are discarded).
    pub fn gcd(&self, other: &Self) -> Self {
        let normalize = |p: &Self| -> Self {
            match (p.min_exp(), p.leading()) {
                (Some(lo), Some((_, lc))) => p.shift(-lo).scale(&lc.recip()),
                _ => Self::zero(),
            }
        };
        let mut a = normalize(self);
        let mut b = normalize(other);
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.max_exp() < b.max_exp() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let (_, r) = Self::poly_div_rem(&a, &b);
            a = b;
            b = normalize(&r);
        }
        a
    }

    /// Rational content: gcd of the numerators over lcm of the denominators.
    pub fn content(&self) -> BigRational {
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        if num.is_zero() {
            return BigRational::one();
        }
        BigRational::new(num, den)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = abs.is_one();
            match (*e, unit) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "v")?,
                (1, false) => write!(f, "{abs}*v")?,
                (e, true) => write!(f, "v^{e}")?,
                (e, false) => write!(f, "{abs}*v^{e}")?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// Balanced quantum integer `[m]_d = (v^{dm} - v^{-dm}) / (v^d - v^{-d})`.
///
/// Negative `m` gives `-[−m]_d`.
pub fn qint(m: i64, d: u32) -> LaurentPoly {
    assert!(d >= 1, "symmetrizer exponent must be positive");
    if m < 0 {
        return -qint(-m, d);
    }
    let d = d as i64;
    // v^{d(m-1)} + v^{d(m-3)} + ... + v^{-d(m-1)}
    LaurentPoly::from_pairs((0..m).map(|k| (1, d * (m - 1 - 2 * k))))
}

/// `[m]_d^! = [1]_d [2]_d ... [m]_d`.
pub fn qfact(m: u32, d: u32) -> LaurentPoly {
    (1..=m as i64).fold(LaurentPoly::one(), |acc, t| &acc * &qint(t, d))
}

/// Balanced q-binomial `[m; t]_d = [m]^! / ([t]^! [m-t]^!)`.
///
/// Computed as `v^{-d t(m-t)} G(v^{2d})` where `G(x)` is the Gaussian
/// binomial built row by row from `G(m,t) = G(m-1,t-1) + x^t G(m-1,t)`.
///
/// Panics if `t > m`.
pub fn qbinom(m: u32, t: u32, d: u32) -> LaurentPoly {
    assert!(t <= m, "qbinom requires t <= m (got t={t}, m={m})");
    assert!(d >= 1, "symmetrizer exponent must be positive");
    let t = t.min(m - t) as usize;
    // row[k] holds the coefficients of G(r, k) for the current row r
    let mut row: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for r in 1..=m as usize {
        let top = t.min(r);
        let mut next: Vec<Vec<BigInt>> = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let deg = k * (r - k);
            let mut c = vec![BigInt::zero(); deg + 1];
            if k >= 1 {
                for (i, x) in row[k - 1].iter().enumerate() {
                    c[i] += x;
                }
            }
            if k < row.len() && k < r {
                for (i, x) in row[k].iter().enumerate() {
                    c[i + k] += x;
                }
            }
            next.push(c);
        }
        row = next;
    }
    let d = d as i64;
    let shift = -d * (t as i64) * (m as i64 - t as i64);
    let mut out = LaurentPoly::zero();
    for (i, c) in row[t].iter().enumerate() {
        out.add_term(shift + 2 * d * i as i64, BigRational::from_integer(c.clone()));
    }
    out
}

/// Partial sum `B_{n,i} = Σ_{p=n-i+1}^{n} (-1)^p [2n+1; p] [2(n-p)+1]`.
pub fn b_partial_sum(n: u32, i: u32) -> LaurentPoly {
    assert!(n >= 1 && (1..=n).contains(&i), "need 1 <= i <= n");
    let big_n = 2 * n + 1;
    let mut acc = LaurentPoly::zero();
    for p in (n - i + 1)..=n {
        let term = &qbinom(big_n, p, 1) * &qint(2 * (n as i64 - p as i64) + 1, 1);
        acc = if p % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Failure of an identity that is expected to hold exactly.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("identity violated: {what}")]
pub struct IdentityViolation {
    pub what: String,
}

/// Closed form `-(-1)^{n-i} [2n+1; n-i] [n+i+1][i] / [n]`.
///
/// Errors if `[n]` does not divide the numerator exactly.
pub fn b_closed_form(n: u32, i: u32) -> Result<LaurentPoly, IdentityViolation> {
    assert!(n >= 1 && (1..=n).contains(&i), "need 1 <= i <= n");
    let num = &(&qbinom(2 * n + 1, n - i, 1) * &qint((n + i + 1) as i64, 1)) * &qint(i as i64, 1);
    let quot = num.div_exact(&qint(n as i64, 1)).ok_or_else(|| IdentityViolation {
        what: format!("[{n}] does not divide the closed-form numerator for (n,i)=({n},{i})"),
    })?;
    Ok(if (n - i).is_multiple_of(2) { -quot } else { quot })
}

/// `[2i+1][n] - [n+i+1][i] == [n-i][i+1]`.
pub fn check_identity_4_2(n: u32, i: u32) -> bool {
    assert!(n >= 1 && (1..=n).contains(&i), "need 1 <= i <= n");
    let (n, i) = (n as i64, i as i64);
    let lhs = &(&qint(2 * i + 1, 1) * &qint(n, 1)) - &(&qint(n + i + 1, 1) * &qint(i, 1));
    let rhs = &qint(n - i, 1) * &qint(i + 1, 1);
    lhs == rhs
}

/// Exact element `a + b√q` of `Q(√q)`.
///
/// When `q` is a perfect square the `√q` part is folded into `a`, so `b` is
/// always zero and the ring is just `Q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QScalar {
    a: BigRational,
    b: BigRational,
    q: u64,
}

fn exact_sqrt(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|x| x * x == n)
}

impl QScalar {
    pub fn new(a: BigRational, b: BigRational, q: u64) -> Self {
        assert!(q >= 1, "q must be positive");
        match exact_sqrt(q) {
            Some(s) => Self { a: a + b * BigRational::from_integer(s.into()), b: BigRational::zero(), q },
            None => Self { a, b, q },
        }
    }

    pub fn rational(a: BigRational, q: u64) -> Self {
        Self::new(a, BigRational::zero(), q)
    }

    pub fn from_int(a: i64, q: u64) -> Self {
        Self::rational(BigRational::from_integer(a.into()), q)
    }

    pub fn zero(q: u64) -> Self {
        Self::from_int(0, q)
    }

    pub fn one(q: u64) -> Self {
        Self::from_int(1, q)
    }

    /// `√q`.
    pub fn sqrt_q(q: u64) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), q)
    }

    /// `(√q)^k` for any integer `k`.
    pub fn v_pow(k: i64, q: u64) -> Self {
        let half = k.div_euclid(2);
        let base = BigRational::from_integer(q.into());
        let rat = if half >= 0 {
            num_traits::pow(base, half as usize)
        } else {
            num_traits::pow(base, (-half) as usize).recip()
        };
        if k.rem_euclid(2) == 0 {
            Self::rational(rat, q)
        } else {
            Self::new(BigRational::zero(), rat, q)
        }
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.q, other.q, "QScalar values over different q");
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // (a - b√q) / (a² - q b²); the norm is nonzero because √q is irrational
        // whenever b can be nonzero.
        let qr = BigRational::from_integer(self.q.into());
        let norm = &self.a * &self.a - &qr * &self.b * &self.b;
        Some(Self::new(&self.a / &norm, -&self.b / &norm, self.q))
    }

    /// Square root inside `Q(√q)`, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        let q = self.q;
        let qr = BigRational::from_integer(q.into());
        if self.is_zero() {
            return Some(self.clone());
        }
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(Self::rational(r, q));
            }
            if exact_sqrt(q).is_none() {
                if let Some(r) = rational_sqrt(&(&self.a / &qr)) {
                    return Some(Self::new(BigRational::zero(), r, q));
                }
            }
            return None;
        }
        // (c + d√q)² = a + b√q  ⇒  c² = (a ± √(a² − q b²)) / 2, d = b / 2c.
        let disc = &self.a * &self.a - &qr * &self.b * &self.b;
        let root = rational_sqrt(&disc)?;
        let two = BigRational::from_integer(2.into());
        for cand in [(&self.a + &root) / &two, (&self.a - &root) / &two] {
            if let Some(c) = rational_sqrt(&cand) {
                if c.is_zero() {
                    continue;
                }
                let d = &self.b / (&two * &c);
                let s = Self::new(c, d, q);
                if &s * &s == *self {
                    return Some(s);
                }
            }
        }
        None
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.q);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt({})", self.b, self.q)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.q)
        }
    }
}

impl Add for &QScalar {
    type Output = QScalar;
    fn add(self, rhs: &QScalar) -> QScalar {
        self.check(rhs);
        QScalar { a: &self.a + &rhs.a, b: &self.b + &rhs.b, q: self.q }
    }
}

impl Sub for &QScalar {
    type Output = QScalar;
    fn sub(self, rhs: &QScalar) -> QScalar {
        self.check(rhs);
        QScalar { a: &self.a - &rhs.a, b: &self.b - &rhs.b, q: self.q }
    }
}

impl Mul for &QScalar {
    type Output = QScalar;
    fn mul(self, rhs: &QScalar) -> QScalar {
        self.check(rhs);
        let qr = BigRational::from_integer(self.q.into());
        QScalar {
            a: &self.a * &rhs.a + qr * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            q: self.q,
        }
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar { a: -self.a.clone(), b: -self.b.clone(), q: self.q }
    }
}

impl Add for QScalar {
    type Output = QScalar;
    fn add(self, rhs: QScalar) -> QScalar {
        &self + &rhs
    }
}

impl Sub for QScalar {
    type Output = QScalar;
    fn sub(self, rhs: QScalar) -> QScalar {
        &self - &rhs
    }
}

impl Mul for QScalar {
    type Output = QScalar;
    fn mul(self, rhs: QScalar) -> QScalar {
        &self * &rhs
    }
}

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -&self
    }
}

/// Substitutes `v = √q`.
pub fn eval_sqrt_q(p: &LaurentPoly, q: u64) -> QScalar {
    p.terms()
        .fold(QScalar::zero(q), |acc, (e, c)| &acc + &(&QScalar::rational(c.clone(), q) * &QScalar::v_pow(e, q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn qint_examples() {
        assert!(qint(0, 1).is_zero());
        assert_eq!(qint(3, 1), LaurentPoly::from_pairs([(1, 2), (1, 0), (1, -2)]));
        // (v^4 - v^-4)/(v^2 - v^-2) = v^2 + v^-2
        assert_eq!(qint(2, 2), LaurentPoly::from_pairs([(1, 2), (1, -2)]));
        assert_eq!(qint(-3, 2), -qint(3, 2));
    }

    #[test]
    fn qint_matches_defining_quotient() {
        for d in 1..=3u32 {
            for m in 0..12i64 {
                let num = &LaurentPoly::v_pow(m * d as i64) - &LaurentPoly::v_pow(-m * d as i64);
                let den = &LaurentPoly::v_pow(d as i64) - &LaurentPoly::v_pow(-(d as i64));
                assert_eq!(num.div_exact(&den).unwrap(), qint(m, d));
            }
        }
    }

    #[test]
    fn qfact_examples() {
        assert!(qfact(0, 1).is_one());
        assert_eq!(qfact(2, 1), LaurentPoly::from_pairs([(1, 1), (1, -1)]));
        assert_eq!(qfact(3, 1), LaurentPoly::from_pairs([(1, 3), (2, 1), (2, -1), (1, -3)]));
    }

    fn pascal(m: u32, t: u32) -> LaurentPoly {
        // [m;t] = v^t [m-1;t] + v^{t-m} [m-1;t-1]
        if t == 0 || t == m {
            return LaurentPoly::one();
        }
        &pascal(m - 1, t).shift(t as i64) + &pascal(m - 1, t - 1).shift(t as i64 - m as i64)
    }

    #[test]
    fn qbinom_examples() {
        for m in 0..6 {
            assert!(qbinom(m, 0, 2).is_one());
        }
        assert_eq!(qbinom(3, 1, 1), qint(3, 1));
        assert_eq!(qbinom(5, 2, 1), pascal(5, 2));
    }

    #[test]
    fn qbinom_symmetry_pascal_and_bar() {
        for d in 1..=3 {
            for m in 0..=15u32 {
                for t in 0..=m {
                    let b = qbinom(m, t, d);
                    assert_eq!(b, qbinom(m, m - t, d));
                    assert_eq!(b, b.bar());
                }
                assert_eq!(qint(m as i64, d), qint(m as i64, d).bar());
            }
        }
        for m in 2..=12u32 {
            for t in 1..m {
                let rhs = &qbinom(m - 1, t, 1).shift(t as i64)
                    + &qbinom(m - 1, t - 1, 1).shift(t as i64 - m as i64);
                assert_eq!(qbinom(m, t, 1), rhs);
            }
        }
    }

    #[test]
    fn qbinom_at_v_equal_one_is_ordinary_binomial() {
        let b = qbinom(41, 20, 1);
        assert!(b.is_integral());
        let total = b.terms().fold(BigRational::zero(), |acc, (_, c)| acc + c);
        // C(41, 20)
        assert_eq!(total, BigRational::from_integer(BigInt::from(269128937220u64)));
    }

    #[test]
    fn qbinom_matches_factorial_quotient() {
        for d in 1..=3 {
            for m in 0..=12u32 {
                for t in 0..=m {
                    let num = qfact(m, d);
                    let den = &qfact(t, d) * &qfact(m - t, d);
                    assert_eq!(qbinom(m, t, d), num.div_exact(&den).unwrap(), "m={m} t={t} d={d}");
                }
            }
        }
    }

    #[test]
    fn b_sums_and_closed_form() {
        assert_eq!(b_partial_sum(1, 1), -qint(3, 1));
        assert_eq!(b_partial_sum(2, 2), -qint(5, 1));
        assert_eq!(b_partial_sum(3, 2), b_closed_form(3, 2).unwrap());
        assert_eq!(b_closed_form(1, 1).unwrap(), LaurentPoly::from_pairs([(-1, 2), (-1, 0), (-1, -2)]));
        for n in 1..=5u32 {
            assert_eq!(b_closed_form(n, n).unwrap(), -qint(2 * n as i64 + 1, 1));
        }
        assert_eq!(b_closed_form(4, 2).unwrap(), b_partial_sum(4, 2));
    }

    #[test]
    fn identity_examples() {
        assert!(check_identity_4_2(1, 1));
        assert!(check_identity_4_2(5, 3));
        assert!(check_identity_4_2(12, 7));
    }

    #[test]
    fn exact_division_failure() {
        assert!(qint(5, 1).div_exact(&qint(2, 1)).is_none());
        assert!(LaurentPoly::one().div_exact(&LaurentPoly::zero()).is_none());
    }

    #[test]
    fn gcd_normalizes() {
        let a = &qint(6, 1) * &LaurentPoly::v_pow(5);
        let b = qint(4, 1).scale(&rat(3, 7));
        // [2] divides both; gcd is v^2 + 1 after normalization
        assert_eq!(a.gcd(&b), LaurentPoly::from_pairs([(1, 2), (1, 0)]));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_sqrt_q(&LaurentPoly::one(), 5), QScalar::one(5));
        assert_eq!(eval_sqrt_q(&qint(3, 1), 2), QScalar::rational(rat(7, 2), 2));
        assert_eq!(eval_sqrt_q(&LaurentPoly::v_pow(1), 3), QScalar::sqrt_q(3));
        // perfect squares fold
        assert_eq!(eval_sqrt_q(&LaurentPoly::v_pow(1), 4), QScalar::from_int(2, 4));
        assert_eq!(QScalar::v_pow(-3, 2), QScalar::new(BigRational::zero(), rat(1, 4), 2));
    }

    #[test]
    fn qscalar_field_ops() {
        let x = QScalar::new(rat(3, 2), rat(-5, 3), 3);
        let inv = x.inv().unwrap();
        assert!((&x * &inv).is_one());
        assert!(QScalar::zero(3).inv().is_none());
        let s = &x * &x;
        let r = s.sqrt().unwrap();
        assert!(r == x || r == -x.clone());
        assert_eq!(QScalar::from_int(3, 3).sqrt(), Some(QScalar::sqrt_q(3)));
        assert_eq!(QScalar::from_int(2, 3).sqrt(), None);
    }

    #[test]
    fn display_readable() {
        assert_eq!(qint(3, 1).to_string(), "v^2 + 1 + v^-2");
        assert_eq!((-qint(2, 1)).to_string(), "-v - v^-1");
    }
}
