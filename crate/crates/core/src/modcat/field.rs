//! Finite fields with table-driven arithmetic.
//!
//! An element of `F_{p^n}` is encoded as the integer whose base-`p` digits are
//! its coordinates in the power basis of the defining tower. Addition is
//! digit-wise mod `p`; multiplication goes through discrete log tables. An
//! extension `K = F[x]/(m)` of a field `F` of order `q` encodes
//! `Σ c_r x^r` as `Σ c_r q^r`, so the digits base `q` are the
//! `F`-coordinates.

use super::ModError;

/// Moduli of `F_{p^e}` over `F_p` for `e = 2, 3, 4` (Conway polynomials),
/// coefficients from the constant term up, leading 1 included.
const MODULI: &[(u32, u32, &[u16])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[4, 0, 6, 1]),
    (7, 4, &[3, 4, 5, 0, 1]),
];

/// Largest field order handled.
pub const MAX_ORDER: u32 = 2401;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    order: u32,
    /// Number of base-`p` digits per element.
    digits: u32,
    /// Order of the field the modulus is written over (`p` for a prime
    /// field's extension, `order` itself for a prime field).
    coef_order: u32,
    /// Monic modulus over the coefficient field, constant term first; empty
    /// for prime fields.
    modulus: Vec<u16>,
    exp: Vec<u16>,
    log: Vec<u32>,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// `(p, e)` with `q = p^e`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut e = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

impl FiniteField {
    /// `F_q` for a prime power `q`; non-prime orders use the built-in table.
    pub fn new(q: u32) -> Result<Self, ModError> {
        let (p, e) = prime_power(q).ok_or(ModError::NotPrimePower(q))?;
        if e == 1 {
            if q > MAX_ORDER {
                return Err(ModError::FieldTableMiss { p, e });
            }
            return Ok(Self::prime(p));
        }
        let m = MODULI
            .iter()
            .find(|(mp, me, _)| *mp == p && *me == e)
            .ok_or(ModError::FieldTableMiss { p, e })?;
        Self::extension(&Self::prime(p), m.2).ok_or(ModError::FieldTableMiss { p, e })
    }

    pub fn prime(p: u32) -> Self {
        assert!(is_prime(p) && p <= MAX_ORDER, "{p} is not a supported prime");
        let mut f = Self { p, order: p, digits: 1, coef_order: p, modulus: vec![], exp: vec![], log: vec![] };
        f.build_logs(|a, b| ((a as u32 * b as u32) % p) as u16);
        f
    }

    /// `coef[x] / (modulus)`; `None` if the modulus is not irreducible (no
    /// element of full multiplicative order exists) or the order is too big.
    pub fn extension(coef: &FiniteField, modulus: &[u16]) -> Option<Self> {
        let deg = modulus.len().checked_sub(1)?;
        if deg == 0 || *modulus.last()? != 1 {
            return None;
        }
        let order = (coef.order as u64).checked_pow(deg as u32)?;
        if order > MAX_ORDER as u64 {
            return None;
        }
        if deg == 1 {
            return Some(coef.clone());
        }
        let q = coef.order;
        let order = order as u32;
        let decode = |a: u16| -> Vec<u16> {
            let mut a = a as u32;
            (0..deg)
                .map(|_| {
                    let d = (a % q) as u16;
                    a /= q;
                    d
                })
                .collect()
        };
        let encode = |v: &[u16]| -> u16 { v.iter().rev().fold(0u32, |acc, &d| acc * q + d as u32) as u16 };
        let mul = |a: u16, b: u16| -> u16 {
            let (x, y) = (decode(a), decode(b));
            let mut prod = vec![0u16; 2 * deg - 1];
            for (i, &xi) in x.iter().enumerate() {
                if xi == 0 {
                    continue;
                }
                for (j, &yj) in y.iter().enumerate() {
                    prod[i + j] = coef.add(prod[i + j], coef.mul(xi, yj));
                }
            }
            for top in (deg..prod.len()).rev() {
                let c = prod[top];
                if c == 0 {
                    continue;
                }
                for (r, &m) in modulus.iter().enumerate().take(deg) {
                    let idx = top - deg + r;
                    prod[idx] = coef.sub(prod[idx], coef.mul(c, m));
                }
                prod[top] = 0;
            }
            encode(&prod[..deg])
        };
        let mut f = Self {
            p: coef.p,
            order,
            digits: coef.digits * deg as u32,
            coef_order: q,
            modulus: modulus.to_vec(),
            exp: vec![],
            log: vec![],
        };
        if !f.build_logs(mul) {
            return None;
        }
        Some(f)
    }

    /// Finds the smallest primitive element and fills the log tables.
    fn build_logs(&mut self, mul: impl Fn(u16, u16) -> u16) -> bool {
        let n = self.order - 1;
        if n == 0 {
            return false;
        }
        for g in 1..self.order as u16 {
            let mut exp = Vec::with_capacity(n as usize);
            let mut x = 1u16;
            let mut full = true;
            for k in 0..n {
                if k > 0 && x == 1 {
                    full = false;
                    break;
                }
                exp.push(x);
                x = mul(x, g);
            }
            if full && x == 1 {
                let mut log = vec![u32::MAX; self.order as usize];
                for (k, &e) in exp.iter().enumerate() {
                    log[e as usize] = k as u32;
                }
                self.exp = exp;
                self.log = log;
                return true;
            }
        }
        false
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }

    /// Degree of the modulus over the coefficient field it was built from.
    pub fn degree_over_coefficients(&self) -> u32 {
        if self.modulus.is_empty() {
            1
        } else {
            self.modulus.len() as u32 - 1
        }
    }

    pub fn coefficient_order(&self) -> u32 {
        self.coef_order
    }

    /// Generator of the multiplicative group used for the log tables.
    pub fn primitive(&self) -> u16 {
        if self.order == 2 {
            1
        } else {
            self.exp[1]
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u16> {
        0..self.order as u16
    }

    pub fn add(&self, a: u16, b: u16) -> u16 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.digits == 1 {
            return ((a as u32 + b as u32) % self.p) as u16;
        }
        let (mut a, mut b) = (a as u32, b as u32);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.digits {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as u16
    }

    pub fn neg(&self, a: u16) -> u16 {
        if self.p == 2 {
            return a;
        }
        let mut a = a as u32;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.digits {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out as u16
    }

    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.order == 2 {
            return 1;
        }
        let n = self.order - 1;
        self.exp[((self.log[a as usize] + self.log[b as usize]) % n) as usize]
    }

    pub fn inv(&self, a: u16) -> Option<u16> {
        if a == 0 {
            return None;
        }
        if self.order == 2 {
            return Some(1);
        }
        let n = self.order - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: u16, k: u64) -> u16 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if self.order == 2 {
            return 1;
        }
        let n = (self.order - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (k % n)) % n) as usize]
    }

    /// Coordinates of `a` over the coefficient field, constant term first.
    pub fn coords(&self, a: u16) -> Vec<u16> {
        let q = self.coef_order;
        let mut a = a as u32;
        (0..self.degree_over_coefficients())
            .map(|_| {
                let d = (a % q) as u16;
                a /= q;
                d
            })
            .collect()
    }

    pub fn from_coords(&self, c: &[u16]) -> u16 {
        let q = self.coef_order;
        c.iter().rev().fold(0u32, |acc, &d| acc * q + d as u32) as u16
    }

    /// The element `x` of `coef[x]/(m)`; 1 for a prime field.
    pub fn adjoined_root(&self) -> u16 {
        if self.modulus.is_empty() {
            1
        } else {
            self.coef_order as u16
        }
    }
}

/// Evaluates a polynomial with coefficients in `coef` (constant first) at an
/// element of an extension `ext` of `coef` whose coefficient field is `coef`.
pub fn eval_poly_in_extension<'a>(ext: &'a FiniteField, poly: &'a [u16]) -> impl Fn(u16) -> u16 + 'a {
    move |x: u16| poly.iter().rev().fold(0u16, |acc, &c| ext.add(ext.mul(acc, x), c))
}

fn poly_rem(f: &FiniteField, a: &[u16], b: &[u16]) -> Vec<u16> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = f.inv(b[db]).expect("nonzero leading coefficient");
    while r.len() > db {
        let top = *r.last().unwrap();
        if top != 0 {
            let c = f.mul(top, lead_inv);
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn monic_polys(f: &FiniteField, deg: usize) -> impl Iterator<Item = Vec<u16>> + '_ {
    let q = f.order() as u64;
    (0..q.pow(deg as u32)).map(move |mut idx| {
        let mut v: Vec<u16> = (0..deg)
            .map(|_| {
                let d = (idx % q) as u16;
                idx /= q;
                d
            })
            .collect();
        v.push(1);
        v
    })
}

/// Irreducibility by trial division with all monic polynomials of degree at
/// most half.
pub fn is_irreducible(f: &FiniteField, poly: &[u16]) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    (1..=deg / 2).all(|k| monic_polys(f, k).all(|g| !poly_rem(f, poly, &g).is_empty()))
}

/// Monic irreducible of degree `d` over `f`: the table entry when `f` is a
/// prime field covered by the table, else the lexicographically smallest one
/// in the order (top coefficient down, constant term last compared).
pub fn irreducible_of_degree(f: &FiniteField, d: u32) -> Option<Vec<u16>> {
    if d == 1 {
        return Some(vec![0, 1]);
    }
    if f.modulus().is_empty() {
        if let Some(m) = MODULI.iter().find(|(p, e, _)| *p == f.order() && *e == d) {
            return Some(m.2.to_vec());
        }
    }
    monic_polys(f, d as usize).find(|g| is_irreducible(f, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &FiniteField) {
        let n = f.order() as u16;
        for a in 0..n {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..n {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in (0..n).step_by(((n / 7).max(1)) as usize) {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn table_fields_satisfy_axioms() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49] {
            check_axioms(&FiniteField::new(q).unwrap());
        }
    }

    #[test]
    fn all_table_moduli_are_primitive() {
        // primitive modulus: x itself generates the multiplicative group
        for &(p, e, m) in MODULI {
            let f = FiniteField::extension(&FiniteField::prime(p), m).unwrap();
            let x = f.adjoined_root();
            let n = (f.order() - 1) as u64;
            let mut k = 1u64;
            let mut y = x;
            while y != 1 {
                y = f.mul(y, x);
                k += 1;
            }
            assert_eq!(k, n, "p={p} e={e}");
            assert!(is_irreducible(&FiniteField::prime(p), m));
        }
    }

    #[test]
    fn frobenius_is_automorphism() {
        for q in [4, 8, 9, 25] {
            let f = FiniteField::new(q).unwrap();
            let p = f.characteristic() as u64;
            let mut images: Vec<u16> = f.elements().map(|a| f.pow(a, p)).collect();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
                }
            }
            images.sort();
            images.dedup();
            assert_eq!(images.len(), q as usize);
        }
    }

    #[test]
    fn f4_from_x2_x_1() {
        let f = FiniteField::new(4).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // x^2 = x + 1
        let x = f.adjoined_root();
        assert_eq!(f.mul(x, x), f.add(x, 1));
    }

    #[test]
    fn rejects_bad_orders() {
        assert_eq!(FiniteField::new(6), Err(ModError::NotPrimePower(6)));
        assert!(matches!(FiniteField::new(32), Err(ModError::FieldTableMiss { .. })));
        assert!(FiniteField::extension(&FiniteField::prime(2), &[1, 0, 1]).is_none());
    }

    #[test]
    fn extension_over_non_prime_base() {
        let f4 = FiniteField::new(4).unwrap();
        let m = irreducible_of_degree(&f4, 2).unwrap();
        let f16 = FiniteField::extension(&f4, &m).unwrap();
        assert_eq!(f16.order(), 16);
        check_axioms(&f16);
        // coefficient field elements embed as themselves
        for a in f4.elements() {
            for b in f4.elements() {
                assert_eq!(f16.mul(a, b), f4.mul(a, b));
            }
        }
    }
}
