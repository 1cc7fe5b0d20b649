//! Sparse Laurent polynomials in the formal variable `q` over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// A finitely supported map from integer exponents of `q` to rational
/// coefficients. Exponents may be negative.
///
/// Invariant: no stored coefficient is zero, so structural equality is
/// semantic equality.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPolyQ {
    coeffs: BTreeMap<i64, BigRational>,
}

impl LaurentPolyQ {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigRational::one())
    }

    /// The variable `q` itself.
    pub fn q() -> Self {
        Self::monomial(1, BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(0, c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::monomial(0, BigRational::from_integer(BigInt::from(c)))
    }

    /// `c * q^exp`; the zero polynomial when `c = 0`.
    pub fn monomial(exp: i64, c: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    /// `q^exp`.
    pub fn q_power(exp: i64) -> Self {
        Self::monomial(exp, BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    /// Lowest exponent with nonzero coefficient; `None` for the zero
    /// polynomial.
    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Highest exponent with nonzero coefficient.
    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    fn add_term(&mut self, exp: i64, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&exp) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.coeffs.remove(&exp);
                }
            }
            None => {
                self.coeffs.insert(exp, c.clone());
            }
        }
    }

    /// Multiply by the monomial `c * q^exp` in place.
    pub fn mul_monomial(&self, exp: i64, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, a)| (e + exp, a * c))
                .collect(),
        }
    }

    /// Multiply by `q^exp`.
    pub fn shift(&self, exp: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, a)| (e + exp, a.clone())).collect(),
        }
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact evaluation at a rational point. A negative exponent at the
    /// point `0` is a domain error.
    pub fn eval(&self, point: &BigRational) -> Result<BigRational> {
        if point.is_zero() && self.min_exp().is_some_and(|m| m < 0) {
            return Err(Error::Domain(
                "cannot evaluate a Laurent polynomial with negative exponents at q = 0".into(),
            ));
        }
        // Horner over the exponent gaps, walking from the top exponent down.
        let mut acc = BigRational::zero();
        let mut prev_exp: Option<i64> = None;
        for (&e, c) in self.coeffs.iter().rev() {
            if let Some(p) = prev_exp {
                acc *= pow_rational(point, p - e);
            }
            acc += c;
            prev_exp = Some(e);
        }
        match prev_exp {
            Some(e) => Ok(acc * pow_rational(point, e)),
            None => Ok(BigRational::zero()),
        }
    }

    /// Splits into `(k, p)` with `self = q^k * p` and `p` a polynomial with
    /// nonzero constant term. The zero polynomial maps to `(0, 0)`.
    pub fn factor_q_power(&self) -> (i64, Self) {
        match self.min_exp() {
            Some(m) => (m, self.shift(-m)),
            None => (0, Self::zero()),
        }
    }

    /// Degree as a polynomial (requires `min_exp >= 0`); the zero polynomial
    /// reports degree `-1`.
    fn poly_degree(&self) -> i64 {
        self.max_exp().map_or(-1, |d| d)
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.max_exp().map_or_else(BigRational::zero, |e| self.coeff(e))
    }

    /// Formal derivative d/dq.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (&e, c) in &self.coeffs {
            if e != 0 {
                out.add_term(e - 1, &(c * BigRational::from_integer(BigInt::from(e))));
            }
        }
        out
    }

    /// Polynomial division with remainder. Both operands must have
    /// `min_exp >= 0`; division by zero is a domain error.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        if divisor.is_zero() {
            return Err(Error::Domain("polynomial division by zero".into()));
        }
        debug_assert!(self.min_exp().unwrap_or(0) >= 0 && divisor.min_exp().unwrap_or(0) >= 0);
        let dd = divisor.poly_degree();
        let lead = divisor.leading_coeff();
        let mut rem = self.clone();
        let mut quo = Self::zero();
        while !rem.is_zero() && rem.poly_degree() >= dd {
            let e = rem.poly_degree();
            let c = rem.coeff(e) / &lead;
            quo.add_term(e - dd, &c);
            let scaled = divisor.mul_monomial(e - dd, &(-c));
            rem = &rem + &scaled;
        }
        Ok((quo, rem))
    }

    /// Exact division; error when the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.divrem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Domain("inexact polynomial division".into()))
        }
    }

    /// Monic gcd of the polynomial parts (q-power factors are discarded, so
    /// this is the gcd in the Laurent ring up to units). Uses a primitive
    /// pseudo-remainder sequence over the integers to avoid coefficient
    /// blowup.
    pub fn gcd(&self, other: &Self) -> Self {
        let (_, a) = self.factor_q_power();
        let (_, b) = other.factor_q_power();
        if a.is_zero() {
            return make_monic(b);
        }
        if b.is_zero() {
            return make_monic(a);
        }
        let mut f = to_int_primitive(&a);
        let mut g = to_int_primitive(&b);
        if f.len() < g.len() {
            std::mem::swap(&mut f, &mut g);
        }
        while !g.is_empty() {
            let r = int_pseudo_rem(&f, &g);
            f = g;
            g = int_primitive_part(r);
        }
        make_monic(from_int_coeffs(&f))
    }

    /// True when gcd with the derivative is constant.
    pub fn is_squarefree(&self) -> bool {
        let g = self.gcd(&self.derivative());
        g.poly_degree() <= 0
    }
}

fn pow_rational(base: &BigRational, exp: i64) -> BigRational {
    if exp >= 0 {
        num_traits::pow::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow::pow(base.clone(), (-exp) as usize)
            .recip()
    }
}

fn make_monic(p: LaurentPolyQ) -> LaurentPolyQ {
    if p.is_zero() {
        return p;
    }
    let lead = p.leading_coeff();
    p.mul_monomial(0, &lead.recip())
}

/// Dense integer coefficient vector (ascending from exponent 0), primitive
/// and with positive leading coefficient.
fn to_int_primitive(p: &LaurentPolyQ) -> Vec<BigInt> {
    debug_assert!(p.min_exp().unwrap_or(0) >= 0);
    let deg = p.poly_degree();
    let mut lcm = BigInt::one();
    for (_, c) in p.terms() {
        lcm = lcm.lcm(c.denom());
    }
    let mut v = vec![BigInt::zero(); (deg + 1) as usize];
    for (&e, c) in p.terms() {
        v[e as usize] = c.numer() * (&lcm / c.denom());
    }
    int_primitive_part(v)
}

fn int_primitive_part(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    if v.is_empty() {
        return v;
    }
    let mut content = BigInt::zero();
    for c in &v {
        content = content.gcd(c);
    }
    if v.last().unwrap().is_negative() {
        content = -content;
    }
    for c in &mut v {
        *c = &*c / &content;
    }
    v
}

fn int_pseudo_rem(f: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    let mut r: Vec<BigInt> = f.to_vec();
    let dg = g.len() - 1;
    let lead = g[dg].clone();
    while r.len() >= g.len() {
        let dr = r.len() - 1;
        let top = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * &lead;
        }
        for (i, gc) in g.iter().enumerate() {
            r[dr - dg + i] -= &top * gc;
        }
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
        if r.is_empty() {
            break;
        }
    }
    r
}

fn from_int_coeffs(v: &[BigInt]) -> LaurentPolyQ {
    let mut out = LaurentPolyQ::zero();
    for (e, c) in v.iter().enumerate() {
        out.add_term(e as i64, &BigRational::from_integer(c.clone()));
    }
    out
}

impl Add for &LaurentPolyQ {
    type Output = LaurentPolyQ;
    fn add(self, rhs: &LaurentPolyQ) -> LaurentPolyQ {
        let (big, small) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (&e, c) in &small.coeffs {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentPolyQ {
    type Output = LaurentPolyQ;
    fn sub(self, rhs: &LaurentPolyQ) -> LaurentPolyQ {
        let mut out = self.clone();
        for (&e, c) in &rhs.coeffs {
            out.add_term(e, &-c.clone());
        }
        out
    }
}

impl Mul for &LaurentPolyQ {
    type Output = LaurentPolyQ;
    fn mul(self, rhs: &LaurentPolyQ) -> LaurentPolyQ {
        let mut out = LaurentPolyQ::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        // Iterate the smaller operand on the outside.
        let (small, big) = if self.coeffs.len() <= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        for (&e1, c1) in &small.coeffs {
            for (&e2, c2) in &big.coeffs {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &LaurentPolyQ {
    type Output = LaurentPolyQ;
    fn neg(self) -> LaurentPolyQ {
        LaurentPolyQ {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

impl fmt::Display for LaurentPolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in self.coeffs.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let unit = mag.is_one();
            match (e, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}q^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(pairs: &[(i64, i64)]) -> LaurentPolyQ {
        let mut out = LaurentPolyQ::zero();
        for &(e, c) in pairs {
            out.add_term(e, &BigRational::from_integer(BigInt::from(c)));
        }
        out
    }

    #[test]
    fn arithmetic_basics() {
        let a = p(&[(0, 1), (1, 1)]); // 1 + q
        let b = p(&[(0, -1), (1, 1)]); // q - 1
        assert_eq!(&a * &b, p(&[(0, -1), (2, 1)])); // q^2 - 1
        assert_eq!(&a + &b, p(&[(1, 2)]));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn laurent_shift_and_eval() {
        let a = p(&[(-1, 1), (0, 1)]); // q^-1 + 1
        assert_eq!(a.shift(1), p(&[(0, 1), (1, 1)]));
        let two = BigRational::from_integer(BigInt::from(2));
        assert_eq!(
            a.eval(&two).unwrap(),
            BigRational::new(BigInt::from(3), BigInt::from(2))
        );
        assert!(a.eval(&BigRational::zero()).is_err());
    }

    #[test]
    fn divrem_and_gcd() {
        let a = p(&[(0, -1), (2, 1)]); // q^2 - 1
        let b = p(&[(0, 1), (1, 1)]); // q + 1
        let (quo, rem) = a.divrem(&b).unwrap();
        assert_eq!(quo, p(&[(0, -1), (1, 1)]));
        assert!(rem.is_zero());
        let g = a.gcd(&b);
        assert_eq!(g, b); // q + 1 is already monic
    }

    #[test]
    fn gcd_ignores_q_powers() {
        let a = p(&[(3, 1), (4, 1)]); // q^3 (1 + q)
        let b = p(&[(-2, 1), (-1, 1)]); // q^-2 (1 + q)
        assert_eq!(a.gcd(&b), p(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn squarefree_detection() {
        let sq = p(&[(0, 1), (1, 2), (2, 1)]); // (q+1)^2
        assert!(!sq.is_squarefree());
        let sf = p(&[(0, -1), (2, 1)]); // (q-1)(q+1)
        assert!(sf.is_squarefree());
    }

    #[test]
    fn display_is_compact_descending() {
        let a = p(&[(2, 1), (1, 1)]);
        assert_eq!(a.to_string(), "q^2+q");
        let b = p(&[(0, -3), (1, 2)]);
        assert_eq!(b.to_string(), "2q-3");
        let c = p(&[(-1, 1)]);
        assert_eq!(c.to_string(), "q^-1");
    }
}
