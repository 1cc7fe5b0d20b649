//! Exact rational functions of the formal variable `q`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::LaurentPolyQ;
use crate::{Error, Result};

/// A ratio of Laurent polynomials in `q`, kept in a canonical reduced form
/// so that structural equality is semantic equality:
///
/// * the denominator is a monic polynomial with nonzero constant term (all
///   `q`-power factors are pushed into the Laurent numerator);
/// * the polynomial part of the numerator shares no factor with the
///   denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunctionQ {
    num: LaurentPolyQ,
    den: LaurentPolyQ,
}

impl RationalFunctionQ {
    /// Builds `num / den`, reducing to canonical form. A zero denominator is
    /// a domain error.
    pub fn new(num: LaurentPolyQ, den: LaurentPolyQ) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: LaurentPolyQ, den: LaurentPolyQ) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self {
                num: LaurentPolyQ::zero(),
                den: LaurentPolyQ::one(),
            };
        }
        let (kn, mut np) = num.factor_q_power();
        let (kd, mut dp) = den.factor_q_power();
        if !dp.is_one() {
            let g = np.gcd(&dp);
            if g.max_exp().is_some_and(|d| d > 0) {
                np = np.div_exact(&g).expect("gcd divides");
                dp = dp.div_exact(&g).expect("gcd divides");
            }
            let lead = dp.leading_coeff();
            if !lead.is_one() {
                let inv = lead.recip();
                np = np.mul_monomial(0, &inv);
                dp = dp.mul_monomial(0, &inv);
            }
        }
        Self {
            num: np.shift(kn - kd),
            den: dp,
        }
    }

    pub fn from_poly(p: LaurentPolyQ) -> Self {
        Self {
            num: p,
            den: LaurentPolyQ::one(),
        }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(LaurentPolyQ::from_int(c))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_poly(LaurentPolyQ::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPolyQ::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPolyQ::one())
    }

    /// The monomial `q^exp`.
    pub fn q_power(exp: i64) -> Self {
        Self::from_poly(LaurentPolyQ::q_power(exp))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn numer(&self) -> &LaurentPolyQ {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPolyQ {
        &self.den
    }

    /// `Some(p)` when the value is a Laurent polynomial.
    pub fn as_polynomial(&self) -> Option<&LaurentPolyQ> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Exact evaluation at a rational point; refuses roots of the
    /// denominator rather than approximating.
    pub fn eval(&self, point: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(Error::Domain(format!(
                "evaluation at q = {point}, a root of the denominator"
            )));
        }
        Ok(self.num.eval(point)? / d)
    }

    /// The canonical text form: a reduced fraction of integer-coefficient
    /// polynomials in `q`, e.g. `(q^2+q)/(q+1)`.
    pub fn canonical_text(&self) -> String {
        self.to_string()
    }

    /// Scales by an exact rational constant.
    pub fn mul_rational(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.mul_monomial(0, c),
            den: self.den.clone(),
        }
    }
}

impl Add for &RationalFunctionQ {
    type Output = RationalFunctionQ;
    fn add(self, rhs: &RationalFunctionQ) -> RationalFunctionQ {
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunctionQ::from_poly(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return RationalFunctionQ::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunctionQ::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFunctionQ {
    type Output = RationalFunctionQ;
    fn sub(self, rhs: &RationalFunctionQ) -> RationalFunctionQ {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunctionQ {
    type Output = RationalFunctionQ;
    fn mul(self, rhs: &RationalFunctionQ) -> RationalFunctionQ {
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunctionQ::from_poly(&self.num * &rhs.num);
        }
        RationalFunctionQ::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RationalFunctionQ {
    type Output = RationalFunctionQ;
    fn div(self, rhs: &RationalFunctionQ) -> RationalFunctionQ {
        assert!(!rhs.is_zero(), "division by the zero rational function");
        RationalFunctionQ::normalized(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RationalFunctionQ {
    type Output = RationalFunctionQ;
    fn neg(self) -> RationalFunctionQ {
        RationalFunctionQ {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for RationalFunctionQ {
            type Output = RationalFunctionQ;
            fn $method(self, rhs: RationalFunctionQ) -> RationalFunctionQ {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl fmt::Display for RationalFunctionQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Scale both parts to integer coefficients with overall content 1.
        let mut lcm = BigInt::one();
        for (_, c) in self.num.terms().chain(self.den.terms()) {
            lcm = lcm.lcm(c.denom());
        }
        let mut gcd = BigInt::zero();
        for (_, c) in self.num.terms().chain(self.den.terms()) {
            gcd = gcd.gcd(&(c.numer() * (&lcm / c.denom())));
        }
        let scale = BigRational::new(lcm, gcd);
        let mut num = self.num.mul_monomial(0, &scale);
        let mut den = self.den.mul_monomial(0, &scale);
        // Push negative q-powers of the numerator into the denominator so
        // both render as honest polynomials.
        let shift = num.min_exp().unwrap_or(0).min(0);
        num = num.shift(-shift);
        den = den.shift(-shift);
        if den.is_one() {
            return write!(f, "{num}");
        }
        match (num.num_terms() == 1, den.num_terms() == 1) {
            (true, true) => write!(f, "{num}/{den}"),
            (true, false) => write!(f, "{num}/({den})"),
            (false, true) => write!(f, "({num})/{den}"),
            (false, false) => write!(f, "({num})/({den})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pairs: &[(i64, i64)]) -> LaurentPolyQ {
        let mut out = LaurentPolyQ::zero();
        for &(e, c) in pairs {
            out = &out + &LaurentPolyQ::monomial(e, BigRational::from_integer(BigInt::from(c)));
        }
        out
    }

    fn rf(num: &[(i64, i64)], den: &[(i64, i64)]) -> RationalFunctionQ {
        RationalFunctionQ::new(poly(num), poly(den)).unwrap()
    }

    #[test]
    fn reduction_to_canonical_form() {
        // (q^2 - 1) / (q + 1) = q - 1
        let a = rf(&[(2, 1), (0, -1)], &[(1, 1), (0, 1)]);
        assert_eq!(a, rf(&[(1, 1), (0, -1)], &[(0, 1)]));
        assert!(a.as_polynomial().is_some());
    }

    #[test]
    fn equality_agrees_with_cross_multiplication() {
        // 1/(1-q) and -1/(q-1)
        let a = rf(&[(0, 1)], &[(0, 1), (1, -1)]);
        let b = rf(&[(0, -1)], &[(1, 1), (0, -1)]);
        assert_eq!(a, b);
        let cross = &(a.numer() * b.denom()) - &(b.numer() * a.denom());
        assert!(cross.is_zero());
    }

    #[test]
    fn q_powers_live_in_the_numerator() {
        // q / (q^2 + q) = 1 / (q + 1)
        let a = rf(&[(1, 1)], &[(2, 1), (1, 1)]);
        assert_eq!(a, rf(&[(0, 1)], &[(1, 1), (0, 1)]));
        // 1 / q = q^-1
        let b = rf(&[(0, 1)], &[(1, 1)]);
        assert_eq!(b, RationalFunctionQ::q_power(-1));
    }

    #[test]
    fn field_operations() {
        let a = rf(&[(1, 1)], &[(1, 1), (0, 1)]); // q/(q+1)
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        let sum = &a + &inv;
        let back = &sum - &inv;
        assert_eq!(back, a);
        assert_eq!(a.pow(-2).unwrap(), (&inv * &inv));
    }

    #[test]
    fn eval_refuses_denominator_roots() {
        let a = rf(&[(0, 1)], &[(1, 1), (0, -1)]); // 1/(q-1)
        assert!(a.eval(&BigRational::one()).is_err());
        let two = BigRational::from_integer(BigInt::from(2));
        assert_eq!(a.eval(&two).unwrap(), BigRational::one());
    }

    #[test]
    fn canonical_text_examples() {
        let a = rf(&[(2, 1), (1, 1)], &[(1, 1), (0, 1)]);
        // (q^2+q)/(q+1) reduces to q.
        assert_eq!(a.to_string(), "q");
        let b = rf(&[(1, 1)], &[(1, 1), (0, -1)]);
        assert_eq!(b.to_string(), "q/(q-1)");
        // Denominators are cleared to integer coefficients.
        let c = rf(&[(0, 1)], &[(1, 2), (0, -2)]);
        assert_eq!(c.to_string(), "1/(2q-2)");
        // Negative exponents are rendered as a polynomial fraction.
        let d = RationalFunctionQ::q_power(-1);
        assert_eq!(d.to_string(), "1/q");
    }
}
