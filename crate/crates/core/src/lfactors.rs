//! Unramified local L-factors as truncated exact power series in
//! `T = q^{-s}`: the standard factor, the exterior square in both pair
//! conventions, truncated Tate integrals for unramified tori, and the
//! rank-one unramified zeta identity checked coefficient by coefficient.
//!
//! Everything here works with numeric Satake parameters (exact nonzero
//! rationals) and a numeric residue cardinality; the series themselves are
//! formal and exact through their truncation order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Satake data: nonzero exact rational parameters and a numeric residue
/// cardinality `q > 1`.
#[derive(Clone, PartialEq, Debug)]
pub struct SatakeData {
    params: Vec<BigRational>,
    q_val: BigRational,
}

impl SatakeData {
    pub fn new(params: Vec<BigRational>, q_val: BigRational) -> Result<Self> {
        if params.iter().any(Zero::is_zero) {
            return Err(Error::Domain("Satake parameters must be nonzero".into()));
        }
        if q_val <= BigRational::one() {
            return Err(Error::Domain("residue cardinality must exceed 1".into()));
        }
        Ok(Self { params, q_val })
    }

    pub fn params(&self) -> &[BigRational] {
        &self.params
    }

    pub fn q_val(&self) -> &BigRational {
        &self.q_val
    }
}

/// A power series in `T = q^{-s}` with exact rational coefficients,
/// truncated at a fixed order: arithmetic is exact through degree `order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// The geometric series `(1 - r T)^{-1} = sum_k r^k T^k`.
    pub fn geometric(r: &BigRational, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut acc = BigRational::one();
        for _ in 0..=order {
            coeffs.push(acc.clone());
            acc *= r;
        }
        Self { coeffs }
    }

    /// `(1 - r T^d)^{-1}` truncated.
    pub fn geometric_power(r: &BigRational, d: usize, order: usize) -> Self {
        assert!(d >= 1);
        let mut s = Self::zero(order);
        let mut acc = BigRational::one();
        let mut k = 0;
        while k <= order {
            s.coeffs[k] = acc.clone();
            acc *= r;
            k += d;
        }
        s
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let mut out = Self::zero(order);
        for i in 0..=order {
            for j in 0..=(order - i) {
                if self.coeffs[i].is_zero() || rhs.coeffs[j].is_zero() {
                    continue;
                }
                let prod = &self.coeffs[i] * &rhs.coeffs[j];
                out.coeffs[i + j] += prod;
            }
        }
        out
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::Domain(
                "series with vanishing constant term has no inverse".into(),
            ));
        }
        let order = self.order();
        let c0_inv = self.coeffs[0].clone().recip();
        let mut out = Self::zero(order);
        out.coeffs[0] = c0_inv.clone();
        for k in 1..=order {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                acc += &self.coeffs[j] * &out.coeffs[k - j];
            }
            out.coeffs[k] = -(acc * &c0_inv);
        }
        Ok(out)
    }

    /// Substitutes `T -> c T`: scales coefficient `k` by `c^k`.
    pub fn substitute_scaled(&self, c: &BigRational) -> Self {
        let mut out = self.clone();
        let mut acc = BigRational::one();
        for k in 0..=out.order() {
            out.coeffs[k] *= &acc;
            acc *= c;
        }
        out
    }
}

impl std::fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| format!("{c}*T^{k}"))
            .collect();
        write!(f, "{} + O(T^{})", parts.join(" + "), self.order() + 1)
    }
}

/// Unramified quadratic character data as a sign: `+1` for the trivial
/// restriction, `-1` for the nontrivial one.
pub type EtaSign = i8;

fn sign_rational(sign: EtaSign) -> BigRational {
    BigRational::from_integer(BigInt::from(sign as i64))
}

/// The standard L-factor `prod_i (1 - eta alpha_i T)^{-1}` truncated at
/// degree `order`.
pub fn std_lfactor(s: &SatakeData, eta_sign: EtaSign, order: usize) -> TruncatedSeries {
    let eta = sign_rational(eta_sign);
    let mut out = TruncatedSeries::one(order);
    for a in s.params() {
        out = out.mul(&TruncatedSeries::geometric(&(a * &eta), order));
    }
    out
}

/// Index convention for the exterior-square Euler product.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairConvention {
    /// Unordered pairs `i < j` — the standard exterior-square factor.
    Ordered,
    /// All pairs `i != j`, the literal reading of the product; equal to the
    /// square of the `i < j` product.
    Distinct,
}

/// The exterior-square L-factor `prod (1 - eta alpha_i alpha_j T)^{-1}`
/// over the chosen pair set, truncated at `order`. Requires at least two
/// parameters.
pub fn ext_sq_lfactor(
    s: &SatakeData,
    eta_sign: EtaSign,
    order: usize,
    convention: PairConvention,
) -> Result<TruncatedSeries> {
    let m = s.params().len();
    if m < 2 {
        return Err(Error::Domain(format!(
            "exterior square needs at least two Satake parameters, got {m}"
        )));
    }
    let eta = sign_rational(eta_sign);
    let mut out = TruncatedSeries::one(order);
    for i in 0..m {
        for j in (i + 1)..m {
            let ratio = &(&s.params()[i] * &s.params()[j]) * &eta;
            let factor = TruncatedSeries::geometric(&ratio, order);
            out = out.mul(&factor);
            if convention == PairConvention::Distinct {
                out = out.mul(&factor);
            }
        }
    }
    Ok(out)
}

/// Checks the twisted exterior-square shift: substituting `T -> q^{-a} T`
/// in the exterior-square factor equals the factor with every product
/// `alpha_i alpha_j` scaled by `q^{-a}` (the `|.|^a`-twist), through the
/// given order.
pub fn check_ext_sq_shift(s: &SatakeData, a: i64, order: usize) -> Result<bool> {
    let q_pow = rational_power(s.q_val(), -a);
    let shifted = ext_sq_lfactor(s, 1, order, PairConvention::Ordered)?
        .substitute_scaled(&q_pow);
    // Twisted route: scale the parameter pairs directly.
    let m = s.params().len();
    let mut twisted = TruncatedSeries::one(order);
    for i in 0..m {
        for j in (i + 1)..m {
            let ratio = &(&s.params()[i] * &s.params()[j]) * &q_pow;
            twisted = twisted.mul(&TruncatedSeries::geometric(&ratio, order));
        }
    }
    Ok(shifted == twisted)
}

fn rational_power(base: &BigRational, exp: i64) -> BigRational {
    let mag = num_traits::pow::pow(base.clone(), exp.unsigned_abs() as usize);
    if exp >= 0 {
        mag
    } else {
        mag.recip()
    }
}

/// An unramified torus presented as a product of restrictions of scalars
/// along unramified extensions: one `(degree, eta sign)` pair per factor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnramifiedTorusData {
    factors: Vec<(u32, EtaSign)>,
}

impl UnramifiedTorusData {
    pub fn new(factors: Vec<(u32, EtaSign)>) -> Result<Self> {
        if factors.iter().any(|&(d, _)| d == 0) {
            return Err(Error::Domain("torus factor degrees must be positive".into()));
        }
        if factors.iter().any(|&(_, e)| e != 1 && e != -1) {
            return Err(Error::Domain("eta signs must be +1 or -1".into()));
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[(u32, EtaSign)] {
        &self.factors
    }
}

/// The truncated unramified Tate integral, two ways: the direct lattice
/// sum (a product of per-factor geometric sums in `T^{d_i}`) and the
/// closed-form Euler product `prod_i (1 - eta_i T^{d_i})^{-1}` obtained by
/// series inversion. The two must agree coefficient by coefficient.
pub fn tate_series(t: &UnramifiedTorusData, order: usize) -> (TruncatedSeries, TruncatedSeries) {
    // Direct route: multiply truncated geometric sums.
    let mut direct = TruncatedSeries::one(order);
    for &(d, e) in t.factors() {
        direct = direct.mul(&TruncatedSeries::geometric_power(
            &sign_rational(e),
            d as usize,
            order,
        ));
    }
    // Closed form: build the denominator polynomial, then invert the
    // series.
    let mut denominator = TruncatedSeries::one(order);
    for &(d, e) in t.factors() {
        let mut factor = TruncatedSeries::one(order);
        if (d as usize) <= order {
            factor.coeffs[d as usize] = -sign_rational(e);
        }
        denominator = denominator.mul(&factor);
    }
    let closed = denominator.inverse().expect("constant term one");
    (direct, closed)
}

/// Exact square root of a rational, if it exists.
pub fn sqrt_rational(v: &BigRational) -> Option<BigRational> {
    if v.is_negative() {
        return None;
    }
    let num = v.numer().sqrt();
    let den = v.denom().sqrt();
    let candidate = BigRational::new(num, den);
    (&candidate * &candidate == *v).then_some(candidate)
}

/// The rank-one unramified zeta identity: the double torus sum of
/// normalized spherical Whittaker values against the lattice indicator and
/// unramified characters equals the product of the standard factor at the
/// half-shifted point and the exterior-square factor, as bivariate series
/// in `T1 = q^{-s_1}` and `T0 = q^{-s_0}` through total degree `order`.
///
/// The half-integer shift is kept exact by requiring the residue
/// cardinality to be a perfect square of a rational; the shift then scales
/// the parameters by `1/sqrt(q)`.
pub fn bf_unramified_check(
    s: &SatakeData,
    eta1_sign: EtaSign,
    eta0_sign: EtaSign,
    order: usize,
) -> Result<bool> {
    if s.params().len() != 2 {
        return Err(Error::Domain(format!(
            "rank-one check needs exactly two Satake parameters, got {}",
            s.params().len()
        )));
    }
    let root = sqrt_rational(s.q_val()).ok_or_else(|| {
        Error::Domain(
            "the half-shift needs a residue cardinality that is a perfect square of a rational"
                .into(),
        )
    })?;
    let root_inv = root.recip();
    let a1 = &s.params()[0];
    let a2 = &s.params()[1];
    let eta1 = sign_rational(eta1_sign);
    let eta0 = sign_rational(eta0_sign);

    // Left side. The torus element with valuations (k1, k2) contributes
    //   W(pi^{(k1,k2)}) eta1^{k1-k2} eta0^{k2} T1^{k1-k2} T0^{k2},
    // the lattice indicator forces k2 >= 0 and the spherical Whittaker
    // function vanishes off the dominant cone k1 >= k2. With i = k1 - k2
    // and j = k2, the Whittaker value is
    //   q^{-i/2} h_i(a1, a2) (a1 a2)^j,
    // where h_i is the complete homogeneous symmetric polynomial.
    let mut lhs = vec![vec![BigRational::zero(); order + 1]; order + 1];
    for i in 0..=order {
        for j in 0..=(order - i) {
            let h = complete_homogeneous(a1, a2, i);
            let w = h * rational_power(&root_inv, i as i64)
                * rational_power(&(a1 * a2), j as i64);
            lhs[i][j] = w
                * rational_power(&eta1, i as i64)
                * rational_power(&eta0, j as i64);
        }
    }

    // Right side: the standard factor with parameters scaled by
    // eta1 / sqrt(q) in T1, times the ordered exterior square twisted by
    // eta0 in T0.
    let scaled = SatakeData::new(
        vec![a1 * &root_inv, a2 * &root_inv],
        s.q_val().clone(),
    )?;
    let std_part = std_lfactor(&scaled, eta1_sign, order);
    let ext_part = ext_sq_lfactor(s, eta0_sign, order, PairConvention::Ordered)?;

    for i in 0..=order {
        for j in 0..=(order - i) {
            let rhs = std_part.coeff(i) * ext_part.coeff(j);
            if lhs[i][j] != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn complete_homogeneous(a1: &BigRational, a2: &BigRational, d: usize) -> BigRational {
    let mut acc = BigRational::zero();
    for u in 0..=d {
        acc += rational_power(a1, u as i64) * rational_power(a2, (d - u) as i64);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn satake(params: &[(i64, i64)], q: i64) -> SatakeData {
        SatakeData::new(
            params.iter().map(|&(n, d)| rat(n, d)).collect(),
            rat(q, 1),
        )
        .unwrap()
    }

    fn series(vals: &[(i64, i64)]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(vals.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn std_lfactor_examples() {
        let s = satake(&[(2, 1)], 3);
        assert_eq!(
            std_lfactor(&s, 1, 3),
            series(&[(1, 1), (2, 1), (4, 1), (8, 1)])
        );
        assert_eq!(
            std_lfactor(&s, -1, 3),
            series(&[(1, 1), (-2, 1), (4, 1), (-8, 1)])
        );
        let trivial = satake(&[(1, 1)], 2);
        assert_eq!(std_lfactor(&trivial, 1, 2), series(&[(1, 1), (1, 1), (1, 1)]));
    }

    #[test]
    fn ext_sq_examples() {
        let s = satake(&[(1, 1), (1, 1)], 4);
        assert_eq!(
            ext_sq_lfactor(&s, 1, 2, PairConvention::Ordered).unwrap(),
            series(&[(1, 1), (1, 1), (1, 1)])
        );
        let s = satake(&[(2, 1), (3, 1)], 4);
        assert_eq!(
            ext_sq_lfactor(&s, 1, 2, PairConvention::Ordered).unwrap(),
            series(&[(1, 1), (6, 1), (36, 1)])
        );
        assert_eq!(
            ext_sq_lfactor(&s, -1, 1, PairConvention::Ordered).unwrap(),
            series(&[(1, 1), (-6, 1)])
        );
        let single = satake(&[(2, 1)], 4);
        assert!(ext_sq_lfactor(&single, 1, 2, PairConvention::Ordered).is_err());
    }

    #[test]
    fn distinct_convention_is_the_square_of_ordered() {
        let s = satake(&[(2, 1), (1, 2), (3, 1)], 5);
        let ordered = ext_sq_lfactor(&s, 1, 6, PairConvention::Ordered).unwrap();
        let distinct = ext_sq_lfactor(&s, 1, 6, PairConvention::Distinct).unwrap();
        assert_eq!(distinct, ordered.mul(&ordered));
    }

    #[test]
    fn sign_twist_symmetry() {
        // Negating every parameter equals twisting by the nontrivial sign.
        let s = satake(&[(2, 1), (5, 3)], 3);
        let negated = SatakeData::new(
            s.params().iter().map(|a| -a.clone()).collect(),
            s.q_val().clone(),
        )
        .unwrap();
        assert_eq!(std_lfactor(&negated, 1, 6), std_lfactor(&s, -1, 6));
    }

    #[test]
    fn ext_sq_shift_examples() {
        let s = satake(&[(2, 1), (3, 1)], 5);
        assert!(check_ext_sq_shift(&s, 0, 5).unwrap());
        assert!(check_ext_sq_shift(&s, 1, 5).unwrap());
        let s = satake(&[(2, 1), (1, 2)], 3);
        assert!(check_ext_sq_shift(&s, 2, 6).unwrap());
        assert!(check_ext_sq_shift(&s, -2, 6).unwrap());
    }

    #[test]
    fn tate_series_examples() {
        let t = UnramifiedTorusData::new(vec![(1, 1)]).unwrap();
        let (direct, closed) = tate_series(&t, 3);
        assert_eq!(direct, series(&[(1, 1), (1, 1), (1, 1), (1, 1)]));
        assert_eq!(closed, direct);

        let t = UnramifiedTorusData::new(vec![(1, -1)]).unwrap();
        let (direct, closed) = tate_series(&t, 3);
        assert_eq!(direct, series(&[(1, 1), (-1, 1), (1, 1), (-1, 1)]));
        assert_eq!(closed, direct);

        // Convolution of a degree-2 split factor and a sign factor.
        let t = UnramifiedTorusData::new(vec![(2, 1), (1, -1)]).unwrap();
        let (direct, closed) = tate_series(&t, 4);
        assert_eq!(direct, closed);
    }

    #[test]
    fn sqrt_rational_detects_squares() {
        assert_eq!(sqrt_rational(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(sqrt_rational(&rat(2, 1)), None);
        assert_eq!(sqrt_rational(&rat(-4, 1)), None);
    }

    #[test]
    fn bf_rank_one_examples() {
        assert!(bf_unramified_check(&satake(&[(1, 1), (1, 1)], 4), 1, 1, 4).unwrap());
        assert!(bf_unramified_check(&satake(&[(2, 1), (1, 2)], 9), -1, 1, 4).unwrap());
        assert!(bf_unramified_check(&satake(&[(3, 1), (1, 3)], 9), 1, -1, 4).unwrap());
        // Non-square residue cardinality is refused.
        assert!(bf_unramified_check(&satake(&[(2, 1), (1, 2)], 5), 1, 1, 4).is_err());
        // Wrong rank is refused.
        assert!(bf_unramified_check(&satake(&[(2, 1)], 9), 1, 1, 4).is_err());
    }
}
