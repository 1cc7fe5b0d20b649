//! The weighted volume family `vol_{n,alpha}(x)` computed three independent
//! ways, plus its closed-form constants.
//!
//! `vol_{n,alpha}(x)` is the sum of `q^{alpha |lambda|} vol(K pi^lambda K)`
//! over weakly increasing tuples `lambda` with entries in `[0, x]`, equal
//! to `1` when `n = 0` by convention. The three routes:
//!
//! * [`vol_direct`] enumerates the tuples — the ground truth;
//! * [`vol_recur`] splits off the first equal-value segment;
//! * [`vol_recur2`] splits according to the number of zero entries.
//!
//! The family satisfies the functional equation
//! `vol_{n,alpha}(x) = q^{n alpha x} vol_{n,-alpha}(x)`, its germ expansion
//! has constant term [`const_term_a`] for `alpha >= 1`, and for `alpha = 0`
//! the coefficient of `x` is [`linear_coeff_b`].

use std::collections::HashMap;

use crate::cartan::{cell_volume, SignedPartition};
use crate::qring::{one_minus_q_pow, qbinom, RationalFunctionQ};
use crate::{Error, Result};

/// Parameters of the volume family: rank `n`, weight exponent `alpha`, box
/// bound `x`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct VolParams {
    pub n: u32,
    pub alpha: i64,
    pub x: u64,
}

impl VolParams {
    pub fn new(n: u32, alpha: i64, x: u64) -> Self {
        Self { n, alpha, x }
    }
}

/// Direct enumeration of `sum_lambda q^{alpha |lambda|} vol(K pi^lambda K)`
/// over `lambda` in `Z^{n,+}_{[0,x]}`.
pub fn vol_direct(p: &VolParams) -> RationalFunctionQ {
    if p.n == 0 {
        return RationalFunctionQ::one();
    }
    let mut total = RationalFunctionQ::zero();
    let mut tuple = vec![0i64; p.n as usize];
    sum_over_tuples(&mut tuple, 0, 0, p.x as i64, p.alpha, &mut total);
    total
}

fn sum_over_tuples(
    tuple: &mut Vec<i64>,
    idx: usize,
    lower: i64,
    upper: i64,
    alpha: i64,
    total: &mut RationalFunctionQ,
) {
    if idx == tuple.len() {
        let lambda = SignedPartition::new(tuple.clone()).expect("construction is monotone");
        let weight = RationalFunctionQ::q_power(alpha * lambda.weight());
        *total = &*total + &(&weight * &cell_volume(&lambda));
        return;
    }
    for v in lower..=upper {
        tuple[idx] = v;
        sum_over_tuples(tuple, idx + 1, v, upper, alpha, total);
    }
}

/// First-segment recursion:
///
/// `vol_{n,a}(x) = sum_{0<=y<=x} q^{a n y}
///   + sum_{1<=b<=n-1} [n\choose b]_q q^{a(n-b)} q^{a n (x-1)}
///     sum_{0<=y<=x-1} q^{-a n y} vol_{n-b, a+b}(y)`.
///
/// Inner values recurse through the same formula, so the route shares
/// nothing with [`vol_direct`] beyond the q-binomial constants.
pub fn vol_recur(p: &VolParams) -> RationalFunctionQ {
    let mut memo = HashMap::new();
    vol_recur_memo(p.n, p.alpha, p.x, &mut memo)
}

fn vol_recur_memo(
    n: u32,
    alpha: i64,
    x: u64,
    memo: &mut HashMap<(u32, i64, u64), RationalFunctionQ>,
) -> RationalFunctionQ {
    if n == 0 {
        return RationalFunctionQ::one();
    }
    if let Some(v) = memo.get(&(n, alpha, x)) {
        return v.clone();
    }
    let mut total = RationalFunctionQ::zero();
    for y in 0..=x {
        total = &total + &RationalFunctionQ::q_power(alpha * n as i64 * y as i64);
    }
    if x >= 1 {
        for beta in 1..n {
            let mut inner = RationalFunctionQ::zero();
            for y in 0..=(x - 1) {
                let v = vol_recur_memo(n - beta, alpha + beta as i64, y, memo);
                inner = &inner
                    + &(&RationalFunctionQ::q_power(-alpha * n as i64 * y as i64) * &v);
            }
            let outer = &qbinom(n, beta).expect("beta < n")
                * &RationalFunctionQ::q_power(
                    alpha * (n - beta) as i64 + alpha * n as i64 * (x as i64 - 1),
                );
            total = &total + &(&outer * &inner);
        }
    }
    memo.insert((n, alpha, x), total.clone());
    total
}

/// Zero-count recursion:
///
/// `vol_{n,a}(x) = sum_{0<=b<=n} [n\choose b]_q q^{a(n-b)}
/// vol_{n-b, a+b}(x-1)` for `x >= 1`; the base case `x = 0` is the direct
/// sum (a single central tuple).
pub fn vol_recur2(p: &VolParams) -> RationalFunctionQ {
    let mut memo = HashMap::new();
    RationalFunctionQ::from_poly(vol_recur2_memo(p.n, p.alpha, p.x, &mut memo))
}

pub(crate) fn vol_recur2_memo(
    n: u32,
    alpha: i64,
    x: u64,
    memo: &mut HashMap<(u32, i64, u64), crate::qring::LaurentPolyQ>,
) -> crate::qring::LaurentPolyQ {
    use crate::qring::LaurentPolyQ;
    if n == 0 {
        return LaurentPolyQ::one();
    }
    if x == 0 {
        return vol_direct(&VolParams::new(n, alpha, 0))
            .as_polynomial()
            .expect("volumes are Laurent polynomials")
            .clone();
    }
    if let Some(v) = memo.get(&(n, alpha, x)) {
        return v.clone();
    }
    let mut total = LaurentPolyQ::zero();
    for beta in 0..=n {
        let inner = vol_recur2_memo(n - beta, alpha + beta as i64, x - 1, memo);
        let coeff = qbinom(n, beta).expect("beta <= n");
        let coeff_poly = coeff
            .as_polynomial()
            .expect("q-binomials are polynomials")
            .shift(alpha * (n - beta) as i64);
        total = &total + &(&coeff_poly * &inner);
    }
    memo.insert((n, alpha, x), total.clone());
    total
}

/// A reusable memo table for sampling `vol_{n,alpha}(x)` at many `x`;
/// backed by the zero-count recursion. One table per task keeps the
/// computation pure.
#[derive(Default)]
pub struct VolTable {
    memo: HashMap<(u32, i64, u64), crate::qring::LaurentPolyQ>,
}

impl VolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn value(&mut self, n: u32, alpha: i64, x: u64) -> RationalFunctionQ {
        RationalFunctionQ::from_poly(vol_recur2_memo(n, alpha, x, &mut self.memo))
    }
}

/// The constant term `A(n, alpha) = prod_{i=0}^{n-1} (1 - q^{alpha+i})^{-1}`
/// of the germ expansion of `vol_{n,alpha}`, valid for `alpha >= 1`.
pub fn const_term_a(n: u32, alpha: i64) -> Result<RationalFunctionQ> {
    if alpha < 1 {
        return Err(Error::Domain(format!(
            "A(n, alpha) requires alpha >= 1, got {alpha}"
        )));
    }
    let mut out = RationalFunctionQ::one();
    for i in 0..n as i64 {
        out = &out / &one_minus_q_pow(alpha + i);
    }
    Ok(out)
}

/// The coefficient `B_n = n prod_{i=1}^{n-1} (1 - q^i)^{-1}` of `x` in the
/// germ expansion of `vol_{n,0}`; nonzero for every `n >= 1`.
pub fn linear_coeff_b(n: u32) -> Result<RationalFunctionQ> {
    if n == 0 {
        return Err(Error::Domain("B_n requires n >= 1".into()));
    }
    let mut out = RationalFunctionQ::from_int(n as i64);
    for i in 1..n as i64 {
        out = &out / &one_minus_q_pow(i);
    }
    Ok(out)
}

/// The q-binomial identity equivalent to the recursion for `A(n, alpha)`:
///
/// `(1 - q^{a n}) prod_{i=0}^{n-1} (1-q^{a+i})^{-1}
///   = sum_{b=1}^{n} [n\choose b]_q q^{a(n-b)}
///     prod_{i=0}^{n-b-1} (1-q^{a+b+i})^{-1}`
///
/// checked as an exact identity of rational functions for a fixed integer
/// `alpha >= 1`.
pub fn check_qbinom_identity(n: u32, alpha: i64) -> Result<bool> {
    if alpha < 1 {
        return Err(Error::Domain("the identity assumes alpha >= 1".into()));
    }
    let lhs = &one_minus_q_pow(alpha * n as i64) * &const_term_a(n, alpha)?;
    let mut rhs = RationalFunctionQ::zero();
    for beta in 1..=n {
        let mut tail = RationalFunctionQ::one();
        for i in 0..(n - beta) as i64 {
            tail = &tail / &one_minus_q_pow(alpha + beta as i64 + i);
        }
        let term = &(&qbinom(n, beta)? * &RationalFunctionQ::q_power(alpha * (n - beta) as i64))
            * &tail;
        rhs = &rhs + &term;
    }
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qring::LaurentPolyQ;

    fn q_poly(pairs: &[(i64, i64)]) -> RationalFunctionQ {
        let p = pairs.iter().fold(LaurentPolyQ::zero(), |acc, &(e, c)| {
            &acc + &LaurentPolyQ::monomial(
                e,
                num_rational::BigRational::from_integer(num_bigint::BigInt::from(c)),
            )
        });
        RationalFunctionQ::from_poly(p)
    }

    #[test]
    fn direct_examples() {
        // n = 0 convention.
        assert!(vol_direct(&VolParams::new(0, 5, 7)).is_one());
        // n = 1, alpha = 0: x + 1 points.
        assert_eq!(vol_direct(&VolParams::new(1, 0, 4)), q_poly(&[(0, 5)]));
        // n = 2, alpha = 0, x = 1: 1 + (q+1) + 1.
        assert_eq!(
            vol_direct(&VolParams::new(2, 0, 1)),
            q_poly(&[(0, 3), (1, 1)])
        );
    }

    #[test]
    fn recur_examples() {
        // Geometric sum, no inner term for n = 1.
        assert_eq!(
            vol_recur(&VolParams::new(1, 2, 3)),
            q_poly(&[(0, 1), (2, 1), (4, 1), (6, 1)])
        );
        assert!(vol_recur(&VolParams::new(0, 0, 0)).is_one());
        assert_eq!(vol_recur(&VolParams::new(2, 0, 1)), q_poly(&[(0, 3), (1, 1)]));
    }

    #[test]
    fn recur2_examples() {
        assert_eq!(vol_recur2(&VolParams::new(1, 0, 3)), q_poly(&[(0, 4)]));
        assert!(vol_recur2(&VolParams::new(0, 3, 2)).is_one());
        let p = VolParams::new(2, 1, 2);
        assert_eq!(vol_recur2(&p), vol_direct(&p));
    }

    #[test]
    fn triple_agreement_small_grid() {
        // The full acceptance grid is n <= 4, |alpha| <= 3, x <= 6; cover a
        // representative sub-grid here.
        for n in 0..=3u32 {
            for alpha in -2..=2i64 {
                for x in 0..=4u64 {
                    let p = VolParams::new(n, alpha, x);
                    let d = vol_direct(&p);
                    assert_eq!(d, vol_recur(&p), "recur {p:?}");
                    assert_eq!(d, vol_recur2(&p), "recur2 {p:?}");
                }
            }
        }
    }

    #[test]
    fn functional_equation_small_grid() {
        for n in 0..=3u32 {
            for alpha in -2..=2i64 {
                for x in 0..=4u64 {
                    let lhs = vol_direct(&VolParams::new(n, alpha, x));
                    let rhs = &RationalFunctionQ::q_power(n as i64 * alpha * x as i64)
                        * &vol_direct(&VolParams::new(n, -alpha, x));
                    assert_eq!(lhs, rhs, "n={n} alpha={alpha} x={x}");
                }
            }
        }
    }

    #[test]
    fn const_term_examples() {
        assert!(const_term_a(0, 3).unwrap().is_one());
        // A(1, alpha) = 1/(1 - q^alpha)
        for alpha in 1..=4 {
            assert_eq!(
                const_term_a(1, alpha).unwrap(),
                one_minus_q_pow(alpha).inv().unwrap()
            );
        }
        // A(2, 1) = 1/((1-q)(1-q^2))
        let expected = &one_minus_q_pow(1).inv().unwrap() * &one_minus_q_pow(2).inv().unwrap();
        assert_eq!(const_term_a(2, 1).unwrap(), expected);
        assert!(const_term_a(2, 0).is_err());
    }

    #[test]
    fn linear_coeff_examples() {
        assert!(linear_coeff_b(0).is_err());
        assert!(linear_coeff_b(1).unwrap().is_one());
        let b2 = &RationalFunctionQ::from_int(2) / &one_minus_q_pow(1);
        assert_eq!(linear_coeff_b(2).unwrap(), b2);
        let b3 = &(&RationalFunctionQ::from_int(3) / &one_minus_q_pow(1)) / &one_minus_q_pow(2);
        assert_eq!(linear_coeff_b(3).unwrap(), b3);
    }

    #[test]
    fn qbinom_identity_small() {
        for n in 1..=4 {
            for alpha in 1..=3 {
                assert!(check_qbinom_identity(n, alpha).unwrap(), "n={n} a={alpha}");
            }
        }
    }
}
