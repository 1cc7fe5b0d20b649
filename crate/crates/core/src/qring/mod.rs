//! Exact arithmetic in the field of rational functions of one variable `q`
//! over the rationals, plus the q-combinatorics constants used everywhere
//! else in the crate.
//!
//! `q` stands for the cardinality of the residue field, kept formal: all
//! identities downstream are identities of rational functions, decided by
//! the canonical form of [`RationalFunctionQ`]. All values are immutable
//! after construction and every operation is a pure function.

mod poly;
mod ratfn;

pub use poly::LaurentPolyQ;
pub use ratfn::RationalFunctionQ;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// The Gaussian binomial coefficient `[n choose beta]_q`, always a
/// polynomial in `q` with nonnegative integer coefficients. It counts the
/// beta-dimensional subspaces of an n-dimensional space over a field with
/// `q` elements.
pub fn qbinom(n: u32, beta: u32) -> Result<RationalFunctionQ> {
    if beta > n {
        return Err(Error::Domain(format!(
            "qbinom({n}, {beta}): lower index exceeds upper index"
        )));
    }
    // prod_{i=1}^{beta} (1 - q^{n-beta+i}) / (1 - q^i)
    let mut num = RationalFunctionQ::one();
    let mut den = RationalFunctionQ::one();
    for i in 1..=beta {
        num = &num * &one_minus_q_pow((n - beta + i) as i64);
        den = &den * &one_minus_q_pow(i as i64);
    }
    Ok(&num / &den)
}

/// `1 - q^k` as a rational function.
pub(crate) fn one_minus_q_pow(k: i64) -> RationalFunctionQ {
    &RationalFunctionQ::one() - &RationalFunctionQ::q_power(k)
}

/// The constant `mu(GL_n) = prod_{i=1}^{n} (1 - q^{-1}) / (1 - q^{-i})`,
/// with `mu(GL_0) = 1` by the empty-product convention.
pub fn mu_gl(n: u32) -> RationalFunctionQ {
    let mut out = RationalFunctionQ::one();
    for i in 1..=n {
        out = &out * &(&one_minus_q_pow(-1) / &one_minus_q_pow(-(i as i64)));
    }
    out
}

/// Checks the polynomial identity
/// `X^n = sum_{beta=0}^{n} [n choose beta]_q prod_{i=0}^{beta-1} (X - q^i)`
/// by expanding both sides in a second formal variable `X` over
/// `RationalFunctionQ` and comparing coefficients.
pub fn verify_newton_identity(n: u32) -> bool {
    let mut rhs = XPoly::zero();
    for beta in 0..=n {
        let mut prod = XPoly::constant(qbinom(n, beta).expect("beta <= n"));
        for i in 0..beta {
            // X - q^i
            let factor = XPoly::linear(
                &RationalFunctionQ::q_power(i as i64),
                &RationalFunctionQ::one(),
            );
            prod = prod.mul(&factor);
        }
        rhs = rhs.add(&prod);
    }
    let mut lhs = vec![RationalFunctionQ::zero(); n as usize + 1];
    lhs[n as usize] = RationalFunctionQ::one();
    rhs.coeffs == lhs
}

/// Polynomials in an auxiliary variable `X` over the rational-function
/// field; only what the Newton identity check needs.
struct XPoly {
    /// Coefficient of `X^i` at index `i`.
    coeffs: Vec<RationalFunctionQ>,
}

impl XPoly {
    fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    fn constant(c: RationalFunctionQ) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `b X - a` for `linear(a, b)`.
    fn linear(a: &RationalFunctionQ, b: &RationalFunctionQ) -> Self {
        Self {
            coeffs: vec![-a, b.clone()],
        }
    }

    fn trim(mut self) -> Self {
        while self.coeffs.last().is_some_and(RationalFunctionQ::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    fn add(&self, rhs: &Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for i in 0..len {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(RationalFunctionQ::zero);
            let b = rhs.coeffs.get(i).cloned().unwrap_or_else(RationalFunctionQ::zero);
            coeffs.push(&a + &b);
        }
        Self { coeffs }.trim()
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::zero();
        }
        let mut coeffs =
            vec![RationalFunctionQ::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Self { coeffs }.trim()
    }
}

/// Brute-force count of `k`-dimensional subspaces of `F_p^n`, by
/// enumerating every `k x n` matrix over `F_p` and collecting distinct
/// reduced row-echelon forms. Returns `None` when `p^(k*n)` exceeds the
/// desk-scale enumeration budget.
pub fn count_subspaces_bruteforce(n: u32, k: u32, p: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    if k == 0 {
        return Some(1);
    }
    let cells = (k * n) as u32;
    let total = checked_pow(p, cells)?;
    if total > 2_000_000 {
        return None;
    }
    let mut seen = std::collections::HashSet::new();
    let mut mat = vec![0u64; (k * n) as usize];
    for code in 0..total {
        let mut c = code;
        for cell in mat.iter_mut() {
            *cell = c % p;
            c /= p;
        }
        if let Some(rref) = rref_full_rank(&mat, k as usize, n as usize, p) {
            seen.insert(rref);
        }
    }
    Some(seen.len() as u64)
}

/// Subspace count via pivot-column enumeration: the sum over pivot sets of
/// `p^(number of free cells)`. An independent combinatorial route that
/// covers the full desk grid cheaply.
pub fn count_subspaces_pivot(n: u32, k: u32, p: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut total = 0u128;
    let mut pivots: Vec<u32> = (0..k).collect();
    loop {
        let mut free = 0u32;
        for (i, &c) in pivots.iter().enumerate() {
            free += n - c - (k - i as u32);
        }
        total += (p as u128).pow(free);
        // Next k-subset of {0..n-1} in lexicographic order.
        let mut i = k as usize;
        loop {
            if i == 0 {
                return total;
            }
            i -= 1;
            if pivots[i] < n - (k - i as u32) {
                pivots[i] += 1;
                for j in i + 1..k as usize {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn checked_pow(p: u64, e: u32) -> Option<u64> {
    let mut out: u64 = 1;
    for _ in 0..e {
        out = out.checked_mul(p)?;
    }
    Some(out)
}

/// Reduced row-echelon form over `F_p`; `None` when the rank is deficient.
fn rref_full_rank(mat: &[u64], k: usize, n: usize, p: u64) -> Option<Vec<u64>> {
    let mut m = mat.to_vec();
    let mut row = 0;
    for col in 0..n {
        if row == k {
            break;
        }
        let pivot = (row..k).find(|&r| m[r * n + col] % p != 0);
        let Some(pr) = pivot else { continue };
        for j in 0..n {
            m.swap(pr * n + j, row * n + j);
        }
        let inv = mod_inverse(m[row * n + col], p);
        for j in 0..n {
            m[row * n + j] = m[row * n + j] * inv % p;
        }
        for r in 0..k {
            if r != row && m[r * n + col] != 0 {
                let factor = m[r * n + col];
                for j in 0..n {
                    let sub = factor * m[row * n + j] % p;
                    m[r * n + j] = (m[r * n + j] + p - sub) % p;
                }
            }
        }
        row += 1;
    }
    (row == k).then_some(m)
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: p is prime at desk scale.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Evaluates a rational function at an integer point, panicking on
/// denominator roots; test helper used across the crate.
pub fn eval_at_int(f: &RationalFunctionQ, v: i64) -> BigRational {
    f.eval(&BigRational::from_integer(BigInt::from(v)))
        .expect("evaluation point is not a denominator root")
}

/// `true` when the value is a polynomial with nonnegative integer
/// coefficients (the shape every Cartan cell volume must have).
pub fn is_nonneg_integer_poly(f: &RationalFunctionQ) -> bool {
    match f.as_polynomial() {
        Some(p) => p
            .terms()
            .all(|(_, c)| c.denom().is_one() && c.numer() >= &BigInt::zero()),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> RationalFunctionQ {
        RationalFunctionQ::q_power(1)
    }

    #[test]
    fn qbinom_small_values() {
        // (2,1) -> 1 + q
        assert_eq!(qbinom(2, 1).unwrap(), &RationalFunctionQ::one() + &q());
        // (n,0) -> 1
        for n in 0..6 {
            assert!(qbinom(n, 0).unwrap().is_one());
        }
        assert!(qbinom(1, 2).is_err());
    }

    #[test]
    fn qbinom_4_2_matches_subspace_count() {
        // 1 + q + 2q^2 + q^3 + q^4, frozen from counting 2-dimensional
        // subspaces of F_2^4 (= 35) and matching the evaluation at q = 2.
        let b = qbinom(4, 2).unwrap();
        let expected: RationalFunctionQ = [(0, 1), (1, 1), (2, 2), (3, 1), (4, 1)]
            .iter()
            .fold(RationalFunctionQ::zero(), |acc, &(e, c)| {
                &acc + &(&RationalFunctionQ::q_power(e) * &RationalFunctionQ::from_int(c))
            });
        assert_eq!(b, expected);
        assert_eq!(count_subspaces_bruteforce(4, 2, 2), Some(35));
        assert_eq!(eval_at_int(&b, 2), BigRational::from_integer(BigInt::from(35)));
    }

    #[test]
    fn subspace_counts_brute_force_vs_pivot() {
        for &p in &[2u64, 3, 5] {
            for n in 0..=4u32 {
                for k in 0..=n {
                    let brute = count_subspaces_bruteforce(n, k, p);
                    let pivot = count_subspaces_pivot(n, k, p);
                    if let Some(b) = brute {
                        assert_eq!(b as u128, pivot, "n={n} k={k} p={p}");
                    }
                    assert_eq!(
                        eval_at_int(&qbinom(n, k).unwrap(), p as i64),
                        BigRational::from_integer(BigInt::from(pivot)),
                        "n={n} k={k} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn qbinom_symmetry_and_classical_limit() {
        for n in 0..=8u32 {
            for beta in 0..=n {
                let a = qbinom(n, beta).unwrap();
                let b = qbinom(n, n - beta).unwrap();
                assert_eq!(a, b);
                // At q = 1 the Gaussian binomial degenerates to the
                // ordinary binomial coefficient.
                let mut ordinary = BigRational::one();
                for i in 0..beta {
                    ordinary *= BigRational::new(
                        BigInt::from(n - i),
                        BigInt::from(i + 1),
                    );
                }
                assert_eq!(eval_at_int(&a, 1), ordinary);
            }
        }
    }

    #[test]
    fn mu_gl_small_values() {
        assert!(mu_gl(0).is_one());
        assert!(mu_gl(1).is_one());
        // mu(GL_2) = q/(q+1)
        let expected = &q() / &(&q() + &RationalFunctionQ::one());
        assert_eq!(mu_gl(2), expected);
    }

    #[test]
    fn qbinom_relates_to_mu() {
        // [n choose b]_q = q^{b(n-b)} mu(GL_b) mu(GL_{n-b}) / mu(GL_n)
        for n in 1..=6u32 {
            for b in 0..=n {
                let lhs = qbinom(n, b).unwrap();
                let rhs = &RationalFunctionQ::q_power((b * (n - b)) as i64)
                    * &(&(&mu_gl(b) * &mu_gl(n - b)) / &mu_gl(n));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn newton_identity_holds_up_to_eight() {
        for n in 0..=8 {
            assert!(verify_newton_identity(n), "n = {n}");
        }
    }

    #[test]
    fn newton_identity_counts_homomorphisms() {
        // Spot-check the n = 6 identity at X = q^m, q = 3: both sides count
        // F_3-linear maps from a 6-dimensional space to an m-dimensional
        // one, i.e. 3^(6m).
        let n = 6u32;
        let p = BigRational::from_integer(BigInt::from(3));
        for m in 0..=6u32 {
            let x = num_traits::pow::pow(p.clone(), m as usize);
            let mut rhs = BigRational::zero();
            for beta in 0..=n {
                let mut term = qbinom(n, beta).unwrap().eval(&p).unwrap();
                for i in 0..beta {
                    term *= &x - num_traits::pow::pow(p.clone(), i as usize);
                }
                rhs += term;
            }
            assert_eq!(rhs, num_traits::pow::pow(x, n as usize));
        }
    }

    // Random Laurent polynomials with small support for the ring axioms.
    fn arb_poly() -> impl Strategy<Value = LaurentPolyQ> {
        prop::collection::vec(((-6i64..=6), (-9i64..=9)), 0..6).prop_map(|terms| {
            terms.into_iter().fold(LaurentPolyQ::zero(), |acc, (e, c)| {
                &acc + &LaurentPolyQ::monomial(e, BigRational::from_integer(BigInt::from(c)))
            })
        })
    }

    proptest! {
        #[test]
        fn ring_axioms_hold_exactly(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            let ab_c = &(&a * &b) * &c;
            let a_bc = &a * &(&b * &c);
            prop_assert_eq!(&ab_c, &a_bc);
            let dist = &a * &(&b + &c);
            let expand = &(&a * &b) + &(&a * &c);
            prop_assert_eq!(&dist, &expand);
            prop_assert_eq!(&(&a + &b), &(&b + &a));
        }

        #[test]
        fn rational_function_field_axioms(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let f = RationalFunctionQ::new(a.clone(), b.clone()).unwrap();
            // Round trip through the defining fraction.
            let back = &(&f * &RationalFunctionQ::from_poly(b)) - &RationalFunctionQ::from_poly(a);
            prop_assert!(back.is_zero());
            if !f.is_zero() {
                prop_assert!((&f * &f.inv().unwrap()).is_one());
            }
        }
    }
}
