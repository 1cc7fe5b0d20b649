//! Expansions of integer-indexed sequences into finite combinations
//! `sum_{a,b} c_{a,b} q^{a x} x^b`, valid from a threshold `x0` on.
//!
//! A sequence admitting such an expansion is determined by finitely many
//! samples, and the expansion is unique because the functions `q^{a x} x^b`
//! are linearly independent. [`fit_germ`] recovers the coefficients exactly
//! from samples and then re-verifies the expansion on held-out points, so
//! an undersized support bound fails loudly instead of silently.
//!
//! The linear system behind a fit is a confluent Vandermonde system with
//! nodes `q^a`. Rather than dense elimination (whose minors blow up at the
//! bounds used for the volume family), the solver annihilates all but one
//! exponential with difference operators `E - q^{a'}`, interpolates the
//! surviving polynomial part, and undoes the operator by a small triangular
//! solve. The arithmetic is exact rational-function arithmetic throughout.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::qring::{LaurentPolyQ, RationalFunctionQ};
use crate::volumes::VolTable;
use crate::{Error, Result};

/// A finite expansion `sum c_{a,b} q^{a x} x^b` together with the smallest
/// `x` from which it reproduces its source sequence.
///
/// Exponents `a` are signed: families with negative weight exponent have
/// germs with negative `a` (the functional-equation image of a nonnegative
/// one). No stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GermExpansion {
    terms: BTreeMap<(i64, u32), RationalFunctionQ>,
    validity_from: u64,
}

impl GermExpansion {
    pub fn new(terms: BTreeMap<(i64, u32), RationalFunctionQ>, validity_from: u64) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self {
            terms,
            validity_from,
        }
    }

    pub fn empty(validity_from: u64) -> Self {
        Self {
            terms: BTreeMap::new(),
            validity_from,
        }
    }

    pub fn validity_from(&self) -> u64 {
        self.validity_from
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, u32), &RationalFunctionQ)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `q^{a x} x^b`, zero when absent.
    pub fn coeff(&self, a: i64, b: u32) -> RationalFunctionQ {
        self.terms
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(RationalFunctionQ::zero)
    }

    /// Shifts every exponent: `q^{a x} -> q^{(a + delta) x}`.
    pub fn shift_exponent(&self, delta: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((a + delta, b), c.clone()))
                .collect(),
            validity_from: self.validity_from,
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &RationalFunctionQ) -> Self {
        Self::new(
            self.terms
                .iter()
                .map(|(&k, v)| (k, c * v))
                .collect(),
            self.validity_from,
        )
    }

    /// Termwise sum; the validity threshold is the larger of the two.
    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (&k, v) in &other.terms {
            let entry = terms.entry(k).or_insert_with(RationalFunctionQ::zero);
            *entry = &*entry + v;
        }
        Self::new(terms, self.validity_from.max(other.validity_from))
    }

    /// The map of the terms alone, for structural comparisons.
    pub fn term_map(&self) -> &BTreeMap<(i64, u32), RationalFunctionQ> {
        &self.terms
    }
}

/// Evaluates the expansion at an integer `x >= validity_from`.
pub fn eval_germ(g: &GermExpansion, x: u64) -> Result<RationalFunctionQ> {
    if x < g.validity_from {
        return Err(Error::Domain(format!(
            "germ evaluated at x = {x} below its validity threshold {}",
            g.validity_from
        )));
    }
    let mut out = RationalFunctionQ::zero();
    for (&(a, b), c) in &g.terms {
        let xb = BigRational::from_integer(BigInt::from(x).pow(b));
        let term = &RationalFunctionQ::q_power(a * x as i64)
            * &RationalFunctionQ::from_rational(xb);
        out = &out + &(c * &term);
    }
    Ok(out)
}

/// Fits a sampled sequence on the rectangular support grid
/// `0 <= a <= a_max`, `0 <= b <= b_max`. Samples start at `x0`; after
/// solving, the expansion is verified against `2 b_max + 2` held-out
/// samples beyond the square system.
///
/// Errors with [`Error::FitMismatch`] carrying the first mismatching `x`
/// when the sequence does not admit an expansion within the bound.
pub fn fit_germ<F>(sampler: F, support_bound: (u32, u32), x0: u64) -> Result<GermExpansion>
where
    F: Fn(u64) -> RationalFunctionQ,
{
    let exps: Vec<i64> = (0..=support_bound.0 as i64).collect();
    fit_on_exponents(&sampler, &exps, support_bound.1, x0)
}

/// Fit on an explicit set of exponents `a` (signed), polynomial degree at
/// most `b_max` per exponent.
pub(crate) fn fit_on_exponents<F>(
    sampler: &F,
    exps: &[i64],
    b_max: u32,
    x0: u64,
) -> Result<GermExpansion>
where
    F: Fn(u64) -> RationalFunctionQ,
{
    let exps: Vec<i64> = {
        let set: BTreeSet<i64> = exps.iter().copied().collect();
        set.into_iter().collect()
    };
    let bp1 = b_max as usize + 1;
    let k = exps.len() * bp1;
    let extra = 2 * b_max as usize + 2;
    let total = k + extra;
    let samples: Vec<RationalFunctionQ> = (0..total).map(|i| sampler(x0 + i as u64)).collect();

    if exps.is_empty() {
        let g = GermExpansion::empty(x0);
        verify_fit(&g, &samples, x0)?;
        return Ok(g);
    }

    let mut terms = BTreeMap::new();
    for &a in &exps {
        // Annihilate every other exponential component.
        let mut r = samples.clone();
        for &other in &exps {
            if other == a {
                continue;
            }
            let q_other = RationalFunctionQ::q_power(other);
            for _ in 0..bp1 {
                for i in 0..r.len() - 1 {
                    r[i] = &r[i + 1] - &(&q_other * &r[i]);
                }
                r.pop();
            }
        }
        debug_assert!(r.len() >= bp1);
        // What remains is q^{a x} rho(x) with deg rho <= b_max; divide out
        // the exponential and interpolate rho.
        let values: Vec<RationalFunctionQ> = r
            .iter()
            .take(bp1)
            .enumerate()
            .map(|(i, v)| v * &RationalFunctionQ::q_power(-a * (x0 + i as u64) as i64))
            .collect();
        let nodes: Vec<i64> = (0..bp1).map(|i| (x0 + i as u64) as i64).collect();
        let rho = interpolate(&nodes, &values);
        // rho = Op(p) where Op = prod_{a' != a} (q^a E - q^{a'})^{b_max+1}
        // acts on polynomials in x; undo it by a triangular solve.
        let op_images = operator_images(a, &exps, b_max);
        let p = solve_triangular(&op_images, &rho);
        for (b, c) in p.into_iter().enumerate() {
            if !c.is_zero() {
                terms.insert((a, b as u32), c);
            }
        }
    }

    let g = GermExpansion::new(terms, x0);
    verify_fit(&g, &samples, x0)?;
    Ok(g)
}

/// Checks the fitted expansion against every sample, reporting the first
/// mismatching `x`. Coefficient denominators are cleared once so the bulk
/// of the comparison is polynomial arithmetic.
fn verify_fit(g: &GermExpansion, samples: &[RationalFunctionQ], x0: u64) -> Result<()> {
    let mut den = LaurentPolyQ::one();
    for (_, c) in g.terms() {
        let d = c.denom();
        let common = den.gcd(d);
        den = &den * &d.div_exact(&common).expect("gcd divides");
    }
    let cleared: Vec<(i64, u32, LaurentPolyQ)> = g
        .terms()
        .map(|(&(a, b), c)| {
            let scale = den.div_exact(c.denom()).expect("lcm construction");
            (a, b, c.numer() * &scale)
        })
        .collect();
    let den_rf = RationalFunctionQ::from_poly(den);
    for (i, sample) in samples.iter().enumerate() {
        let x = x0 + i as u64;
        let mut lhs = LaurentPolyQ::zero();
        for (a, b, poly) in &cleared {
            let xb = BigRational::from_integer(BigInt::from(x).pow(*b));
            lhs = &lhs + &poly.mul_monomial(a * x as i64, &xb);
        }
        if RationalFunctionQ::from_poly(lhs) != sample * &den_rf {
            return Err(Error::FitMismatch { first_mismatch: x });
        }
    }
    Ok(())
}

/// Lagrange interpolation through integer nodes, returning coefficients of
/// `x^0..x^{len-1}`.
fn interpolate(nodes: &[i64], values: &[RationalFunctionQ]) -> Vec<RationalFunctionQ> {
    let len = nodes.len();
    let mut coeffs = vec![RationalFunctionQ::zero(); len];
    for (i, vi) in values.iter().enumerate() {
        // Basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j), expanded
        // over the rationals.
        let mut basis = vec![BigRational::from_integer(BigInt::from(1))];
        let mut denom = BigRational::from_integer(BigInt::from(1));
        for (j, &xj) in nodes.iter().enumerate() {
            if j == i {
                continue;
            }
            denom *= BigRational::from_integer(BigInt::from(nodes[i] - xj));
            // Multiply basis by (x - x_j).
            let mut next = vec![BigRational::from_integer(BigInt::from(0)); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * BigRational::from_integer(BigInt::from(xj));
            }
            basis = next;
        }
        let scale = vi * &RationalFunctionQ::from_rational(denom.recip());
        for (d, c) in basis.iter().enumerate() {
            let contribution = &scale * &RationalFunctionQ::from_rational(c.clone());
            coeffs[d] = &coeffs[d] + &contribution;
        }
    }
    coeffs
}

/// Images `Op(x^b)` for `Op = prod_{a' != a} (q^a E - q^{a'})^{b_max+1}`,
/// where `E` is the shift `x -> x + 1`. Each image is a polynomial of
/// degree exactly `b` (the diagonal coefficient is a product of nonzero
/// `q^a - q^{a'}`), so the operator is invertible by back-substitution.
fn operator_images(a: i64, exps: &[i64], b_max: u32) -> Vec<Vec<RationalFunctionQ>> {
    let bp1 = b_max as usize + 1;
    let mut images: Vec<Vec<RationalFunctionQ>> = (0..bp1)
        .map(|b| {
            let mut v = vec![RationalFunctionQ::zero(); bp1];
            v[b] = RationalFunctionQ::one();
            v
        })
        .collect();
    let qa = RationalFunctionQ::q_power(a);
    for &other in exps {
        if other == a {
            continue;
        }
        let qo = RationalFunctionQ::q_power(other);
        for _ in 0..bp1 {
            for img in images.iter_mut() {
                *img = apply_factor(img, &qa, &qo);
            }
        }
    }
    images
}

/// `(q^a E - q^{a'}) p(x) = q^a p(x+1) - q^{a'} p(x)` on coefficient
/// vectors.
fn apply_factor(
    p: &[RationalFunctionQ],
    qa: &RationalFunctionQ,
    qo: &RationalFunctionQ,
) -> Vec<RationalFunctionQ> {
    let len = p.len();
    let mut out = vec![RationalFunctionQ::zero(); len];
    // p(x+1) via binomial expansion.
    for (d, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut binom = BigRational::from_integer(BigInt::from(1));
        for j in 0..=d {
            // C(d, j) contribution to x^j.
            let shifted = &(qa * c) * &RationalFunctionQ::from_rational(binom.clone());
            out[j] = &out[j] + &shifted;
            if j < d {
                binom = binom * BigRational::new(BigInt::from(d - j), BigInt::from(j + 1));
            }
        }
        out[d] = &out[d] - &(qo * c);
    }
    out
}

/// Solves `Op(p) = rho` given the images `Op(x^b)`; upper triangular in the
/// monomial basis.
fn solve_triangular(
    images: &[Vec<RationalFunctionQ>],
    rho: &[RationalFunctionQ],
) -> Vec<RationalFunctionQ> {
    let n = images.len();
    let mut p = vec![RationalFunctionQ::zero(); n];
    for b in (0..n).rev() {
        let mut acc = rho[b].clone();
        for j in (b + 1)..n {
            acc = &acc - &(&p[j] * &images[j][b]);
        }
        p[b] = &acc / &images[b][b];
    }
    p
}

/// Desk-scale rank bound for [`germ_of_vol`].
const GERM_VOL_MAX_RANK: u32 = 4;

/// The germ expansion of `x -> vol_{n,alpha}(x)`, fitted with support bound
/// `a_max = n(|alpha| + n)`, `b_max = n`, valid from `x0 = 1`.
///
/// For `alpha >= 1` the result contains only terms with `a >= 1` besides
/// the constant `(0,0)`; for `alpha < 0` the exponents are the
/// functional-equation shifts `a - n|alpha|` of the `|alpha|` germ and may
/// be negative.
pub fn germ_of_vol(n: u32, alpha: i64) -> Result<GermExpansion> {
    if n > GERM_VOL_MAX_RANK {
        return Err(Error::Domain(format!(
            "germ_of_vol rank {n} exceeds desk bound {GERM_VOL_MAX_RANK}"
        )));
    }
    static CACHE: OnceLock<Mutex<BTreeMap<(u32, i64), GermExpansion>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(g) = cache.lock().unwrap().get(&(n, alpha)) {
        return Ok(g.clone());
    }

    let a_max = (n as i64) * (alpha.unsigned_abs() as i64 + n as i64);
    let b_max = n;
    let x0 = 1u64;
    let table = std::cell::RefCell::new(VolTable::new());
    let sampler = |x: u64| table.borrow_mut().value(n, alpha, x);

    // The recursion's exponent bookkeeping pins down the possible
    // exponents; fitting on that sparse set first keeps the solve small.
    // The held-out verification vouches for the result either way, and a
    // mismatch falls back to the full grid, then to one doubling.
    let sparse = predicted_exponents(n, alpha);
    let attempts: [Vec<i64>; 3] = [
        sparse.into_iter().collect(),
        grid_exponents(n, alpha, a_max),
        grid_exponents(n, alpha, 2 * a_max),
    ];
    let mut last_err = None;
    for exps in &attempts {
        match fit_on_exponents(&sampler, exps, b_max, x0) {
            Ok(g) => {
                if alpha >= 1 {
                    debug_assert!(
                        g.terms().all(|(&(a, b), _)| a >= 1 || (a, b) == (0, 0)),
                        "vol germ structure violated for n={n}, alpha={alpha}"
                    );
                }
                cache.lock().unwrap().insert((n, alpha), g.clone());
                return Ok(g);
            }
            Err(e @ Error::FitMismatch { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt ran"))
}

/// Rectangular exponent grid for the fallback fits, shifted by the
/// functional equation when `alpha < 0`.
fn grid_exponents(n: u32, alpha: i64, a_max: i64) -> Vec<i64> {
    let shift = if alpha < 0 { n as i64 * alpha } else { 0 };
    (0..=a_max).map(|a| a + shift).collect()
}

/// Exponents that can occur in the germ of `vol_{n,alpha}`, read off the
/// first-segment recursion: `{0, n alpha}` together with the exponents of
/// every `vol_{n-beta, alpha+beta}`.
fn predicted_exponents(n: u32, alpha: i64) -> BTreeSet<i64> {
    if alpha < 0 {
        return predicted_exponents(n, -alpha)
            .into_iter()
            .map(|a| a + n as i64 * alpha)
            .collect();
    }
    let mut out = BTreeSet::new();
    out.insert(0);
    if n == 0 {
        return out;
    }
    out.insert(n as i64 * alpha);
    for beta in 1..n {
        out.extend(predicted_exponents(n - beta, alpha + beta as i64));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qring::one_minus_q_pow;
    use crate::volumes::{const_term_a, linear_coeff_b, vol_direct, VolParams};

    fn rf_int(c: i64) -> RationalFunctionQ {
        RationalFunctionQ::from_int(c)
    }

    #[test]
    fn eval_germ_examples() {
        // Constant germ.
        let mut terms = BTreeMap::new();
        terms.insert((0i64, 0u32), rf_int(1));
        let g = GermExpansion::new(terms, 0);
        assert!(eval_germ(&g, 9).unwrap().is_one());

        // x + 1 at x = 4.
        let mut terms = BTreeMap::new();
        terms.insert((0, 1), rf_int(1));
        terms.insert((0, 0), rf_int(1));
        let g = GermExpansion::new(terms, 0);
        assert_eq!(eval_germ(&g, 4).unwrap(), rf_int(5));

        // Geometric closed form: q/(q-1) q^x + 1/(1-q) at x = 2 is
        // 1 + q + q^2.
        let q_over = &RationalFunctionQ::q_power(1) / &(-&one_minus_q_pow(1));
        let const_term = one_minus_q_pow(1).inv().unwrap();
        let mut terms = BTreeMap::new();
        terms.insert((1, 0), q_over);
        terms.insert((0, 0), const_term);
        let g = GermExpansion::new(terms, 0);
        let expected = &(&rf_int(1) + &RationalFunctionQ::q_power(1))
            + &RationalFunctionQ::q_power(2);
        assert_eq!(eval_germ(&g, 2).unwrap(), expected);

        assert!(eval_germ(&GermExpansion::empty(3), 2).is_err());
    }

    #[test]
    fn fit_recovers_known_expansions() {
        // vol_{1,1} with bounds (1,1): q/(q-1) q^x + 1/(1-q).
        let g = fit_germ(
            |x| vol_direct(&VolParams::new(1, 1, x)),
            (1, 1),
            1,
        )
        .unwrap();
        assert_eq!(g.num_terms(), 2);
        assert_eq!(
            g.coeff(1, 0),
            &RationalFunctionQ::q_power(1) / &(-&one_minus_q_pow(1))
        );
        assert_eq!(g.coeff(0, 0), one_minus_q_pow(1).inv().unwrap());

        // vol_{1,0} with bounds (0,1): x + 1.
        let g = fit_germ(|x| vol_direct(&VolParams::new(1, 0, x)), (0, 1), 0).unwrap();
        assert_eq!(g.coeff(0, 1), rf_int(1));
        assert_eq!(g.coeff(0, 0), rf_int(1));
        assert_eq!(g.num_terms(), 2);

        // Constant sampler with bounds (0,0).
        let g = fit_germ(|_| rf_int(1), (0, 0), 0).unwrap();
        assert_eq!(g.num_terms(), 1);
        assert!(g.coeff(0, 0).is_one());
    }

    #[test]
    fn fit_rejects_undersized_support() {
        // x + 1 cannot be expressed with b_max = 0.
        let err = fit_germ(
            |x| vol_direct(&VolParams::new(1, 0, x)),
            (0, 0),
            0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::FitMismatch { .. }));
    }

    #[test]
    fn fit_is_unique_across_sufficient_bounds() {
        let small = fit_germ(|x| vol_direct(&VolParams::new(1, 1, x)), (1, 1), 1).unwrap();
        let large = fit_germ(|x| vol_direct(&VolParams::new(1, 1, x)), (3, 2), 1).unwrap();
        assert_eq!(small.term_map(), large.term_map());

        let small = fit_germ(|x| vol_direct(&VolParams::new(2, 0, x)), (2, 2), 1).unwrap();
        let large = fit_germ(|x| vol_direct(&VolParams::new(2, 0, x)), (4, 3), 1).unwrap();
        assert_eq!(small.term_map(), large.term_map());
    }

    #[test]
    fn germ_of_vol_examples() {
        // n = 0: constant 1.
        let g = germ_of_vol(0, 2).unwrap();
        assert_eq!(g.num_terms(), 1);
        assert!(g.coeff(0, 0).is_one());

        // n = 1, alpha = 1: the geometric closed form.
        let g = germ_of_vol(1, 1).unwrap();
        assert_eq!(
            g.coeff(1, 0),
            &RationalFunctionQ::q_power(1) / &(-&one_minus_q_pow(1))
        );
        assert_eq!(g.coeff(0, 0), const_term_a(1, 1).unwrap());

        // n = 2, alpha = 0: the linear coefficient is B_2.
        let g = germ_of_vol(2, 0).unwrap();
        assert_eq!(g.coeff(0, 1), linear_coeff_b(2).unwrap());

        assert!(germ_of_vol(5, 0).is_err());
    }

    #[test]
    fn germ_round_trip_small() {
        for n in 0..=2u32 {
            for alpha in -2..=2i64 {
                let g = germ_of_vol(n, alpha).unwrap();
                for x in 1..=8u64 {
                    assert_eq!(
                        eval_germ(&g, x).unwrap(),
                        vol_direct(&VolParams::new(n, alpha, x)),
                        "n={n} alpha={alpha} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn germ_structure_for_positive_alpha() {
        for n in 1..=3u32 {
            for alpha in 1..=2i64 {
                let g = germ_of_vol(n, alpha).unwrap();
                for (&(a, b), _) in g.terms() {
                    assert!(a >= 1 || (a, b) == (0, 0), "n={n} alpha={alpha} ({a},{b})");
                }
                assert_eq!(g.coeff(0, 0), const_term_a(n, alpha).unwrap());
            }
        }
    }

    #[test]
    fn functional_equation_transport() {
        for n in 1..=3u32 {
            for alpha in 1..=2i64 {
                let pos = germ_of_vol(n, alpha).unwrap();
                let neg = germ_of_vol(n, -alpha).unwrap();
                assert_eq!(
                    pos.shift_exponent(-(n as i64) * alpha).term_map(),
                    neg.term_map(),
                    "n={n} alpha={alpha}"
                );
            }
        }
    }
}
