//! Contracted orbital integrals over diagonal Cartan configurations: the
//! direct sum [`orbital_direct`], the block-coefficient extraction
//! [`orbital_coeffs`], their combination into a germ expansion
//! [`orbital_germ`], and the linear-term criterion [`check_linear_term`].
//!
//! A test function here is an [`OrbitalProfile`]: lattice-translation
//! invariance and bi-K-invariance reduce a smooth compactly supported
//! function on the symmetric space to a finite table of values indexed by
//! pairs of clamped-valuation vectors, which is exactly the data the
//! Cartan sum consumes.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::cartan::{CellVolumeCache, SignedPartition};
use crate::germs::{germ_of_vol, GermExpansion};
use crate::qring::{mu_gl, RationalFunctionQ};
use crate::volumes::linear_coeff_b;
use crate::{Error, Result};

/// One coordinate of a clamped-valuation vector: either an explicit
/// negative valuation in `[-N, -1]` or the integral class (valuation
/// `>= 0`, printed as `inf`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Clamped {
    Finite(i64),
    Integral,
}

/// A canonical clamped vector: explicit entries first, weakly increasing,
/// followed by the integral-class slots.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ClampedVec(Vec<Clamped>);

impl ClampedVec {
    /// Normalizes: explicit entries sorted ascending, then integral slots.
    pub fn new(mut entries: Vec<Clamped>) -> Self {
        entries.sort_by_key(|e| match e {
            Clamped::Finite(v) => (0, *v),
            Clamped::Integral => (1, 0),
        });
        Self(entries)
    }

    pub fn entries(&self) -> &[Clamped] {
        &self.0
    }

    pub fn all_integral(n: usize) -> Self {
        Self(vec![Clamped::Integral; n])
    }
}

impl std::fmt::Display for ClampedVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|e| match e {
                Clamped::Finite(v) => v.to_string(),
                Clamped::Integral => "inf".to_string(),
            })
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Finite data determining a lattice-invariant test function on diagonal
/// configurations: rank `n`, support radius `N`, and a value table on
/// pairs of clamped vectors. Pairs absent from the table have value zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitalProfile {
    n: usize,
    radius: u64,
    values: BTreeMap<(ClampedVec, ClampedVec), BigRational>,
}

impl OrbitalProfile {
    /// Validates entry ranges and drops zero values. Keys are normalized on
    /// construction so lookups are canonical.
    pub fn new(
        n: usize,
        radius: u64,
        entries: Vec<(ClampedVec, ClampedVec, BigRational)>,
    ) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (first, second, value) in entries {
            for vec in [&first, &second] {
                if vec.entries().len() != n {
                    return Err(Error::Domain(format!(
                        "clamped vector {vec} does not have length {n}"
                    )));
                }
                for e in vec.entries() {
                    if let Clamped::Finite(v) = e {
                        if *v < -(radius as i64) || *v > -1 {
                            return Err(Error::Domain(format!(
                                "explicit entry {v} outside [-{radius}, -1]"
                            )));
                        }
                    }
                }
            }
            if value.is_zero() {
                continue;
            }
            let prev = values.insert((first, second), value);
            if prev.is_some() {
                return Err(Error::Domain("duplicate profile key".into()));
            }
        }
        Ok(Self { n, radius, values })
    }

    /// The all-integral profile: the indicator of the standard lattice.
    pub fn lattice_indicator(n: usize) -> Self {
        let mut values = BTreeMap::new();
        values.insert(
            (ClampedVec::all_integral(n), ClampedVec::all_integral(n)),
            BigRational::from_integer(1.into()),
        );
        Self {
            n,
            radius: 0,
            values,
        }
    }

    pub fn empty(n: usize, radius: u64) -> Self {
        Self {
            n,
            radius,
            values: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(ClampedVec, ClampedVec), &BigRational)> {
        self.values.iter()
    }

    /// The value at the all-integral pair: `phi(0)` in the linear-term
    /// criterion.
    pub fn value_at_zero(&self) -> BigRational {
        self.value(&ClampedVec::all_integral(self.n), &ClampedVec::all_integral(self.n))
    }

    pub fn value(&self, first: &ClampedVec, second: &ClampedVec) -> BigRational {
        self.values
            .get(&(first.clone(), second.clone()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Pointwise linear combination `a * self + b * other` (same rank; the
    /// radius is the larger of the two).
    pub fn linear_combination(
        &self,
        a: &BigRational,
        other: &Self,
        b: &BigRational,
    ) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Domain("profile ranks differ".into()));
        }
        let mut values: BTreeMap<(ClampedVec, ClampedVec), BigRational> = BTreeMap::new();
        for (k, v) in &self.values {
            values.insert(k.clone(), a * v);
        }
        for (k, v) in &other.values {
            let entry = values.entry(k.clone()).or_insert_with(BigRational::zero);
            *entry += b * v;
        }
        values.retain(|_, v| !v.is_zero());
        Ok(Self {
            n: self.n,
            radius: self.radius.max(other.radius),
            values,
        })
    }
}

/// Clamps a diagonal valuation vector: `>= 0` becomes the integral class,
/// values in `[-N, -1]` stay explicit, anything below `-N` kills the term
/// (`None`).
fn clamp(values: impl Iterator<Item = i64>, radius: u64) -> Option<ClampedVec> {
    let mut out = Vec::new();
    for v in values {
        if v >= 0 {
            out.push(Clamped::Integral);
        } else if v >= -(radius as i64) {
            out.push(Clamped::Finite(v));
        } else {
            return None;
        }
    }
    Some(ClampedVec::new(out))
}

/// The contracted orbital sum at valuation `x`:
/// `sum_lambda phi(x - lambda, lambda) vol(K pi^lambda K)` over weakly
/// increasing `lambda` with `-N <= lambda_i <= x + N`.
pub fn orbital_direct(profile: &OrbitalProfile, x: u64) -> RationalFunctionQ {
    let n = profile.rank();
    let radius = profile.radius() as i64;
    let mut cells = CellVolumeCache::new();
    let mut total = RationalFunctionQ::zero();
    let mut tuple = vec![0i64; n];
    direct_rec(
        profile,
        x as i64,
        radius,
        &mut tuple,
        0,
        -radius,
        &mut cells,
        &mut total,
    );
    total
}

#[allow(clippy::too_many_arguments)]
fn direct_rec(
    profile: &OrbitalProfile,
    x: i64,
    radius: i64,
    tuple: &mut Vec<i64>,
    idx: usize,
    lower: i64,
    cells: &mut CellVolumeCache,
    total: &mut RationalFunctionQ,
) {
    if idx == tuple.len() {
        let first = clamp(tuple.iter().map(|&l| x - l), radius as u64);
        let second = clamp(tuple.iter().copied(), radius as u64);
        let (Some(first), Some(second)) = (first, second) else {
            return;
        };
        let value = profile.value(&first, &second);
        if value.is_zero() {
            return;
        }
        let lambda = SignedPartition::new(tuple.clone()).expect("monotone enumeration");
        let term = cells.get(&lambda).mul_rational(&value);
        *total = &*total + &term;
        return;
    }
    for v in lower..=(x + radius) {
        tuple[idx] = v;
        direct_rec(profile, x, radius, tuple, idx + 1, v, cells, total);
    }
}

/// Coefficients of the coarse germ expansion, indexed by the class triples
/// `(n1, n2, n3)` with `n1 + n2 + n3 = n`. Only nonzero coefficients are
/// stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct OrbitalGermCoefficients {
    coeffs: BTreeMap<(u32, u32, u32), RationalFunctionQ>,
}

impl OrbitalGermCoefficients {
    pub fn coeff(&self, triple: (u32, u32, u32)) -> RationalFunctionQ {
        self.coeffs
            .get(&triple)
            .cloned()
            .unwrap_or_else(RationalFunctionQ::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32, u32), &RationalFunctionQ)> {
        self.coeffs.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Extracts the block coefficients `c_{(n1,n2,n3)}(phi)`: for each class
/// triple, a sum over the strictly negative block `xi_1` and the shifted
/// strictly positive block `xi_3'` of
///
/// `prod_i mu(GL_{n_i}) / mu(GL_n) * q^{-(n2+n3)|xi_1| + (n1+n2)|xi_3'|}
///  * vol-cell(xi_1) * vol-cell(xi_3') * phi(block configuration)`.
pub fn orbital_coeffs(profile: &OrbitalProfile) -> OrbitalGermCoefficients {
    let n = profile.rank() as u32;
    let radius = profile.radius() as i64;
    let mut cells = CellVolumeCache::new();
    let mut coeffs = BTreeMap::new();
    for n1 in 0..=n {
        for n2 in 0..=(n - n1) {
            let n3 = n - n1 - n2;
            let mut acc = RationalFunctionQ::zero();
            let xi1s = increasing_tuples(n1 as usize, -radius, -1);
            let xi3s = increasing_tuples(n3 as usize, 1, radius);
            for xi1 in &xi1s {
                for xi3 in &xi3s {
                    // First matrix: integral on the n1 + n2 block, -xi_3'
                    // on the last block. Second: xi_1, then integral.
                    let mut first = vec![Clamped::Integral; (n1 + n2) as usize];
                    first.extend(xi3.iter().map(|&v| Clamped::Finite(-v)));
                    let first = ClampedVec::new(first);
                    let mut second: Vec<Clamped> =
                        xi1.iter().map(|&v| Clamped::Finite(v)).collect();
                    second.extend(vec![Clamped::Integral; (n2 + n3) as usize]);
                    let second = ClampedVec::new(second);
                    let value = profile.value(&first, &second);
                    if value.is_zero() {
                        continue;
                    }
                    let w1: i64 = xi1.iter().sum();
                    let w3: i64 = xi3.iter().sum();
                    let exp = -((n2 + n3) as i64) * w1 + ((n1 + n2) as i64) * w3;
                    let cell1 =
                        cells.get(&SignedPartition::new(xi1.clone()).expect("increasing"));
                    let cell3 =
                        cells.get(&SignedPartition::new(xi3.clone()).expect("increasing"));
                    let term = &(&RationalFunctionQ::q_power(exp) * &(&cell1 * &cell3))
                        .mul_rational(&value)
                        * &mu_triple(n1, n2, n3, n);
                    acc = &acc + &term;
                }
            }
            if !acc.is_zero() {
                coeffs.insert((n1, n2, n3), acc);
            }
        }
    }
    OrbitalGermCoefficients { coeffs }
}

fn mu_triple(n1: u32, n2: u32, n3: u32, n: u32) -> RationalFunctionQ {
    &(&(&mu_gl(n1) * &mu_gl(n2)) * &mu_gl(n3)) / &mu_gl(n)
}

/// Weakly increasing tuples of the given length with entries in
/// `[lower, upper]`; the empty length yields one empty tuple.
fn increasing_tuples(len: usize, lower: i64, upper: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut tuple = vec![0i64; len];
    fn rec(
        tuple: &mut Vec<i64>,
        idx: usize,
        lower: i64,
        upper: i64,
        out: &mut Vec<Vec<i64>>,
    ) {
        if idx == tuple.len() {
            out.push(tuple.clone());
            return;
        }
        for v in lower..=upper {
            tuple[idx] = v;
            rec(tuple, idx + 1, v, upper, out);
        }
    }
    if len > 0 && lower > upper {
        return out;
    }
    rec(&mut tuple, 0, lower, upper, &mut out);
    out
}

/// Desk-scale rank bound for the germ side.
const ORBITAL_GERM_MAX_RANK: usize = 3;

/// The germ expansion of `x -> orbital_direct(profile, x)`: each class
/// triple contributes its coefficient times the germ of
/// `vol_{n2, n1-n3}` with exponents shifted by `n3 (n1 + n2)`. When
/// `n1 - n3 < 0` the functional equation converts the pair (shift, weight)
/// to `n1 (n2 + n3)` and `n3 - n1` first, so only nonnegative-weight germs
/// are ever fitted.
///
/// The result is valid from `x0 = 2N + 2`, the first `x` at which the
/// three segment classes can no longer interact.
pub fn orbital_germ(profile: &OrbitalProfile) -> Result<GermExpansion> {
    if profile.rank() > ORBITAL_GERM_MAX_RANK {
        return Err(Error::Domain(format!(
            "orbital germ rank {} exceeds desk bound {ORBITAL_GERM_MAX_RANK}",
            profile.rank()
        )));
    }
    let validity = 2 * profile.radius() + 2;
    let mut total = GermExpansion::empty(validity);
    for (&(n1, n2, n3), c) in orbital_coeffs(profile).entries() {
        let alpha = n1 as i64 - n3 as i64;
        let (weight, shift) = if alpha >= 0 {
            (alpha, n3 as i64 * (n1 + n2) as i64)
        } else {
            (-alpha, n1 as i64 * (n2 + n3) as i64)
        };
        let part = germ_of_vol(n2, weight)?.shift_exponent(shift).scale(c);
        total = total.add(&part);
    }
    Ok(GermExpansion::new(total.term_map().clone(), validity))
}

/// Whether the `(a, b) = (0, 1)` coefficient of the orbital germ equals
/// `phi(0) * B_n` — the quantitative linear-term criterion.
pub fn check_linear_term(profile: &OrbitalProfile) -> Result<bool> {
    let n = profile.rank();
    if n == 0 || n > ORBITAL_GERM_MAX_RANK {
        return Err(Error::Domain(format!(
            "linear-term check needs 1 <= n <= {ORBITAL_GERM_MAX_RANK}, got {n}"
        )));
    }
    let germ = orbital_germ(profile)?;
    let expected = linear_coeff_b(n as u32)?.mul_rational(&profile.value_at_zero());
    Ok(germ.coeff(0, 1) == expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germs::eval_germ;
    use crate::volumes::{vol_direct, VolParams};

    fn rat(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn rf_int(v: i64) -> RationalFunctionQ {
        RationalFunctionQ::from_int(v)
    }

    /// The n = 1, N = 1 profile from the worked examples: indicator of the
    /// lattice plus the class with second valuation -1.
    fn example_profile() -> OrbitalProfile {
        OrbitalProfile::new(
            1,
            1,
            vec![
                (
                    ClampedVec::all_integral(1),
                    ClampedVec::all_integral(1),
                    rat(1),
                ),
                (
                    ClampedVec::all_integral(1),
                    ClampedVec::new(vec![Clamped::Finite(-1)]),
                    rat(1),
                ),
            ],
        )
        .unwrap()
    }

    #[test]
    fn direct_examples() {
        // Indicator of the lattice, n = 1, N = 0: equals vol_{1,0}(x).
        let ind = OrbitalProfile::lattice_indicator(1);
        assert_eq!(orbital_direct(&ind, 4), rf_int(5));
        assert_eq!(
            orbital_direct(&ind, 7),
            vol_direct(&VolParams::new(1, 0, 7))
        );

        // The two-entry profile at x = 0: lambda in {-1, 0, 1} contribute
        // 1, 1, 0.
        assert_eq!(orbital_direct(&example_profile(), 0), rf_int(2));

        // The empty profile vanishes identically.
        let empty = OrbitalProfile::empty(2, 1);
        assert!(orbital_direct(&empty, 5).is_zero());
    }

    #[test]
    fn coeff_examples() {
        // Lattice indicator at n = 2: only the middle class survives.
        let ind = OrbitalProfile::lattice_indicator(2);
        let c = orbital_coeffs(&ind);
        assert_eq!(c.coeff((0, 2, 0)), rf_int(1));
        assert_eq!(c.entries().count(), 1);

        // The example profile has classes (0,1,0) and (1,0,0), each with
        // coefficient 1.
        let c = orbital_coeffs(&example_profile());
        assert_eq!(c.coeff((0, 1, 0)), rf_int(1));
        assert_eq!(c.coeff((1, 0, 0)), rf_int(1));
        assert_eq!(c.entries().count(), 2);

        // Empty profile: no coefficients.
        assert!(orbital_coeffs(&OrbitalProfile::empty(1, 2)).is_empty());
    }

    #[test]
    fn germ_examples() {
        // Lattice indicator, n = 1: germ of x + 1.
        let g = orbital_germ(&OrbitalProfile::lattice_indicator(1)).unwrap();
        assert_eq!(g.coeff(0, 1), rf_int(1));
        assert_eq!(g.coeff(0, 0), rf_int(1));
        assert_eq!(g.num_terms(), 2);

        // Empty profile: empty germ.
        assert!(orbital_germ(&OrbitalProfile::empty(2, 1)).unwrap().is_empty());

        // The example profile: x + 2.
        let g = orbital_germ(&example_profile()).unwrap();
        assert_eq!(g.coeff(0, 1), rf_int(1));
        assert_eq!(g.coeff(0, 0), rf_int(2));
        assert_eq!(g.num_terms(), 2);
    }

    #[test]
    fn germ_matches_direct_sum() {
        let profile = example_profile();
        let g = orbital_germ(&profile).unwrap();
        for x in g.validity_from()..(g.validity_from() + 8) {
            assert_eq!(
                eval_germ(&g, x).unwrap(),
                orbital_direct(&profile, x),
                "x = {x}"
            );
        }
    }

    #[test]
    fn linear_term_examples() {
        assert!(check_linear_term(&OrbitalProfile::lattice_indicator(1)).unwrap());
        assert!(check_linear_term(&OrbitalProfile::empty(2, 1)).unwrap());
        assert!(check_linear_term(&example_profile()).unwrap());
    }

    #[test]
    fn direct_and_coeffs_are_linear_in_the_profile() {
        let a = OrbitalProfile::lattice_indicator(1);
        let b = example_profile();
        let combo = a
            .linear_combination(&rat(3), &b, &rat(-2))
            .unwrap();
        for x in 0..6u64 {
            let lhs = orbital_direct(&combo, x);
            let rhs = &orbital_direct(&a, x).mul_rational(&rat(3))
                + &orbital_direct(&b, x).mul_rational(&rat(-2));
            assert_eq!(lhs, rhs, "x = {x}");
        }
        let lhs = orbital_coeffs(&combo);
        let ca = orbital_coeffs(&a);
        let cb = orbital_coeffs(&b);
        for (&t, _) in lhs.entries() {
            let rhs = &ca.coeff(t).mul_rational(&rat(3)) + &cb.coeff(t).mul_rational(&rat(-2));
            assert_eq!(lhs.coeff(t), rhs, "triple {t:?}");
        }
    }

    #[test]
    fn profile_validation() {
        // Entry outside [-N, -1].
        assert!(OrbitalProfile::new(
            1,
            1,
            vec![(
                ClampedVec::new(vec![Clamped::Finite(-2)]),
                ClampedVec::all_integral(1),
                rat(1),
            )],
        )
        .is_err());
        // Wrong arity.
        assert!(OrbitalProfile::new(
            2,
            1,
            vec![(
                ClampedVec::all_integral(1),
                ClampedVec::all_integral(2),
                rat(1),
            )],
        )
        .is_err());
        // Zero values are dropped.
        let p = OrbitalProfile::new(
            1,
            1,
            vec![(
                ClampedVec::all_integral(1),
                ClampedVec::all_integral(1),
                rat(0),
            )],
        )
        .unwrap();
        assert_eq!(p.entries().count(), 0);
    }
}
