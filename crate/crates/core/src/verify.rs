//! Deterministic property-sweep driver: every module's invariants run at a
//! configured desk scale with seeded randomness, producing a
//! machine-readable report.
//!
//! Each property draws from its own ChaCha substream, derived from the
//! run seed and the property name, so adding a property never perturbs
//! another property's cases. Suites run in a work pool; the report is
//! assembled in name order so identical configurations produce identical
//! reports.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::branching::{branching_multiplicity, lr_coeff, self_associate, DominantWeight, PartitionNN};
use crate::cartan::{cell_volume, cell_volume_at, count_cosets_oracle, type_of, SignedPartition};
use crate::germs::{eval_germ, fit_germ, germ_of_vol};
use crate::invariants::{
    car_lin, check_equivariance, is_strongly_regular, project_sym, transfer_factor, BlockPair,
    CharacterSign, MatQ, TransferSigns,
};
use crate::lfactors::{
    bf_unramified_check, check_ext_sq_shift, ext_sq_lfactor, std_lfactor, tate_series,
    PairConvention, SatakeData, UnramifiedTorusData,
};
use crate::orbital::{
    check_linear_term, orbital_coeffs, orbital_direct, orbital_germ, Clamped, ClampedVec,
    OrbitalProfile,
};
use crate::qring::{
    count_subspaces_bruteforce, count_subspaces_pivot, eval_at_int, is_nonneg_integer_poly,
    mu_gl, qbinom, verify_newton_identity, LaurentPolyQ, RationalFunctionQ,
};
use crate::volumes::{
    check_qbinom_identity, const_term_a, linear_coeff_b, vol_direct, vol_recur, vol_recur2,
    VolParams,
};
use crate::{Error, Result};

/// The eight verifiable suites, one per module.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Suite {
    Qring,
    Cartan,
    Volumes,
    Germs,
    Orbital,
    Lfactors,
    Invariants,
    Branching,
}

impl Suite {
    pub fn all() -> Vec<Suite> {
        vec![
            Suite::Qring,
            Suite::Cartan,
            Suite::Volumes,
            Suite::Germs,
            Suite::Orbital,
            Suite::Lfactors,
            Suite::Invariants,
            Suite::Branching,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Qring => "qring",
            Suite::Cartan => "cartan",
            Suite::Volumes => "volumes",
            Suite::Germs => "germs",
            Suite::Orbital => "orbital",
            Suite::Lfactors => "lfactors",
            Suite::Invariants => "invariants",
            Suite::Branching => "branching",
        }
    }

    pub fn parse(name: &str) -> Result<Suite> {
        Suite::all()
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::Config(format!("unknown suite '{name}'")))
    }
}

/// Scale and seeding knobs, with hard desk-scale guardrails enforced
/// before any computation starts.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub suites: Vec<Suite>,
    pub n_max: u32,
    pub x_max: u64,
    pub seeds: u32,
    pub rng_seed: u64,
    pub primes: Vec<u64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            suites: Suite::all(),
            n_max: 3,
            x_max: 6,
            seeds: 20,
            rng_seed: 0,
            primes: vec![2, 3, 5],
        }
    }
}

impl VerifyConfig {
    /// Guardrails: rejects configurations that would leave desk scale.
    pub fn validate(&self) -> Result<()> {
        if self.suites.is_empty() {
            return Err(Error::Config("no suites selected".into()));
        }
        if self.n_max > 4 {
            return Err(Error::Config(format!("n_max {} exceeds 4", self.n_max)));
        }
        if self.x_max > 10 {
            return Err(Error::Config(format!("x_max {} exceeds 10", self.x_max)));
        }
        if self.seeds == 0 || self.seeds > 200 {
            return Err(Error::Config(format!(
                "seeds {} outside 1..=200",
                self.seeds
            )));
        }
        if self.primes.is_empty() {
            return Err(Error::Config("no primes configured".into()));
        }
        for &p in &self.primes {
            if !matches!(p, 2 | 3 | 5 | 7) {
                return Err(Error::Config(format!(
                    "prime {p} outside the desk set {{2, 3, 5, 7}}"
                )));
            }
        }
        Ok(())
    }
}

/// Outcome of one property sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyOutcome {
    pub name: String,
    pub passed: u64,
    pub failed: u64,
    pub first_counterexample: Option<String>,
}

/// Aggregated per-suite numbers plus the per-property breakdown.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub passed: u64,
    pub failed: u64,
    pub counterexamples: Vec<String>,
    pub properties: Vec<PropertyOutcome>,
}

/// The full run: suites in name order; success means zero failures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub suites: BTreeMap<&'static str, SuiteReport>,
    pub success: bool,
}

/// Case collector shared by all property functions.
#[derive(Default)]
struct Checker {
    passed: u64,
    failed: u64,
    first: Option<String>,
}

impl Checker {
    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first.is_none() {
                self.first = Some(describe());
            }
        }
    }

    fn finish(self, name: &str) -> PropertyOutcome {
        PropertyOutcome {
            name: name.to_string(),
            passed: self.passed,
            failed: self.failed,
            first_counterexample: self.first,
        }
    }
}

type PropertyFn = fn(&VerifyConfig, &mut ChaCha8Rng, &mut Checker);

fn registry() -> Vec<(Suite, &'static str, PropertyFn)> {
    vec![
        (Suite::Qring, "qbinom-symmetry-and-q1", prop_qbinom_symmetry),
        (Suite::Qring, "qbinom-subspace-counts", prop_qbinom_subspaces),
        (Suite::Qring, "laurent-ring-axioms", prop_ring_axioms),
        (Suite::Qring, "newton-identity", prop_newton),
        (Suite::Cartan, "cell-volume-oracle", prop_cell_oracle),
        (Suite::Cartan, "cell-shift-invariance", prop_cell_shift),
        (Suite::Cartan, "cell-volume-polynomial", prop_cell_poly),
        (Suite::Cartan, "flat-decomposition", prop_flat_decomposition),
        (Suite::Volumes, "triple-agreement", prop_triple_agreement),
        (Suite::Volumes, "functional-equation", prop_functional_equation),
        (Suite::Volumes, "germ-constant-term", prop_const_term),
        (Suite::Volumes, "germ-linear-coeff", prop_linear_coeff),
        (Suite::Volumes, "qbinom-identity", prop_qbinom_identity),
        (Suite::Germs, "fit-uniqueness", prop_fit_uniqueness),
        (Suite::Germs, "alpha-positive-structure", prop_alpha_structure),
        (Suite::Germs, "germ-round-trip", prop_round_trip),
        (Suite::Germs, "fe-transport", prop_fe_transport),
        (Suite::Orbital, "orbital-germ-consistency", prop_orbital_consistency),
        (Suite::Orbital, "orbital-linear-term", prop_orbital_linear_term),
        (Suite::Orbital, "orbital-linearity", prop_orbital_linearity),
        (Suite::Orbital, "orbital-nonvanishing", prop_orbital_nonvanishing),
        (Suite::Lfactors, "tate-identity", prop_tate),
        (Suite::Lfactors, "std-sign-twist", prop_sign_twist),
        (Suite::Lfactors, "extsq-shift", prop_extsq_shift),
        (Suite::Lfactors, "bf-rank-one", prop_bf),
        (Suite::Lfactors, "pair-conventions", prop_pair_conventions),
        (Suite::Invariants, "projection-action-law", prop_projection_action),
        (Suite::Invariants, "car-lin-invariance", prop_car_lin_invariance),
        (Suite::Invariants, "omega-is-a-sign", prop_omega_sign),
        (Suite::Invariants, "equivariance-cocycle", prop_equivariance),
        (Suite::Branching, "multiplicity-at-most-one", prop_mult_bounded),
        (Suite::Branching, "self-associate-criterion", prop_self_associate),
        (Suite::Branching, "lr-symmetry", prop_lr_symmetry),
        (Suite::Branching, "oracle-shift-consistency", prop_oracle_shift),
        (Suite::Branching, "nonneg-weights-need-zero", prop_nonneg_weights),
    ]
}

/// Stable 64-bit FNV-1a, used to derive per-property substreams.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Runs every property of the selected suites at the configured scale.
/// Deterministic for a fixed configuration.
pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport> {
    config.validate()?;
    let selected: Vec<(Suite, &'static str, PropertyFn)> = registry()
        .into_iter()
        .filter(|(s, _, _)| config.suites.contains(s))
        .collect();
    let outcomes: Vec<(Suite, PropertyOutcome)> = selected
        .par_iter()
        .map(|(suite, name, f)| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(config.rng_seed ^ fnv1a(name.as_bytes()));
            let mut checker = Checker::default();
            f(config, &mut rng, &mut checker);
            (*suite, checker.finish(name))
        })
        .collect();

    let mut suites: BTreeMap<&'static str, SuiteReport> = BTreeMap::new();
    for suite in &config.suites {
        suites.entry(suite.name()).or_default();
    }
    let mut sorted = outcomes;
    sorted.sort_by(|a, b| a.1.name.cmp(&b.1.name));
    for (suite, outcome) in sorted {
        let entry = suites.entry(suite.name()).or_default();
        entry.passed += outcome.passed;
        entry.failed += outcome.failed;
        if let Some(ce) = &outcome.first_counterexample {
            entry.counterexamples.push(format!("{}: {ce}", outcome.name));
        }
        entry.properties.push(outcome);
    }
    let success = suites.values().all(|s| s.failed == 0);
    Ok(VerifyReport { suites, success })
}

// ---------------------------------------------------------------------
// qring properties
// ---------------------------------------------------------------------

fn prop_qbinom_symmetry(_: &VerifyConfig, _: &mut ChaCha8Rng, c: &mut Checker) {
    for n in 0..=8u32 {
        for beta in 0..=n {
            let a = qbinom(n, beta).unwrap();
            let b = qbinom(n, n - beta).unwrap();
            let mut ordinary = BigRational::one();
            for i in 0..beta {
                ordinary *= BigRational::new(BigInt::from(n - i), BigInt::from(i + 1));
            }
            c.case(a == b && eval_at_int(&a, 1) == ordinary, || {
                format!("qbinom({n},{beta})")
            });
        }
    }
}

fn prop_qbinom_subspaces(cfg: &VerifyConfig, _: &mut ChaCha8Rng, c: &mut Checker) {
    for &p in &cfg.primes {
        for n in 0..=8u32 {
            for beta in 0..=n {
                let value = eval_at_int(&qbinom(n, beta).unwrap(), p as i64);
                let pivot = BigRational::from_integer(BigInt::from(
                    count_subspaces_pivot(n, beta, p),
                ));
                let brute_ok = match count_subspaces_bruteforce(n, beta, p) {
                    Some(count) => value == BigRational::from_integer(BigInt::from(count)),
                    None => true, // beyond the brute-force budget
                };
                c.case(value == pivot && brute_ok, || {
                    format!("qbinom({n},{beta}) at q={p}")
                });
            }
        }
    }
}

fn prop_ring_axioms(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    for case in 0..cfg.seeds {
        let a = random_laurent(rng);
        let b = random_laurent(rng);
        let d = random_laurent(rng);
        let assoc = &(&a * &b) * &d == &a * &(&b * &d);
        let dist = &a * &(&b + &d) == &(&a * &b) + &(&a * &d);
        c.case(assoc && dist, || format!("case {case}: a={a} b={b} c={d}"));
    }
}

fn prop_newton(_: &VerifyConfig, _: &mut ChaCha8Rng, c: &mut Checker) {
    for n in 0..=8 {
        c.case(verify_newton_identity(n), || format!("n={n}"));
    }
}

// ---------------------------------------------------------------------
// cartan properties
// ---------------------------------------------------------------------

fn oracle_lambdas(n_max: u32) -> Vec<SignedPartition> {
    let mut out = Vec::new();
    for n in 1..=n_max.min(3) {
        let mut tuple = vec![0i64; n as usize];
        gen_increasing(&mut tuple, 0, 0, 3, &mut |t| {
            if t[0] == 0 {
                out.push(SignedPartition::new(t.to_vec()).unwrap());
            }
        });
    }
    out
}

fn gen_increasing(
    tuple: &mut Vec<i64>,
    idx: usize,
    lower: i64,
    upper: i64,
    f: &mut impl FnMut(&[i64]),
) {
    if idx == tuple.len() {
        f(tuple);
        return;
    }
    for v in lower..=upper {
        tuple[idx] = v;
        gen_increasing(tuple, idx + 1, v, upper, f);
    }
}

fn prop_cell_oracle(cfg: &VerifyConfig, _: &mut ChaCha8Rng, c: &mut Checker) {
    for lambda in oracle_lambdas(cfg.n_max) {
        for &p in &cfg.primes {
            let oracle = count_cosets_oracle(&lambda, p).unwrap();
            let value = cell_volume_at(&lambda, p);
            c.case(
                value == BigRational::from_integer(BigInt::from(oracle)),
                || format!("lambda {lambda} p {p}"),
            );
        }
    }
}

fn random_partition(rng: &mut ChaCha8Rng, n_max: u32) -> SignedPartition {
    let n = rng.gen_range(1..=n_max.max(1)) as usize;
    let mut entries: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
    entries.sort_unstable();
    SignedPartition::new(entries).unwrap()
}

fn prop_cell_shift(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    for _ in 0..cfg.seeds {
        let lambda = random_partition(rng, cfg.n_max);
        let shift = rng.gen_range(-4i64..=4);
        let ok = cell_volume(&lambda.central_shift(shift)) == cell_volume(&lambda);
        c.case(ok, || format!("lambda {lambda} shift {shift}"));
    }
}

fn prop_cell_poly(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    for _ in 0..cfg.seeds {
        let lambda = random_partition(rng, cfg.n_max);
        c.case(is_nonneg_integer_poly(&cell_volume(&lambda)), || {
            format!("lambda {lambda}")
        });
    }
}

fn prop_flat_decomposition(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    for _ in 0..cfg.seeds {
        let lambda = random_partition(rng, cfg.n_max.max(2));
        let ty = type_of(&lambda).unwrap();
        let beta = ty.lengths()[0];
        if beta as usize == lambda.len() {
            continue; // single segment: nothing to decompose
        }
        let n = lambda.len() as u32;
        let flat = SignedPartition::new(lambda.entries()[beta as usize..].to_vec()).unwrap();
        let l1 = lambda.entries()[0];
        let mu_factor = &(&mu_gl(beta) * &mu_gl(n - beta)) / &mu_gl(n);
        let exp = -(beta as i64) * ((n - beta) as i64) * l1 + (beta as i64) * flat.weight();
        let rhs = &(&mu_factor * &RationalFunctionQ::q_power(exp)) * &cell_volume(&flat);
        c.case(cell_volume(&lambda) == rhs, || format!("lambda {lambda}"));
    }
}

// ---------------------------------------------------------------------
// volumes properties
// ---------------------------------------------------------------------

fn vol_grid(cfg: &VerifyConfig) -> Vec<VolParams> {
    let mut out = Vec::new();
    for n in 0..=cfg.n_max {
        for alpha in -3..=3i64 {
            for x in 0..=cfg.x_max.min(6) {
                out.push(VolParams::new(n, alpha, x));
            }
        }
    }
    out
}

fn prop_triple_agreement(cfg: &VerifyConfig, _: &mut ChaCha8Rng, c: &mut Checker) {
    for p in vol_grid(cfg) {
        let direct = vol_direct(&p);
        let r1 = vol_recur(&p);
        let r2 = vol_recur2(&p);
        c.case(direct == r1, || format!("direct != recur at {p:?}"));
        c.case(direct == r2, || format!("direct != recur2 at {p:?}"));
        c.case(r1 == r2, || format!("recur != recur2 at {p:?}"));
    }
}

fn prop_functional_equation(cfg: &VerifyConfig, _: &mut ChaCha8Rng, c: &mut Checker) {
    for p in vol_grid(cfg) {
        let lhs = vol_direct(&p);
        let rhs = &RationalFunctionQ::q_power(p.n as i64 * p.alpha * p.x as i64)
            * &vol_direct(&VolParams::new(p.n, -p.alpha, p.x));
        c.case(lhs == rhs, || format!("{p:?}"));
    }
}

fn prop_const_term(cfg: &VerifyConfig, _: &mut ChaCha8Rng, c: &mut Checker) {
    for n in 0..=cfg.n_max {
        for alpha in 1..=3i64 {
            let germ = germ_of_vol(n, alpha).unwrap();
            let ok = germ.coeff(0, 0) == const_term_a(n, alpha).unwrap();
            c.case(ok, || format!("n={n} alpha={alpha}"));
        }
    }
}

fn prop_linear_coeff(cfg: &VerifyConfig, _: &mut ChaCha8Rng, c: &mut Checker) {
    for n in 1..=cfg.n_max {
        let germ = germ_of_vol(n, 0).unwrap();
        let ok = germ.coeff(0, 1) == linear_coeff_b(n).unwrap();
        c.case(ok, || format!("n={n}"));
    }
}

fn prop_qbinom_identity(_: &VerifyConfig, _: &mut ChaCha8Rng, c: &mut Checker) {
    for n in 1..=5u32 {
        for alpha in 1..=6i64 {
            c.case(check_qbinom_identity(n, alpha).unwrap(), || {
                format!("n={n} alpha={alpha}")
            });
        }
    }
}

// ---------------------------------------------------------------------
// germs properties
// ---------------------------------------------------------------------

fn prop_fit_uniqueness(_: &VerifyConfig, _: &mut ChaCha8Rng, c: &mut Checker) {
    let cases: Vec<(u32, i64, (u32, u32), (u32, u32))> = vec![
        (1, 1, (1, 1), (3, 2)),
        (1, 0, (0, 1), (2, 2)),
        (2, 0, (2, 2), (4, 3)),
        (2, 1, (4, 2), (6, 3)),
    ];
    for (n, alpha, small, large) in cases {
        let fit_small = fit_germ(|x| vol_direct(&VolParams::new(n, alpha, x)), small, 1);
        let fit_large = fit_germ(|x| vol_direct(&VolParams::new(n, alpha, x)), large, 1);
        let ok = match (&fit_small, &fit_large) {
            (Ok(a), Ok(b)) => a.term_map() == b.term_map(),
            _ => false,
        };
        c.case(ok, || format!("n={n} alpha={alpha} {small:?} vs {large:?}"));
    }
}

fn prop_alpha_structure(cfg: &VerifyConfig, _: &mut ChaCha8Rng, c: &mut Checker) {
    for n in 1..=cfg.n_max {
        for alpha in 1..=3i64 {
            let germ = germ_of_vol(n, alpha).unwrap();
            let ok = germ
                .terms()
                .all(|(&(a, b), _)| a >= 1 || (a, b) == (0, 0));
            c.case(ok, || format!("n={n} alpha={alpha}"));
        }
    }
}

fn prop_round_trip(cfg: &VerifyConfig, _: &mut ChaCha8Rng, c: &mut Checker) {
    for n in 0..=cfg.n_max {
        for alpha in -3..=3i64 {
            let germ = germ_of_vol(n, alpha).unwrap();
            for x in 1..=cfg.x_max.max(1) {
                let ok = eval_germ(&germ, x).unwrap()
                    == vol_direct(&VolParams::new(n, alpha, x));
                c.case(ok, || format!("n={n} alpha={alpha} x={x}"));
            }
        }
    }
}

fn prop_fe_transport(cfg: &VerifyConfig, _: &mut ChaCha8Rng, c: &mut Checker) {
    for n in 1..=cfg.n_max.min(3) {
        for alpha in -2..=2i64 {
            let here = germ_of_vol(n, alpha).unwrap();
            let there = germ_of_vol(n, -alpha).unwrap();
            let ok = here.shift_exponent(-(n as i64) * alpha).term_map() == there.term_map();
            c.case(ok, || format!("n={n} alpha={alpha}"));
        }
    }
}

// ---------------------------------------------------------------------
// orbital properties
// ---------------------------------------------------------------------

/// All clamped vectors of the given rank and radius.
fn all_clamped(n: usize, radius: u64) -> Vec<ClampedVec> {
    let mut out = Vec::new();
    let values: Vec<Clamped> = (-(radius as i64)..0)
        .map(Clamped::Finite)
        .chain(std::iter::once(Clamped::Integral))
        .collect();
    let mut current = vec![Clamped::Integral; n];
    fn rec(
        values: &[Clamped],
        current: &mut Vec<Clamped>,
        idx: usize,
        start: usize,
        out: &mut Vec<ClampedVec>,
    ) {
        if idx == current.len() {
            out.push(ClampedVec::new(current.clone()));
            return;
        }
        // Nondecreasing choice index keeps vectors canonical and distinct.
        for v in start..values.len() {
            current[idx] = values[v];
            rec(values, current, idx + 1, v, out);
        }
    }
    rec(&values, &mut current, 0, 0, &mut out);
    out
}

fn random_profile(rng: &mut ChaCha8Rng, n: usize, radius: u64) -> OrbitalProfile {
    let vectors = all_clamped(n, radius);
    let mut entries = Vec::new();
    for first in &vectors {
        for second in &vectors {
            if rng.gen_range(0..3) == 0 {
                let num = rng.gen_range(-3i64..=3);
                let den = rng.gen_range(1i64..=2);
                entries.push((
                    first.clone(),
                    second.clone(),
                    BigRational::new(BigInt::from(num), BigInt::from(den)),
                ));
            }
        }
    }
    OrbitalProfile::new(n, radius, entries).expect("entries are in range")
}

fn profile_cases(cfg: &VerifyConfig) -> Vec<(usize, u64)> {
    let mut out = Vec::new();
    for n in 1..=cfg.n_max.min(3) as usize {
        for radius in 0..=2u64 {
            out.push((n, radius));
        }
    }
    out
}

fn prop_orbital_consistency(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    for (n, radius) in profile_cases(cfg) {
        for case in 0..cfg.seeds.min(10) {
            let profile = random_profile(rng, n, radius);
            let germ = orbital_germ(&profile).unwrap();
            let x0 = germ.validity_from();
            let mut ok = true;
            let mut bad_x = 0;
            for x in x0..=(x0 + 4) {
                if eval_germ(&germ, x).unwrap() != orbital_direct(&profile, x) {
                    ok = false;
                    bad_x = x;
                    break;
                }
            }
            c.case(ok, || format!("n={n} N={radius} case={case} x={bad_x}"));
        }
    }
}

fn prop_orbital_linear_term(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    for (n, radius) in profile_cases(cfg) {
        for case in 0..cfg.seeds.min(10) {
            let profile = random_profile(rng, n, radius);
            c.case(check_linear_term(&profile).unwrap(), || {
                format!("n={n} N={radius} case={case}")
            });
        }
    }
}

fn prop_orbital_linearity(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    for (n, radius) in profile_cases(cfg) {
        for case in 0..cfg.seeds.min(5) {
            let f = random_profile(rng, n, radius);
            let g = random_profile(rng, n, radius);
            let a = BigRational::from_integer(BigInt::from(rng.gen_range(-3i64..=3)));
            let b = BigRational::from_integer(BigInt::from(rng.gen_range(-3i64..=3)));
            let combo = f.linear_combination(&a, &g, &b).unwrap();
            let mut ok = true;
            for x in 0..=4u64 {
                let lhs = orbital_direct(&combo, x);
                let rhs = &orbital_direct(&f, x).mul_rational(&a)
                    + &orbital_direct(&g, x).mul_rational(&b);
                if lhs != rhs {
                    ok = false;
                    break;
                }
            }
            if ok {
                let lc = orbital_coeffs(&combo);
                let cf = orbital_coeffs(&f);
                let cg = orbital_coeffs(&g);
                for n1 in 0..=(n as u32) {
                    for n2 in 0..=(n as u32 - n1) {
                        let t = (n1, n2, n as u32 - n1 - n2);
                        let rhs = &cf.coeff(t).mul_rational(&a) + &cg.coeff(t).mul_rational(&b);
                        if lc.coeff(t) != rhs {
                            ok = false;
                        }
                    }
                }
            }
            c.case(ok, || format!("n={n} N={radius} case={case}"));
        }
    }
}

fn prop_orbital_nonvanishing(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    for (n, radius) in profile_cases(cfg) {
        for case in 0..cfg.seeds.min(5) {
            let mut profile = random_profile(rng, n, radius);
            if profile.value_at_zero().is_zero() {
                // Force a nonzero value at the origin.
                let bump = OrbitalProfile::lattice_indicator(n);
                profile = profile
                    .linear_combination(&BigRational::one(), &bump, &BigRational::one())
                    .unwrap();
            }
            if profile.value_at_zero().is_zero() {
                continue; // the combination cancelled; skip this case
            }
            let germ = orbital_germ(&profile).unwrap();
            let coeff_ok = !germ.coeff(0, 1).is_zero();
            let x0 = germ.validity_from();
            let some_nonzero =
                (x0..x0 + 6).any(|x| !orbital_direct(&profile, x).is_zero());
            c.case(coeff_ok && some_nonzero, || {
                format!("n={n} N={radius} case={case}")
            });
        }
    }
}

// ---------------------------------------------------------------------
// lfactors properties
// ---------------------------------------------------------------------

fn random_nonzero_rational(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let num = rng.gen_range(-5i64..=5);
        let den = rng.gen_range(1i64..=4);
        if num != 0 {
            return BigRational::new(BigInt::from(num), BigInt::from(den));
        }
    }
}

fn prop_tate(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    for case in 0..cfg.seeds {
        let count = rng.gen_range(1..=3);
        let factors: Vec<(u32, i8)> = (0..count)
            .map(|_| {
                (
                    rng.gen_range(1..=3u32),
                    if rng.gen_bool(0.5) { 1 } else { -1 },
                )
            })
            .collect();
        let torus = UnramifiedTorusData::new(factors.clone()).unwrap();
        let (direct, closed) = tate_series(&torus, 8);
        c.case(direct == closed, || format!("case {case}: {factors:?}"));
    }
}

fn prop_sign_twist(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    for case in 0..cfg.seeds {
        let params: Vec<BigRational> =
            (0..rng.gen_range(1..=3)).map(|_| random_nonzero_rational(rng)).collect();
        let s = SatakeData::new(params.clone(), BigRational::from_integer(BigInt::from(3)))
            .unwrap();
        let negated = SatakeData::new(
            params.iter().map(|a| -a.clone()).collect(),
            BigRational::from_integer(BigInt::from(3)),
        )
        .unwrap();
        let ok = std_lfactor(&negated, 1, 6) == std_lfactor(&s, -1, 6);
        c.case(ok, || format!("case {case}"));
    }
}

fn prop_extsq_shift(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    for case in 0..cfg.seeds {
        let m = rng.gen_range(2..=4);
        let params: Vec<BigRational> = (0..m).map(|_| random_nonzero_rational(rng)).collect();
        let q = BigRational::from_integer(BigInt::from([2i64, 3, 5][rng.gen_range(0..3)]));
        let s = SatakeData::new(params, q).unwrap();
        for a in -2..=2i64 {
            c.case(check_ext_sq_shift(&s, a, 6).unwrap(), || {
                format!("case {case} a={a}")
            });
        }
    }
}

fn prop_bf(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    let squares = [4i64, 9, 25, 49];
    for case in 0..cfg.seeds.min(10) {
        let q = squares[rng.gen_range(0..squares.len())];
        let params = vec![random_nonzero_rational(rng), random_nonzero_rational(rng)];
        let s = SatakeData::new(params, BigRational::from_integer(BigInt::from(q))).unwrap();
        let eta1 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let eta0 = if rng.gen_bool(0.5) { 1 } else { -1 };
        c.case(bf_unramified_check(&s, eta1, eta0, 5).unwrap(), || {
            format!("case {case} q={q}")
        });
    }
}

fn prop_pair_conventions(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    for case in 0..cfg.seeds {
        let m = rng.gen_range(2..=4);
        let params: Vec<BigRational> = (0..m).map(|_| random_nonzero_rational(rng)).collect();
        let s = SatakeData::new(params, BigRational::from_integer(BigInt::from(3))).unwrap();
        let ordered = ext_sq_lfactor(&s, 1, 6, PairConvention::Ordered).unwrap();
        let distinct = ext_sq_lfactor(&s, 1, 6, PairConvention::Distinct).unwrap();
        c.case(distinct == ordered.mul(&ordered), || format!("case {case}"));
    }
}

// ---------------------------------------------------------------------
// invariants properties
// ---------------------------------------------------------------------

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> MatQ {
    let data: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-3i64..=3)).collect();
    MatQ::from_i64(n, n, &data).unwrap()
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> MatQ {
    loop {
        let m = random_matrix(rng, n);
        if !m.det().unwrap().is_zero() {
            return m;
        }
    }
}

/// A strongly regular pair `(gamma, w)` at rank `n`, by rejection.
fn random_strongly_regular(rng: &mut ChaCha8Rng, n: usize, p: u64) -> (MatQ, MatQ) {
    loop {
        let gamma = random_invertible(rng, 2 * n);
        let w_data: Vec<i64> = (0..n).map(|_| rng.gen_range(-3i64..=3)).collect();
        let Ok(w) = MatQ::from_i64(1, n, &w_data) else {
            continue;
        };
        let Ok(x) = project_sym(&gamma, p) else {
            continue;
        };
        if is_strongly_regular(&x, &w).unwrap_or(false) {
            return (gamma, w);
        }
    }
}

fn random_signs(rng: &mut ChaCha8Rng) -> TransferSigns {
    let pick = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.5) {
            CharacterSign::Quadratic
        } else {
            CharacterSign::Trivial
        }
    };
    TransferSigns {
        eta0: pick(rng),
        eta1: pick(rng),
        eta2: pick(rng),
    }
}

fn prop_projection_action(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    for case in 0..cfg.seeds {
        let n = rng.gen_range(1..=2usize);
        let gamma = random_invertible(rng, 2 * n);
        let g = random_invertible(rng, n);
        let h = random_invertible(rng, n);
        let composed = MatQ::block_diag(&g, &h).mul(&gamma).unwrap();
        let lhs = project_sym(&composed, 3).unwrap();
        let rhs = project_sym(&gamma, 3).unwrap().act(&g, &h).unwrap();
        c.case(lhs == rhs, || format!("case {case} n={n}"));
    }
}

fn prop_car_lin_invariance(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    for case in 0..cfg.seeds {
        let n = rng.gen_range(1..=2usize);
        let gamma = random_invertible(rng, 2 * n);
        let x = project_sym(&gamma, 3).unwrap();
        let g = random_invertible(rng, n);
        let h = random_invertible(rng, n);
        let moved = x.act(&g, &h).unwrap();
        c.case(
            car_lin(&x).unwrap() == car_lin(&moved).unwrap(),
            || format!("case {case} n={n}"),
        );
    }
}

fn prop_omega_sign(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    for case in 0..cfg.seeds {
        let n = rng.gen_range(1..=2usize);
        let p = cfg.primes[rng.gen_range(0..cfg.primes.len())];
        let (gamma, w) = random_strongly_regular(rng, n, p);
        let signs = random_signs(rng);
        let omega = transfer_factor(&gamma, &w, &signs, p).unwrap();
        c.case(omega == 1 || omega == -1, || format!("case {case} n={n}"));
    }
}

fn prop_equivariance(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    for case in 0..cfg.seeds {
        let n = rng.gen_range(1..=2usize);
        let p = cfg.primes[rng.gen_range(0..cfg.primes.len())];
        let (gamma, w) = random_strongly_regular(rng, n, p);
        let signs = random_signs(rng);
        let h1 = BlockPair {
            first: random_invertible(rng, n),
            second: random_invertible(rng, n),
        };
        let h2 = BlockPair {
            first: random_invertible(rng, n),
            second: random_invertible(rng, n),
        };
        // The action can leave the strongly regular locus; those cases
        // surface as degenerate-input errors and are skipped.
        match check_equivariance(&gamma, &w, &h1, &h2, &signs, p) {
            Ok(ok) => c.case(ok, || format!("case {case} n={n} p={p}")),
            Err(Error::Degenerate(_)) => {}
            Err(e) => c.case(false, || format!("case {case}: unexpected error {e}")),
        }
    }
}

// ---------------------------------------------------------------------
// branching properties
// ---------------------------------------------------------------------

/// All dominant weights of the given length with entries in
/// `[-bound, bound]`.
fn dominant_weights(len: usize, bound: i64) -> Vec<DominantWeight> {
    let mut out = Vec::new();
    let mut current = vec![0i64; len];
    fn rec(current: &mut Vec<i64>, idx: usize, hi: i64, bound: i64, out: &mut Vec<DominantWeight>) {
        if idx == current.len() {
            out.push(DominantWeight::new(current.clone()).unwrap());
            return;
        }
        for e in (-bound..=hi).rev() {
            current[idx] = e;
            rec(current, idx + 1, e, bound, out);
        }
    }
    rec(&mut current, 0, bound, bound, &mut out);
    out
}

fn prop_mult_bounded(cfg: &VerifyConfig, _: &mut ChaCha8Rng, c: &mut Checker) {
    let max_len = (2 * cfg.n_max.min(3)) as usize;
    for len in (2..=max_len).step_by(2) {
        for w in dominant_weights(len, 3) {
            let mult = branching_multiplicity(&w).unwrap();
            c.case(mult <= 1, || format!("{w}"));
        }
    }
}

fn prop_self_associate(cfg: &VerifyConfig, _: &mut ChaCha8Rng, c: &mut Checker) {
    let max_len = (2 * cfg.n_max.min(3)) as usize;
    for len in (2..=max_len).step_by(2) {
        for w in dominant_weights(len, 3) {
            let mult = branching_multiplicity(&w).unwrap();
            let sa = self_associate(&w).unwrap();
            c.case((mult == 1) == sa, || format!("{w}"));
        }
    }
}

fn random_partition_nn(rng: &mut ChaCha8Rng, max_len: usize, max_part: u64) -> PartitionNN {
    let len = rng.gen_range(0..=max_len);
    let mut parts: Vec<u64> = (0..len).map(|_| rng.gen_range(0..=max_part)).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    PartitionNN::new(parts).unwrap()
}

fn prop_lr_symmetry(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    for case in 0..cfg.seeds {
        let mu = random_partition_nn(rng, 3, 3);
        let nu = random_partition_nn(rng, 3, 3);
        let lambda = random_partition_nn(rng, 4, 5);
        let ok = lr_coeff(&lambda, &mu, &nu).unwrap() == lr_coeff(&lambda, &nu, &mu).unwrap();
        c.case(ok, || {
            format!("case {case}: {lambda:?} / {mu:?}, {nu:?}")
        });
    }
}

fn prop_oracle_shift(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, c: &mut Checker) {
    for case in 0..cfg.seeds {
        let n = rng.gen_range(1..=2usize);
        let mut entries: Vec<i64> = (0..2 * n).map(|_| rng.gen_range(-2i64..=2)).collect();
        entries.sort_unstable_by(|a, b| b.cmp(a));
        let m0 = (-entries[2 * n - 1]).max(0);
        let mut counts = Vec::new();
        for m in [m0, m0 + 1] {
            let shifted =
                PartitionNN::new(entries.iter().map(|&e| (e + m) as u64).collect()).unwrap();
            let rect = PartitionNN::rectangle(m as u64, n);
            counts.push(lr_coeff(&shifted, &rect, &rect).unwrap());
        }
        c.case(counts[0] == counts[1], || {
            format!("case {case}: {entries:?}")
        });
    }
}

fn prop_nonneg_weights(_: &VerifyConfig, _: &mut ChaCha8Rng, c: &mut Checker) {
    for len in [2usize, 4] {
        for w in dominant_weights(len, 2) {
            if w.entries()[len - 1] < 0 {
                continue;
            }
            let mult = branching_multiplicity(&w).unwrap();
            let expected = u64::from(w.entries().iter().all(|&e| e == 0));
            c.case(mult == expected, || format!("{w}"));
        }
    }
}

fn random_laurent(rng: &mut ChaCha8Rng) -> LaurentPolyQ {
    let terms = rng.gen_range(0..5);
    let mut out = LaurentPolyQ::zero();
    for _ in 0..terms {
        let e = rng.gen_range(-5i64..=5);
        let c = rng.gen_range(-9i64..=9);
        out = &out + &LaurentPolyQ::monomial(e, BigRational::from_integer(BigInt::from(c)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guardrails_reject_bad_configs() {
        let mut cfg = VerifyConfig::default();
        cfg.n_max = 5;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let mut cfg = VerifyConfig::default();
        cfg.x_max = 11;
        assert!(cfg.validate().is_err());
        let mut cfg = VerifyConfig::default();
        cfg.primes = vec![11];
        assert!(cfg.validate().is_err());
        let mut cfg = VerifyConfig::default();
        cfg.suites = vec![];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn suite_parsing() {
        assert_eq!(Suite::parse("volumes").unwrap(), Suite::Volumes);
        assert!(matches!(Suite::parse("nosuch"), Err(Error::Config(_))));
    }

    #[test]
    fn small_volume_run_passes_and_is_deterministic() {
        let cfg = VerifyConfig {
            suites: vec![Suite::Volumes],
            n_max: 2,
            x_max: 4,
            seeds: 5,
            rng_seed: 7,
            primes: vec![2, 3],
        };
        let a = run_verify(&cfg).unwrap();
        assert!(a.success, "{:?}", a.suites["volumes"].counterexamples);
        assert_eq!(a.suites["volumes"].failed, 0);
        let b = run_verify(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn qring_and_lfactors_run() {
        let cfg = VerifyConfig {
            suites: vec![Suite::Qring, Suite::Lfactors],
            seeds: 5,
            ..VerifyConfig::default()
        };
        let report = run_verify(&cfg).unwrap();
        assert!(report.success);
        assert!(report.suites.contains_key("qring"));
        assert!(report.suites.contains_key("lfactors"));
        assert!(!report.suites.contains_key("volumes"));
    }
}
