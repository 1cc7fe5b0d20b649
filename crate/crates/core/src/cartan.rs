//! Partitions in the weakly increasing convention, segment types, the
//! modular character, Cartan cell volumes `vol(K pi^lambda K)`, and a
//! brute-force coset-counting oracle.
//!
//! Throughout this module a tuple `lambda = (l_1, ..., l_n)` is weakly
//! *increasing*, `l_1 <= ... <= l_n`. This is the opposite of the usual
//! dominance convention; the [`crate::branching`] module uses the
//! decreasing one, and nothing converts implicitly between the two.
//!
//! Volumes are normalized so that `vol(K) = 1`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::qring::{mu_gl, RationalFunctionQ};
use crate::{Error, Result};

/// A weakly increasing tuple of integers, possibly negative.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SignedPartition {
    entries: Vec<i64>,
}

impl SignedPartition {
    /// Validates the weakly increasing invariant.
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Domain(format!(
                "{entries:?} is not weakly increasing"
            )));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of the entries.
    pub fn weight(&self) -> i64 {
        self.entries.iter().sum()
    }

    /// Adds the same constant to every entry.
    pub fn central_shift(&self, c: i64) -> Self {
        Self {
            entries: self.entries.iter().map(|e| e + c).collect(),
        }
    }

    /// Shifts so the minimum entry becomes zero; identity on the empty
    /// tuple.
    pub fn shifted_to_zero(&self) -> Self {
        match self.entries.first() {
            Some(&min) => self.central_shift(-min),
            None => self.clone(),
        }
    }
}

impl std::fmt::Display for SignedPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The ordered lengths of the maximal segments of equal values in a
/// partition; the lengths are positive and sum to `n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SegmentType {
    lengths: Vec<u32>,
}

impl SegmentType {
    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }
}

/// Run-lengths of equal consecutive values. The empty partition has no
/// type.
pub fn type_of(lambda: &SignedPartition) -> Result<SegmentType> {
    if lambda.is_empty() {
        return Err(Error::Domain("the empty partition has no type".into()));
    }
    let mut lengths = Vec::new();
    let mut run = 1u32;
    for w in lambda.entries().windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            lengths.push(run);
            run = 1;
        }
    }
    lengths.push(run);
    Ok(SegmentType { lengths })
}

/// The inverse modular character `delta(pi^lambda)^{-1} =
/// q^{sum_{i<j} (l_j - l_i)}`, a nonnegative power of `q` for weakly
/// increasing `lambda`.
pub fn delta_inv(lambda: &SignedPartition) -> RationalFunctionQ {
    let n = lambda.len() as i64;
    let mut exp = 0i64;
    for (i, &l) in lambda.entries().iter().enumerate() {
        // l contributes with sign +1 against each earlier index and -1
        // against each later one.
        exp += l * (2 * i as i64 - n + 1);
    }
    RationalFunctionQ::q_power(exp)
}

/// The volume of the Cartan cell `K pi^lambda K`:
/// `mu(M_lambda)/mu(GL_n) * delta(pi^lambda)^{-1}`, where `M_lambda` is the
/// block centralizer determined by the segment type of `lambda`.
///
/// Always a polynomial in `q` with nonnegative integer coefficients, and
/// invariant under adding a constant to every entry. The empty tuple yields
/// `1` by the empty-product convention.
pub fn cell_volume(lambda: &SignedPartition) -> RationalFunctionQ {
    if lambda.is_empty() {
        return RationalFunctionQ::one();
    }
    let ty = type_of(lambda).expect("nonempty");
    let mut mu_ratio = RationalFunctionQ::one();
    for &part in ty.lengths() {
        mu_ratio = &mu_ratio * &mu_gl(part);
    }
    mu_ratio = &mu_ratio / &mu_gl(lambda.len() as u32);
    &mu_ratio * &delta_inv(lambda)
}

/// Desk-scale bounds for [`count_cosets_oracle`].
const ORACLE_MAX_RANK: usize = 3;
const ORACLE_MAX_ENTRY: i64 = 3;

/// Counts the right cosets `gK` inside `K pi^lambda K` by enumerating the
/// sublattices of the standard rank-`n` lattice over the p-adic integers
/// whose elementary-divisor type is `lambda`. Enumeration runs over Hermite
/// normal forms and classifies each by the valuations of its minor gcds
/// (Smith normal form). The result equals `cell_volume(lambda)` evaluated
/// at `q = p`.
///
/// Desk-scale preconditions: `1 <= n <= 3`, the minimum entry already
/// shifted to zero, and the maximum entry at most 3.
pub fn count_cosets_oracle(lambda: &SignedPartition, p: u64) -> Result<u64> {
    let n = lambda.len();
    if n == 0 || n > ORACLE_MAX_RANK {
        return Err(Error::Domain(format!(
            "oracle rank {n} outside 1..={ORACLE_MAX_RANK}"
        )));
    }
    if lambda.entries()[0] != 0 {
        return Err(Error::Domain(
            "oracle expects the minimum entry shifted to zero".into(),
        ));
    }
    let max = *lambda.entries().last().expect("nonempty");
    if max > ORACLE_MAX_ENTRY {
        return Err(Error::Domain(format!(
            "oracle entry bound exceeded: {max} > {ORACLE_MAX_ENTRY}"
        )));
    }
    if p < 2 {
        return Err(Error::Domain("p must be a prime >= 2".into()));
    }

    let total: i64 = lambda.weight();
    let mut count = 0u64;
    // The largest elementary divisor bounds every Hermite diagonal entry,
    // so the diagonal exponents range over compositions of |lambda| with
    // parts at most lambda_n.
    let mut diag = vec![0i64; n];
    enumerate_diagonals(&mut diag, 0, total, max, &mut |d| {
        count += count_hnf_with_type(d, lambda.entries(), p);
    });
    Ok(count)
}

fn enumerate_diagonals(
    diag: &mut Vec<i64>,
    idx: usize,
    remaining: i64,
    max: i64,
    f: &mut impl FnMut(&[i64]),
) {
    if idx == diag.len() {
        if remaining == 0 {
            f(diag);
        }
        return;
    }
    for d in 0..=max.min(remaining) {
        diag[idx] = d;
        enumerate_diagonals(diag, idx + 1, remaining - d, max, f);
    }
}

/// Counts upper-triangular Hermite forms with diagonal `p^{d_i}` and
/// off-diagonal entries `0 <= h_ij < p^{d_j}` (i < j) whose Smith type is
/// `lambda`.
fn count_hnf_with_type(diag: &[i64], lambda: &[i64], p: u64) -> u64 {
    let n = diag.len();
    let pd: Vec<i64> = diag.iter().map(|&d| (p as i64).pow(d as u32)).collect();
    let mut h = vec![0i64; n * n];
    for i in 0..n {
        h[i * n + i] = pd[i];
    }
    let mut off_cells = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            off_cells.push((i, j));
        }
    }
    let mut count = 0u64;
    fill_cells(&mut h, n, &pd, &off_cells, 0, p, lambda, &mut count);
    count
}

#[allow(clippy::too_many_arguments)]
fn fill_cells(
    h: &mut Vec<i64>,
    n: usize,
    pd: &[i64],
    cells: &[(usize, usize)],
    idx: usize,
    p: u64,
    lambda: &[i64],
    count: &mut u64,
) {
    if idx == cells.len() {
        if smith_type(h, n, p) == lambda {
            *count += 1;
        }
        return;
    }
    let (i, j) = cells[idx];
    for v in 0..pd[j] {
        h[i * n + j] = v;
        fill_cells(h, n, pd, cells, idx + 1, p, lambda, count);
    }
}

/// p-adic Smith type of an integer matrix: the increasing valuations of the
/// successive minor-gcd quotients.
fn smith_type(h: &[i64], n: usize, p: u64) -> Vec<i64> {
    let mut prev_val = 0i64;
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let g = gcd_of_minors(h, n, k);
        let v = val_p(g, p);
        out.push(v - prev_val);
        prev_val = v;
    }
    out
}

fn gcd_of_minors(h: &[i64], n: usize, k: usize) -> i64 {
    let mut rows: Vec<usize> = (0..k).collect();
    let mut g = 0i64;
    loop {
        let mut cols: Vec<usize> = (0..k).collect();
        loop {
            let m = minor(h, n, &rows, &cols);
            g = gcd_i64(g, m);
            if !next_subset(&mut cols, n, k) {
                break;
            }
        }
        if !next_subset(&mut rows, n, k) {
            break;
        }
    }
    g
}

fn minor(h: &[i64], n: usize, rows: &[usize], cols: &[usize]) -> i64 {
    match rows.len() {
        1 => h[rows[0] * n + cols[0]],
        2 => {
            h[rows[0] * n + cols[0]] * h[rows[1] * n + cols[1]]
                - h[rows[0] * n + cols[1]] * h[rows[1] * n + cols[0]]
        }
        3 => {
            let a = |r: usize, c: usize| h[rows[r] * n + cols[c]];
            a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
                - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
        }
        _ => unreachable!("oracle rank is at most 3"),
    }
}

fn next_subset(s: &mut [usize], n: usize, k: usize) -> bool {
    let mut i = k;
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        if s[i] < n - (k - i) {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn val_p(mut v: i64, p: u64) -> i64 {
    assert!(v != 0, "zero minor gcd: matrix not full rank");
    let p = p as i64;
    let mut out = 0;
    while v % p == 0 {
        v /= p;
        out += 1;
    }
    out
}

/// Memoizing wrapper around [`cell_volume`], keyed on the shift-normalized
/// tuple. Local to one computation; callers that sweep many `lambda`
/// create one per task.
#[derive(Default)]
pub struct CellVolumeCache {
    map: HashMap<Vec<i64>, RationalFunctionQ>,
}

impl CellVolumeCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, lambda: &SignedPartition) -> RationalFunctionQ {
        let key = lambda.shifted_to_zero();
        self.map
            .entry(key.entries().to_vec())
            .or_insert_with(|| cell_volume(&key))
            .clone()
    }
}

/// Evaluates `cell_volume` at `q = p` as an exact rational; the cell volume
/// is a polynomial, so the result is a nonnegative integer.
pub fn cell_volume_at(lambda: &SignedPartition, p: u64) -> BigRational {
    cell_volume(lambda)
        .eval(&BigRational::from_integer(BigInt::from(p)))
        .expect("cell volume is a polynomial")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qring::is_nonneg_integer_poly;

    fn sp(v: &[i64]) -> SignedPartition {
        SignedPartition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn partition_validation() {
        assert!(SignedPartition::new(vec![1, 0]).is_err());
        assert!(SignedPartition::new(vec![-1, -1, 0, 2]).is_ok());
    }

    #[test]
    fn type_of_examples() {
        assert_eq!(type_of(&sp(&[0, 0, 0])).unwrap().lengths(), &[3]);
        assert_eq!(type_of(&sp(&[0, 1])).unwrap().lengths(), &[1, 1]);
        assert_eq!(
            type_of(&sp(&[-1, -1, 0, 2, 2])).unwrap().lengths(),
            &[2, 1, 2]
        );
        assert!(type_of(&sp(&[])).is_err());
    }

    #[test]
    fn delta_inv_examples() {
        assert!(delta_inv(&sp(&[0, 0, 0])).is_one());
        assert_eq!(delta_inv(&sp(&[0, 1])), RationalFunctionQ::q_power(1));
        // (0-(-1)) + (2-(-1)) + (2-0) = 6
        assert_eq!(delta_inv(&sp(&[-1, 0, 2])), RationalFunctionQ::q_power(6));
    }

    #[test]
    fn cell_volume_examples() {
        assert!(cell_volume(&sp(&[0, 0])).is_one());
        let q = RationalFunctionQ::q_power(1);
        let one = RationalFunctionQ::one();
        assert_eq!(cell_volume(&sp(&[0, 1])), &q + &one);
        assert_eq!(cell_volume(&sp(&[0, 2])), &(&q * &q) + &q);
    }

    #[test]
    fn cell_volume_shift_invariance_and_polynomiality() {
        for entries in [vec![0, 1], vec![-1, 0, 2], vec![0, 0, 3], vec![1, 2, 2]] {
            let l = sp(&entries);
            let v = cell_volume(&l);
            assert!(is_nonneg_integer_poly(&v), "{l}");
            for c in [-2i64, 1, 5] {
                assert_eq!(cell_volume(&l.central_shift(c)), v, "{l} shift {c}");
            }
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(count_cosets_oracle(&sp(&[0, 0]), 3).unwrap(), 1);
        assert_eq!(count_cosets_oracle(&sp(&[0, 1]), 3).unwrap(), 4); // p + 1
        assert_eq!(count_cosets_oracle(&sp(&[0, 2]), 2).unwrap(), 6); // p^2 + p
    }

    #[test]
    fn oracle_rejects_out_of_scale() {
        assert!(count_cosets_oracle(&sp(&[]), 3).is_err());
        assert!(count_cosets_oracle(&sp(&[1, 2]), 3).is_err()); // min not zero
        assert!(count_cosets_oracle(&sp(&[0, 4]), 3).is_err()); // entry too big
        assert!(count_cosets_oracle(&sp(&[0, 0, 0, 0]), 3).is_err()); // rank 4
    }

    #[test]
    fn oracle_matches_cell_volume_at_small_primes() {
        // The full desk grid runs in the acceptance suite; spot-check a few
        // shapes here.
        for (entries, p) in [
            (vec![0i64], 5u64),
            (vec![0, 0], 2),
            (vec![0, 1], 5),
            (vec![0, 2], 3),
            (vec![0, 1, 2], 2),
            (vec![0, 0, 2], 3),
        ] {
            let l = sp(&entries);
            let oracle = count_cosets_oracle(&l, p).unwrap();
            assert_eq!(
                cell_volume_at(&l, p),
                BigRational::from_integer(BigInt::from(oracle)),
                "lambda {l} p {p}"
            );
        }
    }

    #[test]
    fn flat_truncation_decomposition() {
        // For lambda of type (beta, rest), the cell volume factors through
        // the truncation lambda-flat:
        // cell(lambda) = mu(GL_b) mu(GL_{n-b}) / mu(GL_n)
        //   * q^{-b(n-b) l_1} * q^{b |flat|} * cell(flat).
        for entries in [vec![0i64, 1], vec![0, 1, 1], vec![-1, 2, 3], vec![0, 0, 2]] {
            let l = sp(&entries);
            let ty = type_of(&l).unwrap();
            let beta = ty.lengths()[0];
            if (beta as usize) == l.len() {
                continue;
            }
            let n = l.len() as u32;
            let flat = sp(&l.entries()[beta as usize..]);
            let l1 = l.entries()[0];
            let mu_factor = &(&mu_gl(beta) * &mu_gl(n - beta)) / &mu_gl(n);
            let exp = -(beta as i64) * ((n - beta) as i64) * l1 + (beta as i64) * flat.weight();
            let rhs = &(&mu_factor * &RationalFunctionQ::q_power(exp)) * &cell_volume(&flat);
            assert_eq!(cell_volume(&l), rhs, "lambda {l}");
        }
    }
}
