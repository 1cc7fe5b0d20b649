//! Littlewood–Richardson coefficients by tableau enumeration and the
//! compact branching multiplicity for GL(2n) restricted to
//! GL(n) x GL(n)-invariants, with its self-associate criterion.
//!
//! Weights here use the standard weakly *decreasing* convention — the
//! opposite of [`crate::cartan`]. Nothing converts implicitly between the
//! two conventions.

use crate::{Error, Result};

/// A dominant weight: weakly decreasing integers, possibly negative.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DominantWeight {
    entries: Vec<i64>,
}

impl DominantWeight {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!(
                "{entries:?} is not weakly decreasing"
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
}

impl std::fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A partition: weakly decreasing nonnegative integers. Trailing zeros are
/// stripped so equality is equality of partitions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct PartitionNN {
    parts: Vec<u64>,
}

impl PartitionNN {
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!("{parts:?} is not weakly decreasing")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The rectangle `(value^length)`.
    pub fn rectangle(value: u64, length: usize) -> Self {
        if value == 0 {
            return Self::empty();
        }
        Self {
            parts: vec![value; length],
        }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn contains(&self, other: &Self) -> bool {
        other
            .parts
            .iter()
            .enumerate()
            .all(|(i, &m)| self.parts.get(i).is_some_and(|&l| l >= m))
    }

    fn part(&self, row: usize) -> u64 {
        self.parts.get(row).copied().unwrap_or(0)
    }
}

/// Desk-scale bound on the outer shape for tableau enumeration.
const LR_MAX_SIZE: u64 = 40;

/// The Littlewood–Richardson coefficient `c^{lambda}_{mu nu}`: the number
/// of semistandard skew tableaux of shape `lambda/mu` and content `nu`
/// whose reverse reading word is a lattice word. Zero when the sizes do
/// not add up or `mu` is not contained in `lambda`.
pub fn lr_coeff(lambda: &PartitionNN, mu: &PartitionNN, nu: &PartitionNN) -> Result<u64> {
    if lambda.size() > LR_MAX_SIZE {
        return Err(Error::Domain(format!(
            "|lambda| = {} exceeds the enumeration bound {LR_MAX_SIZE}",
            lambda.size()
        )));
    }
    if lambda.size() != mu.size() + nu.size() || !lambda.contains(mu) {
        return Ok(0);
    }
    if nu.size() == 0 {
        // Empty skew shape filled by the empty tableau.
        return Ok(u64::from(lambda == mu));
    }
    // Cells of the skew shape in reverse reading order: rows top to
    // bottom, within each row right to left. Reading the filling in this
    // order must stay a lattice word.
    let rows = lambda.parts().len();
    let mut cells = Vec::new();
    for r in 0..rows {
        let lo = mu.part(r);
        let hi = lambda.part(r);
        for c in (lo..hi).rev() {
            cells.push((r, c as usize));
        }
    }
    let max_entry = nu.parts().len();
    let mut filling = vec![vec![0usize; 0]; rows];
    for r in 0..rows {
        filling[r] = vec![0; lambda.part(r) as usize];
    }
    let mut remaining: Vec<u64> = nu.parts().to_vec();
    let mut counts = vec![0u64; max_entry + 1];
    let mut total = 0u64;
    fill(
        &cells,
        0,
        &mut filling,
        mu,
        &mut remaining,
        &mut counts,
        max_entry,
        &mut total,
    );
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn fill(
    cells: &[(usize, usize)],
    idx: usize,
    filling: &mut Vec<Vec<usize>>,
    mu: &PartitionNN,
    remaining: &mut Vec<u64>,
    counts: &mut Vec<u64>,
    max_entry: usize,
    total: &mut u64,
) {
    if idx == cells.len() {
        *total += 1;
        return;
    }
    let (r, c) = cells[idx];
    for entry in 1..=max_entry {
        if remaining[entry - 1] == 0 {
            continue;
        }
        // Lattice word: after placing, #entry <= #(entry-1).
        if entry > 1 && counts[entry] + 1 > counts[entry - 1] {
            continue;
        }
        // Row weakly increasing left to right: the cell to the right (if
        // inside the skew shape) was already placed and must be >= entry.
        if c + 1 < filling[r].len() {
            let right = filling[r][c + 1];
            if right != 0 && right < entry {
                continue;
            }
        }
        // Column strictly increasing downward: compare with the cell above.
        if r > 0 && (c as u64) >= mu.part(r - 1) {
            let above = filling[r - 1].get(c).copied().unwrap_or(0);
            // The cell above is inside the skew shape and already placed
            // (reading order visits rows top-down).
            if above != 0 && above >= entry {
                continue;
            }
            if above == 0 {
                // Above cell is inside lambda/mu but unfilled: cannot
                // happen in reverse reading order; defensive skip.
                continue;
            }
        }
        filling[r][c] = entry;
        remaining[entry - 1] -= 1;
        counts[entry] += 1;
        fill(cells, idx + 1, filling, mu, remaining, counts, max_entry, total);
        filling[r][c] = 0;
        remaining[entry - 1] += 1;
        counts[entry] -= 1;
    }
}

/// Whether `l_i + l_{2n+1-i} = 0` for all `i`; requires even length.
pub fn self_associate(lambda: &DominantWeight) -> Result<bool> {
    let m = lambda.len();
    if m % 2 != 0 {
        return Err(Error::Domain(format!(
            "self-association needs even length, got {m}"
        )));
    }
    let e = lambda.entries();
    Ok((0..m / 2).all(|i| e[i] + e[m - 1 - i] == 0))
}

/// Desk-scale bounds for the branching computation.
const BRANCH_MAX_LEN: usize = 8;
const BRANCH_MAX_ENTRY: i64 = 4;

/// The multiplicity of the trivial GL(n) x GL(n)-representation in the
/// irreducible GL(2n)-representation of highest weight `lambda`, computed
/// two independent ways and returned only when they agree:
///
/// 1. the collapsed delta formula — the branching sum telescopes to `1`
///    exactly when the positive part and the reflected negative part of
///    `lambda` coincide as partitions;
/// 2. a determinant-twist oracle — with `m = max(0, -lambda_{2n})`, the
///    multiplicity equals `c^{lambda + m(1,...,1)}_{(m^n), (m^n)}`.
///
/// The value is always 0 or 1 (local multiplicity one).
pub fn branching_multiplicity(lambda: &DominantWeight) -> Result<u64> {
    let m = lambda.len();
    if m == 0 || m % 2 != 0 || m > BRANCH_MAX_LEN {
        return Err(Error::Domain(format!(
            "branching needs even length in 2..={BRANCH_MAX_LEN}, got {m}"
        )));
    }
    if lambda.entries().iter().any(|&e| e.abs() > BRANCH_MAX_ENTRY) {
        return Err(Error::Domain(format!(
            "entries exceed the desk bound {BRANCH_MAX_ENTRY}"
        )));
    }
    let n = m / 2;

    // Route 1: the delta formula. The branching sum over gamma collapses
    // through c^{lambda}_{0 gamma} = [lambda = gamma].
    let positive: Vec<u64> = lambda
        .entries()
        .iter()
        .filter(|&&e| e > 0)
        .map(|&e| e as u64)
        .collect();
    let negative: Vec<u64> = lambda
        .entries()
        .iter()
        .rev()
        .filter(|&&e| e < 0)
        .map(|&e| (-e) as u64)
        .collect();
    let plus = PartitionNN::new(positive)?;
    let minus = PartitionNN::new(negative)?;
    let delta = u64::from(plus == minus);

    // Route 2: twist by the m-th power of the determinant to land in
    // polynomial representations, then one LR coefficient.
    let shift = (-lambda.entries()[m - 1]).max(0);
    let shifted = PartitionNN::new(
        lambda
            .entries()
            .iter()
            .map(|&e| (e + shift) as u64)
            .collect(),
    )?;
    let rect = PartitionNN::rectangle(shift as u64, n);
    let oracle = lr_coeff(&shifted, &rect, &rect)?;

    if delta != oracle {
        return Err(Error::Internal(format!(
            "delta formula ({delta}) and LR oracle ({oracle}) disagree at {lambda}"
        )));
    }
    Ok(delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(parts: &[u64]) -> PartitionNN {
        PartitionNN::new(parts.to_vec()).unwrap()
    }

    fn wt(entries: &[i64]) -> DominantWeight {
        DominantWeight::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn lr_examples() {
        // Size mismatch.
        assert_eq!(lr_coeff(&pt(&[1]), &pt(&[1]), &pt(&[1])).unwrap(), 0);
        // Single valid skew tableau.
        assert_eq!(lr_coeff(&pt(&[2, 1]), &pt(&[1]), &pt(&[1, 1])).unwrap(), 1);
        // s_2 * s_2 contains s_22 once.
        assert_eq!(lr_coeff(&pt(&[2, 2]), &pt(&[2]), &pt(&[2])).unwrap(), 1);
        // Pieri check: s_21 * s_1 = s_31 + s_22 + s_211.
        assert_eq!(lr_coeff(&pt(&[3, 1]), &pt(&[2, 1]), &pt(&[1])).unwrap(), 1);
        // A genuine multiplicity-2 case: c^{(3,2,1)}_{(2,1),(2,1)} = 2.
        assert_eq!(lr_coeff(&pt(&[3, 2, 1]), &pt(&[2, 1]), &pt(&[2, 1])).unwrap(), 2);
        // mu not contained in lambda.
        assert_eq!(lr_coeff(&pt(&[2]), &pt(&[1, 1]), &pt(&[1])).unwrap(), 0);
    }

    #[test]
    fn lr_symmetry_in_mu_nu() {
        let triples = [
            (pt(&[3, 2, 1]), pt(&[2, 1]), pt(&[2, 1])),
            (pt(&[4, 2]), pt(&[2, 1]), pt(&[2, 1])),
            (pt(&[3, 3, 2]), pt(&[2, 2]), pt(&[3, 1])),
            (pt(&[4, 3, 2, 1]), pt(&[3, 1]), pt(&[3, 2, 1])),
        ];
        for (l, m, n) in triples {
            assert_eq!(
                lr_coeff(&l, &m, &n).unwrap(),
                lr_coeff(&l, &n, &m).unwrap(),
                "lambda {l:?}"
            );
        }
    }

    #[test]
    fn lr_respects_desk_bound() {
        let big = PartitionNN::rectangle(6, 7);
        assert!(lr_coeff(&big, &pt(&[1]), &pt(&[1])).is_err());
    }

    #[test]
    fn self_associate_examples() {
        assert!(self_associate(&wt(&[1, 0, 0, -1])).unwrap());
        assert!(!self_associate(&wt(&[1, 0, 0, 0])).unwrap());
        assert!(self_associate(&wt(&[0, 0])).unwrap());
        assert!(self_associate(&wt(&[2, 2, -2, -2])).unwrap());
        assert!(self_associate(&wt(&[])).unwrap());
        assert!(self_associate(&wt(&[1, 0, -1])).is_err());
    }

    #[test]
    fn branching_examples() {
        assert_eq!(branching_multiplicity(&wt(&[1, 0, 0, -1])).unwrap(), 1);
        assert_eq!(branching_multiplicity(&wt(&[1, 0, 0, 0])).unwrap(), 0);
        assert_eq!(branching_multiplicity(&wt(&[0, 0])).unwrap(), 1);
        assert_eq!(branching_multiplicity(&wt(&[2, 1, -1, -2])).unwrap(), 1);
        assert_eq!(branching_multiplicity(&wt(&[2, 1, -1, -1])).unwrap(), 0);
    }

    #[test]
    fn branching_rejects_out_of_scale() {
        assert!(branching_multiplicity(&wt(&[1, -1, -2])).is_err()); // odd
        assert!(branching_multiplicity(&wt(&[5, 0, 0, -5])).is_err()); // entry
        let long = wt(&[1, 0, 0, 0, 0, 0, 0, 0, 0, -1]);
        assert!(branching_multiplicity(&long).is_err()); // length 10
    }

    #[test]
    fn branching_matches_self_association_small_sweep() {
        // 2n = 4, entries in [-2, 2]: exhaustive.
        let mut stack = vec![Vec::<i64>::new()];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == 4 {
                let w = DominantWeight::new(prefix).unwrap();
                let mult = branching_multiplicity(&w).unwrap();
                assert!(mult <= 1, "{w}");
                assert_eq!(mult == 1, self_associate(&w).unwrap(), "{w}");
                continue;
            }
            let hi = prefix.last().copied().unwrap_or(2);
            for e in -2..=hi {
                let mut next = prefix.clone();
                next.push(e);
                stack.push(next);
            }
        }
    }

    #[test]
    fn oracle_shift_is_consistent() {
        // Using m or m + 1 in the determinant twist gives the same count.
        for entries in [
            vec![1i64, 0, 0, -1],
            vec![2, 1, -1, -2],
            vec![1, 1, 0, 0],
            vec![2, 0, -1, -1],
        ] {
            let w = wt(&entries);
            let n = entries.len() / 2;
            let m0 = (-entries[entries.len() - 1]).max(0);
            let mut counts = Vec::new();
            for m in [m0, m0 + 1] {
                let shifted = PartitionNN::new(
                    entries.iter().map(|&e| (e + m) as u64).collect(),
                )
                .unwrap();
                let rect = PartitionNN::rectangle(m as u64, n);
                counts.push(lr_coeff(&shifted, &rect, &rect).unwrap());
            }
            assert_eq!(counts[0], counts[1], "{w}");
        }
    }

    #[test]
    fn nonnegative_weights_need_zero() {
        // For lambda with last entry >= 0, multiplicity is 1 iff lambda = 0.
        for entries in [vec![0i64, 0, 0, 0], vec![1, 0, 0, 0], vec![2, 2, 1, 0]] {
            let w = wt(&entries);
            let expected = u64::from(entries.iter().all(|&e| e == 0));
            assert_eq!(branching_multiplicity(&w).unwrap(), expected, "{w}");
        }
    }
}
