//! Permutations, multisets, subsets and contingency tables.
//!
//! All enumerations are deterministic (lexicographic) so that serialized
//! outputs are stable across runs.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest permutation order we are willing to enumerate by default.
pub const DEFAULT_PERM_BOUND: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinatError {
    #[error("permutation sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("not a permutation of 1..{n}: {images:?}")]
    NotBijective { n: usize, images: Vec<usize> },
    #[error("enumeration bound exceeded: {requested} > {bound}")]
    BoundExceeded { requested: usize, bound: usize },
    #[error("margin totals differ: rows sum to {rows}, columns sum to {cols}")]
    MarginMismatch { rows: usize, cols: usize },
    #[error("cannot choose {k} elements out of {n}")]
    SubsetTooLarge { n: usize, k: usize },
    #[error("alphabet must be nonempty")]
    EmptyAlphabet,
}

/// A permutation of `{1..n}` in one-line notation: `images[j] = sigma(j+1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, CombinatError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i == 0 || i > n || seen[i - 1] {
                return Err(CombinatError::NotBijective { n, images });
            }
            seen[i - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n).collect() }
    }

    /// Transposition of the (1-based) positions `i` and `j` in `S_n`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (1..=n).collect();
        images.swap(i - 1, j - 1);
        Permutation { images }
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `sigma(j)` for a 1-based position `j`.
    pub fn apply(&self, j: usize) -> usize {
        self.images[j - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &i)| i == k + 1)
    }

    /// `(self o other)(j) = self(other(j))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, CombinatError> {
        if self.size() != other.size() {
            return Err(CombinatError::SizeMismatch(self.size(), other.size()));
        }
        let images = other.images.iter().map(|&j| self.apply(j)).collect();
        Ok(Permutation { images })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.size()];
        for (k, &i) in self.images.iter().enumerate() {
            images[i - 1] = k + 1;
        }
        Permutation { images }
    }

    /// Acts as `self` on the first block and as `other` (shifted) on the second.
    pub fn block_sum(&self, other: &Permutation) -> Permutation {
        let n = self.size();
        let images = self
            .images
            .iter()
            .copied()
            .chain(other.images.iter().map(|&i| i + n))
            .collect();
        Permutation { images }
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = CombinatError;
    fn try_from(images: Vec<usize>) -> Result<Self, Self::Error> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, i) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "]")
    }
}

/// `perm_compose(sigma, tau) = sigma o tau`.
pub fn perm_compose(sigma: &Permutation, tau: &Permutation) -> Result<Permutation, CombinatError> {
    sigma.compose(tau)
}

pub fn perm_block_sum(sigma: &Permutation, tau: &Permutation) -> Permutation {
    sigma.block_sum(tau)
}

/// All of `S_n` in lexicographic order of one-line notation.
pub fn enumerate_perms(n: usize) -> Result<Vec<Permutation>, CombinatError> {
    enumerate_perms_bounded(n, DEFAULT_PERM_BOUND)
}

pub fn enumerate_perms_bounded(n: usize, bound: usize) -> Result<Vec<Permutation>, CombinatError> {
    if n > bound {
        return Err(CombinatError::BoundExceeded { requested: n, bound });
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fill_perms(n, &mut current, &mut used, &mut out);
    Ok(out)
}

fn fill_perms(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
    if current.len() == n {
        out.push(Permutation { images: current.clone() });
        return;
    }
    for i in 0..n {
        if !used[i] {
            used[i] = true;
            current.push(i + 1);
            fill_perms(n, current, used, out);
            current.pop();
            used[i] = false;
        }
    }
}

/// A multiset over the alphabet `{1..d}`, stored as its counts vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multiset {
    counts: Vec<usize>,
}

impl Multiset {
    pub fn from_counts(counts: Vec<usize>) -> Self {
        Multiset { counts }
    }

    /// The bag of letters of a word over `{0..d-1}` (0-based letters).
    pub fn from_word(d: usize, word: &[usize]) -> Self {
        let mut counts = vec![0; d];
        for &l in word {
            counts[l] += 1;
        }
        Multiset { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn alphabet_size(&self) -> usize {
        self.counts.len()
    }

    pub fn cardinality(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `M1 ⊎ M2`: multiplicities add.
    pub fn union(&self, other: &Multiset) -> Multiset {
        Multiset {
            counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect(),
        }
    }

    /// The sorted word listing the elements (0-based letters).
    pub fn sorted_word(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(l, &c)| std::iter::repeat_n(l, c))
            .collect()
    }

    /// Product of the factorials of the multiplicities (size of the stabilizer).
    pub fn multiplicity_factorials(&self) -> u64 {
        self.counts
            .iter()
            .map(|&c| (1..=c as u64).product::<u64>())
            .product()
    }
}

/// All multisets of cardinality `n` over `{1..d}`, ordered lexicographically
/// by sorted word (equivalently, by counts vector in decreasing order).
pub fn enumerate_multisets(d: usize, n: usize) -> Result<Vec<Multiset>, CombinatError> {
    if d == 0 {
        return Err(CombinatError::EmptyAlphabet);
    }
    let mut out = Vec::new();
    let mut counts = vec![0; d];
    fill_multisets(0, n, &mut counts, &mut out);
    Ok(out)
}

fn fill_multisets(pos: usize, remaining: usize, counts: &mut [usize], out: &mut Vec<Multiset>) {
    if pos + 1 == counts.len() {
        counts[pos] = remaining;
        out.push(Multiset { counts: counts.to_vec() });
        return;
    }
    for c in (0..=remaining).rev() {
        counts[pos] = c;
        fill_multisets(pos + 1, remaining - c, counts, out);
    }
}

/// All `k`-element subsets of `{1..n}` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Result<Vec<Vec<usize>>, CombinatError> {
    if k > n {
        return Err(CombinatError::SubsetTooLarge { n, k });
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fill_subsets(1, n, k, &mut current, &mut out);
    Ok(out)
}

fn fill_subsets(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    let need = k - current.len();
    for i in start..=n + 1 - need {
        current.push(i);
        fill_subsets(i + 1, n, k, current, out);
        current.pop();
    }
}

/// A natural-number matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<usize>,
}

impl NatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<usize>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        NatMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<usize> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        (0..self.cols).map(|j| self.column(j).iter().sum()).collect()
    }

    /// Rows as nested vectors (the serialized form).
    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Every N-matrix with the given row and column sums, lexicographic on the
/// flattened entries.
pub fn contingency_tables(row_sums: &[usize], col_sums: &[usize]) -> Result<Vec<NatMatrix>, CombinatError> {
    let rows: usize = row_sums.iter().sum();
    let cols: usize = col_sums.iter().sum();
    if rows != cols {
        return Err(CombinatError::MarginMismatch { rows, cols });
    }
    let (q, r) = (row_sums.len(), col_sums.len());
    if r == 0 {
        // all margins are zero; the empty q x 0 table
        return Ok(vec![NatMatrix::new(q, 0, Vec::new())]);
    }
    let mut out = Vec::new();
    let mut entries = vec![0; q * r];
    let mut remaining_cols = col_sums.to_vec();
    fill_tables(0, 0, row_sums[..].first().copied().unwrap_or(0), row_sums, &mut remaining_cols, &mut entries, q, r, &mut out);
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn fill_tables(
    i: usize,
    j: usize,
    row_left: usize,
    row_sums: &[usize],
    cols_left: &mut [usize],
    entries: &mut [usize],
    q: usize,
    r: usize,
    out: &mut Vec<NatMatrix>,
) {
    if i == q {
        if cols_left.iter().all(|&c| c == 0) {
            out.push(NatMatrix::new(q, r, entries.to_vec()));
        }
        return;
    }
    if j + 1 == r {
        // last cell of the row is forced
        if row_left > cols_left[j] {
            return;
        }
        entries[i * r + j] = row_left;
        cols_left[j] -= row_left;
        let next = row_sums.get(i + 1).copied().unwrap_or(0);
        fill_tables(i + 1, 0, next, row_sums, cols_left, entries, q, r, out);
        cols_left[j] += row_left;
        return;
    }
    let hi = row_left.min(cols_left[j]);
    for v in 0..=hi {
        entries[i * r + j] = v;
        cols_left[j] -= v;
        fill_tables(i, j + 1, row_left - v, row_sums, cols_left, entries, q, r, out);
        cols_left[j] += v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn empty_margins() {
        assert_eq!(contingency_tables(&[0, 0], &[]).unwrap().len(), 1);
        assert_eq!(contingency_tables(&[], &[0]).unwrap().len(), 1);
        assert_eq!(contingency_tables(&[], &[]).unwrap().len(), 1);
    }

    #[test]
    fn compose_examples() {
        let s = p(&[2, 3, 1]);
        assert_eq!(perm_compose(&Permutation::identity(3), &s).unwrap(), s);
        assert!(perm_compose(&s, &s.inverse()).unwrap().is_identity());
        assert_eq!(perm_compose(&p(&[2, 1]), &p(&[2, 1])).unwrap(), p(&[1, 2]));
        assert_eq!(
            perm_compose(&p(&[2, 1]), &p(&[1, 2, 3])),
            Err(CombinatError::SizeMismatch(2, 3))
        );
        assert!(Permutation::new(vec![1, 1]).is_err());
    }

    #[test]
    fn block_sums() {
        let id1 = Permutation::identity(1);
        assert_eq!(perm_block_sum(&id1, &id1), Permutation::identity(2));
        assert_eq!(perm_block_sum(&p(&[2, 1]), &id1), p(&[2, 1, 3]));
        assert_eq!(perm_block_sum(&id1, &p(&[2, 1])), p(&[1, 3, 2]));
    }

    #[test]
    fn perm_enumeration() {
        assert_eq!(enumerate_perms(0).unwrap(), vec![Permutation::identity(0)]);
        assert_eq!(enumerate_perms(2).unwrap(), vec![p(&[1, 2]), p(&[2, 1])]);
        let s3 = enumerate_perms(3).unwrap();
        assert_eq!(s3.len(), 6);
        assert!(s3.windows(2).all(|w| w[0] < w[1]));
        assert!(enumerate_perms(9).is_err());
    }

    #[test]
    fn multiset_enumeration() {
        assert_eq!(enumerate_multisets(2, 3).unwrap().len(), 4);
        assert_eq!(enumerate_multisets(1, 5).unwrap().len(), 1);
        let singles = enumerate_multisets(3, 1).unwrap();
        assert_eq!(singles.len(), 3);
        assert!(singles.iter().all(|m| m.cardinality() == 1));
        assert!(enumerate_multisets(0, 2).is_err());
    }

    #[test]
    fn multiset_enumeration_matches_sorted_words() {
        // oracle: nondecreasing words of length 3 over 2 letters
        let mut words = Vec::new();
        for a in 0..2 {
            for b in a..2 {
                for c in b..2 {
                    words.push(Multiset::from_word(2, &[a, b, c]));
                }
            }
        }
        words.sort_by_key(Multiset::sorted_word);
        assert_eq!(enumerate_multisets(2, 3).unwrap(), words);
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(3, 2).unwrap(), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(subsets(4, 0).unwrap(), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(4, 2).unwrap().len(), 6);
        assert!(subsets(2, 3).is_err());
    }

    #[test]
    fn table_examples() {
        let t = contingency_tables(&[1, 1], &[1, 1]).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].entries(), &[0, 1, 1, 0]);
        assert_eq!(t[1].entries(), &[1, 0, 0, 1]);
        assert_eq!(contingency_tables(&[2, 1], &[1, 2]).unwrap().len(), 2);
        let single = contingency_tables(&[4], &[4]).unwrap();
        assert_eq!(single, vec![NatMatrix::new(1, 1, vec![4])]);
        assert_eq!(
            contingency_tables(&[2], &[1]),
            Err(CombinatError::MarginMismatch { rows: 2, cols: 1 })
        );
        // zero margins are allowed
        assert_eq!(contingency_tables(&[0, 2], &[2, 0]).unwrap().len(), 1);
    }

    proptest! {
        #[test]
        fn composition_is_associative(seed in 0usize..720, seed2 in 0usize..720, seed3 in 0usize..720) {
            let all = enumerate_perms(6).unwrap();
            let (a, b, c) = (&all[seed], &all[seed2], &all[seed3]);
            let left = a.compose(b).unwrap().compose(c).unwrap();
            let right = a.compose(&b.compose(c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            prop_assert_eq!(a.compose(&Permutation::identity(6)).unwrap(), a.clone());
        }

        #[test]
        fn block_sum_restricts(n in 0usize..4, m in 0usize..4, i in 0usize..24, j in 0usize..24) {
            let sn = enumerate_perms(n).unwrap();
            let sm = enumerate_perms(m).unwrap();
            let (a, b) = (&sn[i % sn.len()], &sm[j % sm.len()]);
            let s = a.block_sum(b);
            let left: Vec<usize> = s.images()[..n].to_vec();
            let right: Vec<usize> = s.images()[n..].iter().map(|x| x - n).collect();
            prop_assert_eq!(left, a.images().to_vec());
            prop_assert_eq!(right, b.images().to_vec());
        }
    }
}
