//! Concrete permutation splittings: symmetric powers (variants 1, 2) and
//! divided powers (variants 3, 4) of a free Q-module, and the multiset
//! splitting of a finite set in relations.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde_json::json;
use thiserror::Error;

use crate::combinat::{enumerate_multisets, enumerate_perms, CombinatError, Multiset};
use crate::graded::{GradedError, PermSplit};
use crate::matrix::{Matrix, MatrixError, TensorIndexCodec};
use crate::report::CheckReport;
use crate::scalar::{factorial, inv_factorial, Boolean, Rational, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SympowError {
    #[error("out of bounds: {0}")]
    Bounds(String),
    #[error("unknown variant {0:?} (expected sym1, sym2, gamma3 or gamma4)")]
    UnknownVariant(String),
    #[error(transparent)]
    Combinat(#[from] CombinatError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Sym1,
    Sym2,
    Gamma3,
    Gamma4,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Sym1, Variant::Sym2, Variant::Gamma3, Variant::Gamma4];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Sym1 => "sym1",
            Variant::Sym2 => "sym2",
            Variant::Gamma3 => "gamma3",
            Variant::Gamma4 => "gamma4",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = SympowError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| SympowError::UnknownVariant(s.to_owned()))
    }
}

/// Size limits for constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_dim: usize,
    pub max_degree: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_dim: 3, max_degree: 6 }
    }
}

impl Bounds {
    fn check(&self, d: usize, n: usize) -> Result<(), SympowError> {
        if d == 0 {
            return Err(SympowError::Bounds("dimension must be at least 1".into()));
        }
        if n < 2 {
            return Err(SympowError::Bounds(format!("maximum degree must be at least 2, got {n}")));
        }
        if d > self.max_dim {
            return Err(SympowError::Bounds(format!("dimension {d} exceeds {}", self.max_dim)));
        }
        if n > self.max_degree {
            return Err(SympowError::Bounds(format!("degree {n} exceeds {}", self.max_degree)));
        }
        Ok(())
    }
}

/// The multiset basis of `S^n` (equivalently the orbit basis of `Γ^n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymBasis {
    degree: usize,
    alphabet: usize,
    multisets: Vec<Multiset>,
    index: HashMap<Multiset, usize>,
}

impl SymBasis {
    pub fn new(d: usize, n: usize) -> Result<Self, CombinatError> {
        let multisets = enumerate_multisets(d, n)?;
        let index = multisets.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(SymBasis { degree: n, alphabet: d, multisets, index })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.multisets.len()
    }

    pub fn multisets(&self) -> &[Multiset] {
        &self.multisets
    }

    pub fn index_of(&self, m: &Multiset) -> usize {
        self.index[m]
    }

    /// Index of the bag underlying a word.
    pub fn index_of_word(&self, word: &[usize]) -> usize {
        self.index_of(&Multiset::from_word(self.alphabet, word))
    }

    pub fn codec(&self) -> TensorIndexCodec {
        TensorIndexCodec::uniform(self.alphabet, self.degree)
    }
}

/// Orbit-sum vectors `e_M = Σ_{w ∈ orbit(M)} w` in `A^{⊗n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaBasis {
    basis: SymBasis,
}

impl GammaBasis {
    pub fn new(d: usize, n: usize) -> Result<Self, CombinatError> {
        Ok(GammaBasis { basis: SymBasis::new(d, n)? })
    }

    pub fn multisets(&self) -> &SymBasis {
        &self.basis
    }

    /// Flat indices of the words in the orbit of the `k`-th multiset.
    pub fn orbit(&self, k: usize) -> Vec<usize> {
        let codec = self.basis.codec();
        codec
            .words()
            .enumerate()
            .filter(|(_, w)| self.basis.index_of_word(w) == k)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn orbit_vector<S: Scalar>(&self, k: usize) -> Matrix<S> {
        let size = self.basis.codec().size();
        let mut v = Matrix::zeros(size, 1);
        for i in self.orbit(k) {
            v.set(i, 0, S::one());
        }
        v
    }
}

/// `r^{(1)}_n`: each word goes to its bag with coefficient 1.
fn r_sym1(basis: &SymBasis) -> Matrix<Rational> {
    let codec = basis.codec();
    let mut r = Matrix::zeros(basis.rank(), codec.size());
    for (col, w) in codec.words().enumerate() {
        r.set(basis.index_of_word(&w), col, Rational::from_integer(1.into()));
    }
    r
}

/// `s^{(1)}_n([M]) = (1/n!) Σ_σ lift(σ)(w_M)`, summed explicitly over `S_n`.
fn s_sym1(basis: &SymBasis) -> Result<Matrix<Rational>, SympowError> {
    let n = basis.degree();
    let codec = basis.codec();
    let perms = enumerate_perms(n)?;
    let weight = inv_factorial(n);
    let mut s = Matrix::zeros(codec.size(), basis.rank());
    for (k, m) in basis.multisets().iter().enumerate() {
        let w = m.sorted_word();
        for sigma in &perms {
            let image: Vec<usize> = (1..=n).map(|j| w[sigma.apply(j) - 1]).collect();
            s.add_to(codec.encode(&image), k, weight.clone());
        }
    }
    Ok(s)
}

/// `r^{(3)}_n(w)`: coordinates of `(1/n!) Σ_σ lift(σ)(w)` in the orbit basis,
/// i.e. `#{σ : w∘σ = w} / n!` on `e_{[w]}`.
fn r_gamma3(basis: &SymBasis) -> Result<Matrix<Rational>, SympowError> {
    let n = basis.degree();
    let codec = basis.codec();
    let perms = enumerate_perms(n)?;
    let mut r = Matrix::zeros(basis.rank(), codec.size());
    for (col, w) in codec.words().enumerate() {
        let fixing = perms
            .iter()
            .filter(|sigma| (1..=n).all(|j| w[sigma.apply(j) - 1] == w[j - 1]))
            .count();
        let coeff = Rational::from_integer((fixing as i64).into()) * inv_factorial(n);
        r.set(basis.index_of_word(&w), col, coeff);
    }
    Ok(r)
}

/// `s^{(3)}_n`: the inclusion, with columns `e_M`.
fn s_gamma3(basis: &SymBasis) -> Matrix<Rational> {
    r_sym1(basis).transpose()
}

fn degree_tables(d: usize, n: usize, variant: Variant) -> Result<(Matrix<Rational>, Matrix<Rational>), SympowError> {
    let basis = SymBasis::new(d, n)?;
    let nf = factorial(n);
    let inv = inv_factorial(n);
    Ok(match variant {
        Variant::Sym1 => (r_sym1(&basis), s_sym1(&basis)?),
        Variant::Sym2 => (r_sym1(&basis).scale(&inv)?, s_sym1(&basis)?.scale(&nf)?),
        Variant::Gamma3 => (r_gamma3(&basis)?, s_gamma3(&basis)),
        Variant::Gamma4 => (r_gamma3(&basis)?.scale(&nf)?, s_gamma3(&basis).scale(&inv)?),
    })
}

fn assert_nonnegative(m: &Matrix<Rational>, what: &str) -> Result<(), SympowError> {
    if !m.is_nonnegative() {
        return Err(SympowError::Bounds(format!("{what} has a negative coefficient")));
    }
    Ok(())
}

pub fn build_mod_split_with(d: usize, n_max: usize, variant: Variant, bounds: Bounds) -> Result<PermSplit<Rational>, SympowError> {
    bounds.check(d, n_max)?;
    let mut rs = Vec::new();
    let mut ss = Vec::new();
    for n in 2..=n_max {
        let (r, s) = degree_tables(d, n, variant)?;
        assert_nonnegative(&r, "r")?;
        assert_nonnegative(&s, "s")?;
        rs.push(r);
        ss.push(s);
    }
    Ok(PermSplit::new(d, rs, ss, Some(variant.to_string()))?)
}

/// The splitting of `Q^d` given by `variant`, for degrees up to `n_max`.
pub fn build_mod_split(d: usize, n_max: usize, variant: Variant) -> Result<PermSplit<Rational>, SympowError> {
    build_mod_split_with(d, n_max, variant, Bounds::default())
}

pub fn build_rel_split_with(set_size: usize, n_max: usize, bounds: Bounds) -> Result<PermSplit<Boolean>, SympowError> {
    bounds.check(set_size, n_max)?;
    let mut rs = Vec::new();
    let mut ss = Vec::new();
    for n in 2..=n_max {
        let basis = SymBasis::new(set_size, n)?;
        let support = |x: &Rational| Boolean(!x.is_zero());
        rs.push(r_sym1(&basis).map(support));
        ss.push(s_sym1(&basis)?.map(support));
    }
    Ok(PermSplit::new(set_size, rs, ss, Some("rel".into()))?)
}

/// Bags of a finite set: `r_n` relates a word to its bag, `s_n` a bag to every ordering.
pub fn build_rel_split(set_size: usize, n_max: usize) -> Result<PermSplit<Boolean>, SympowError> {
    build_rel_split_with(set_size, n_max, Bounds::default())
}

/// For each degree: every column of `s_n` is fixed by all permutations, and
/// `r_n` restricted to the image of `s_n` is the identity.
pub fn gamma_embedding_check(split: &PermSplit<Rational>) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let d = split.dim();
    for n in 2..=split.max_degree() {
        let params = json!({ "n": n, "d": d, "variant": split.variant() });
        let (r, s) = (split.r(n).expect("in range"), split.s(n).expect("in range"));
        let fixed = enumerate_perms(n).map(|perms| {
            perms
                .iter()
                .all(|sigma| s.compose(&crate::matrix::perm_matrix(sigma, d)).as_ref() == Ok(s))
        });
        out.push(CheckReport::assert(
            "gamma.fixed",
            params.clone(),
            fixed == Ok(true),
            "a column of s_n is not invariant",
        ));
        out.push(CheckReport::compare_results(
            "gamma.retraction",
            params,
            s.compose(r),
            Ok(Matrix::identity(split.rank(n))),
        ));
    }
    out
}
