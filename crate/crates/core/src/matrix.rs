//! Dense matrices over a [`Scalar`], the concrete model of a strict symmetric
//! monoidal linear category.
//!
//! Rows index the codomain basis and columns the domain basis, so the
//! diagrammatic composite `f;g` is the matrix product `g * f`. Tensor is the
//! Kronecker product; the leftmost factor is the most significant digit of a
//! flat index.

use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

use crate::combinat::{enumerate_perms, CombinatError, Permutation};
use crate::scalar::{inv_factorial, Boolean, Rational, Scalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    Shape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Combinat(#[from] CombinatError),
    #[error("malformed matrix: {0}")]
    Decode(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn new(rows: usize, cols: usize, entries: Vec<S>) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::Decode(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
    }

    /// Row-major rational entries mapped into `S`.
    pub fn from_rationals(rows: usize, cols: usize, entries: &[Rational]) -> Result<Self, MatrixError> {
        let entries = entries.iter().map(S::from_rational).collect::<Result<Vec<_>, _>>()?;
        Self::new(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: S) {
        let k = i * self.cols + j;
        self.entries[k] = self.entries[k].clone() + v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(Scalar::is_nonnegative)
    }

    /// Ordinary product `self * other`.
    pub fn matmul(&self, other: &Matrix<S>) -> Result<Matrix<S>, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Shape { op: "product", left: self.shape(), right: other.shape() });
        }
        let mut out = Matrix::<S>::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j].add_assign_mul(a, b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Diagrammatic composite `self ; g` (apply `self` first).
    pub fn compose(&self, g: &Matrix<S>) -> Result<Matrix<S>, MatrixError> {
        if self.rows != g.cols {
            return Err(MatrixError::Shape { op: "compose", left: self.shape(), right: g.shape() });
        }
        g.matmul(self)
    }

    /// Compose a nonempty chain `m0 ; m1 ; ...`.
    pub fn compose_all<'a>(chain: impl IntoIterator<Item = &'a Matrix<S>>) -> Result<Matrix<S>, MatrixError> {
        let mut it = chain.into_iter();
        let first = it
            .next()
            .ok_or_else(|| MatrixError::Decode("empty composition chain".into()))?
            .clone();
        it.try_fold(first, |acc, m| acc.compose(m))
    }

    pub fn kron(&self, other: &Matrix<S>) -> Matrix<S> {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Matrix::zeros(r, c);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        let b = other.get(i2, j2);
                        if !b.is_zero() {
                            out.entries[(i1 * other.rows + i2) * c + j1 * other.cols + j2] =
                                a.clone() * b.clone();
                        }
                    }
                }
            }
        }
        out
    }

    /// Tensor product of a list of matrices; the empty list gives `1_I`.
    pub fn kron_all<'a>(ms: impl IntoIterator<Item = &'a Matrix<S>>) -> Matrix<S> {
        ms.into_iter().fold(Matrix::identity(1), |acc, m| acc.kron(m))
    }

    /// `self^{⊗n}`.
    pub fn tensor_power(&self, n: usize) -> Matrix<S> {
        (0..n).fold(Matrix::identity(1), |acc, _| acc.kron(self))
    }

    pub fn add(&self, other: &Matrix<S>) -> Result<Matrix<S>, MatrixError> {
        if self.shape() != other.shape() {
            return Err(MatrixError::Shape { op: "add", left: self.shape(), right: other.shape() });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, entries })
    }

    /// Rational action `q . self`.
    pub fn scale(&self, q: &Rational) -> Result<Matrix<S>, MatrixError> {
        let k = S::from_rational(q)?;
        Ok(self.scale_by(&k))
    }

    pub fn scale_by(&self, k: &S) -> Matrix<S> {
        let entries = self.entries.iter().map(|a| k.clone() * a.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Matrix<S> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// First `(row, col)` where the two matrices disagree, or a shape mismatch
    /// reported as `(usize::MAX, usize::MAX)`.
    pub fn first_difference(&self, other: &Matrix<S>) -> Option<(usize, usize)> {
        if self.shape() != other.shape() {
            return Some((usize::MAX, usize::MAX));
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .position(|(a, b)| a != b)
            .map(|k| (k / self.cols, k % self.cols))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rows": self.rows,
            "cols": self.cols,
            "entries": self.entries.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, MatrixError> {
        let dim = |key: &str| {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| MatrixError::Decode(format!("missing or invalid \"{key}\"")))
        };
        let (rows, cols) = (dim("rows")?, dim("cols")?);
        let entries = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| MatrixError::Decode("missing \"entries\" array".into()))?
            .iter()
            .map(S::from_json)
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(rows, cols, entries)
    }
}

impl<S: Scalar> std::fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Matrices with a computable two-sided inverse when one exists.
pub trait Invertible: Scalar {
    fn inverse(m: &Matrix<Self>) -> Option<Matrix<Self>>;
}

impl Invertible for Rational {
    fn inverse(m: &Matrix<Self>) -> Option<Matrix<Self>> {
        if !m.is_square() {
            return None;
        }
        let n = m.rows;
        let mut a = m.clone();
        let mut inv = Matrix::<Rational>::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.entries.swap(pivot * n + j, col * n + j);
                    inv.entries.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).recip();
            for j in 0..n {
                a.entries[col * n + j] *= &p;
                inv.entries[col * n + j] *= &p;
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    let (x, y) = (a.get(col, j) * &factor, inv.get(col, j) * &factor);
                    a.entries[r * n + j] -= x;
                    inv.entries[r * n + j] -= y;
                }
            }
        }
        Some(inv)
    }
}

impl Invertible for Boolean {
    /// Over `B` the invertible matrices are exactly the permutation matrices.
    fn inverse(m: &Matrix<Self>) -> Option<Matrix<Self>> {
        if !m.is_square() {
            return None;
        }
        let ones_per = |line: Vec<&Boolean>| line.iter().filter(|b| b.0).count() == 1;
        let n = m.rows;
        let rows_ok = (0..n).all(|i| ones_per((0..n).map(|j| m.get(i, j)).collect()));
        let cols_ok = (0..n).all(|j| ones_per((0..n).map(|i| m.get(i, j)).collect()));
        (rows_ok && cols_ok).then(|| m.transpose())
    }
}

/// Bijection between words `(i_1..i_n)` with `i_k < dims[k]` and flat indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorIndexCodec {
    dims: Vec<usize>,
}

impl TensorIndexCodec {
    pub fn new(dims: Vec<usize>) -> Self {
        TensorIndexCodec { dims }
    }

    pub fn uniform(d: usize, n: usize) -> Self {
        TensorIndexCodec { dims: vec![d; n] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn size(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn encode(&self, word: &[usize]) -> usize {
        word.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| acc * d + i)
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut word = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            word[k] = index % self.dims[k];
            index /= self.dims[k];
        }
        word
    }

    /// All words in flat-index order.
    pub fn words(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.size()).map(|i| self.decode(i))
    }
}

/// The symmetry permuting tensor factors of dimensions `dims`: output factor
/// `j` is input factor `σ(j)`, so a word `w` is sent to `w ∘ σ`.
pub fn permute_factors<S: Scalar>(dims: &[usize], sigma: &Permutation) -> Matrix<S> {
    assert_eq!(dims.len(), sigma.size(), "one dimension per permuted factor");
    let input = TensorIndexCodec::new(dims.to_vec());
    let output = TensorIndexCodec::new((1..=dims.len()).map(|j| dims[sigma.apply(j) - 1]).collect());
    let size = input.size();
    let mut m = Matrix::zeros(size, size);
    for (col, word) in input.words().enumerate() {
        let image: Vec<usize> = (1..=word.len()).map(|j| word[sigma.apply(j) - 1]).collect();
        m.set(output.encode(&image), col, S::one());
    }
    m
}

/// `lift(σ)` on `A^{⊗n}` with `dim A = d`.
pub fn perm_matrix<S: Scalar>(sigma: &Permutation, d: usize) -> Matrix<S> {
    permute_factors(&vec![d; sigma.size()], sigma)
}

/// The symmetry `γ_{A,B}: A ⊗ B → B ⊗ A`.
pub fn swap_matrix<S: Scalar>(da: usize, db: usize) -> Matrix<S> {
    permute_factors(&[da, db], &Permutation::transposition(2, 1, 2))
}

/// `(1/n!) Σ_{σ ∈ S_n} lift(σ)` on `A^{⊗n}`.
pub fn average_blender_matrix<S: Scalar>(n: usize, d: usize) -> Result<Matrix<S>, MatrixError> {
    let mut sum = Matrix::zeros(d.pow(n as u32), d.pow(n as u32));
    for sigma in enumerate_perms(n)? {
        sum = sum.add(&perm_matrix(&sigma, d))?;
    }
    sum.scale(&inv_factorial(n))
}
