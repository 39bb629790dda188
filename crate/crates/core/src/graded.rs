//! Truncated graded structures: permutation splittings, binomial graded
//! bimonoids, graded morphisms, the functors relating them, higher-arity
//! multiplications, and blenders.
//!
//! Degree 0 is the monoidal unit: `A_0 = I` has rank 1, and every `∇`/`Δ`
//! with a zero index is an identity.

use std::collections::BTreeMap;

use rand::Rng;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::combinat::{enumerate_perms_bounded, CombinatError, Permutation, DEFAULT_PERM_BOUND};
use crate::matrix::{perm_matrix, Matrix, MatrixError};
use crate::scalar::{binomial, factorial, inv_factorial, Rational, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("degree {requested} exceeds the structure's maximum degree {max}")]
    DegreeOverflow { requested: usize, max: usize },
    #[error("malformed structure: {0}")]
    Malformed(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Combinat(#[from] CombinatError),
    #[error("blender orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("a blender needs a nonempty bag")]
    EmptyBlender,
}

type Result<T> = std::result::Result<T, GradedError>;

fn ranks_from_json(v: &Value) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| GradedError::Malformed("\"objects\" must be an array".into()))?
        .iter()
        .map(|x| {
            x.as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| GradedError::Malformed(format!("bad rank {x}")))
        })
        .collect()
}

fn usize_field(v: &Value, key: &str) -> Result<usize> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| GradedError::Malformed(format!("missing or invalid \"{key}\"")))
}

fn check_shape<S: Scalar>(what: &str, m: &Matrix<S>, rows: usize, cols: usize) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(GradedError::Malformed(format!(
            "{what} has shape {:?}, expected {:?}",
            m.shape(),
            (rows, cols)
        )));
    }
    Ok(())
}

/// A permutation splitting `(A_n, r_n, s_n)` truncated at degree `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermSplit<S> {
    variant: Option<String>,
    dim: usize,
    ranks: Vec<usize>,
    r: Vec<Matrix<S>>,
    s: Vec<Matrix<S>>,
}

impl<S: Scalar> PermSplit<S> {
    /// `r[k]`, `s[k]` are the tables for degree `k + 2`. Shapes are checked,
    /// the splitting equations are not (see [`PermSplit::validate`]).
    pub fn new(dim: usize, r: Vec<Matrix<S>>, s: Vec<Matrix<S>>, variant: Option<String>) -> Result<Self> {
        if r.len() != s.len() {
            return Err(GradedError::Malformed(format!("{} r tables but {} s tables", r.len(), s.len())));
        }
        let mut ranks = vec![1, dim];
        let mut rs = vec![Matrix::identity(1), Matrix::identity(dim)];
        let mut ss = rs.clone();
        for (k, (rn, sn)) in r.into_iter().zip(s).enumerate() {
            let n = k + 2;
            let tensor = dim.pow(n as u32);
            let rank = rn.rows();
            check_shape(&format!("r_{n}"), &rn, rank, tensor)?;
            check_shape(&format!("s_{n}"), &sn, tensor, rank)?;
            ranks.push(rank);
            rs.push(rn);
            ss.push(sn);
        }
        Ok(PermSplit { variant, dim, ranks, r: rs, s: ss })
    }

    pub fn variant(&self) -> Option<&str> {
        self.variant.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    /// Rank of `A_n`, with `A_0 = I`.
    pub fn rank(&self, n: usize) -> usize {
        self.ranks[n]
    }

    /// Ranks of `A_1..A_N`.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks[1..]
    }

    fn bound(&self, n: usize) -> Result<()> {
        if n > self.max_degree() {
            return Err(GradedError::DegreeOverflow { requested: n, max: self.max_degree() });
        }
        Ok(())
    }

    pub fn r(&self, n: usize) -> Result<&Matrix<S>> {
        self.bound(n)?;
        Ok(&self.r[n])
    }

    pub fn s(&self, n: usize) -> Result<&Matrix<S>> {
        self.bound(n)?;
        Ok(&self.s[n])
    }

    /// Checks `s_n;r_n = Id` and `r_n;s_n = (1/n!)Σσ` for every degree.
    pub fn validate(&self) -> Result<()> {
        for n in 2..=self.max_degree() {
            let sr = self.s[n].compose(&self.r[n])?;
            if sr != Matrix::identity(self.rank(n)) {
                return Err(GradedError::Malformed(format!("s_{n};r_{n} is not the identity")));
            }
            let rs = self.r[n].compose(&self.s[n])?;
            if rs != crate::matrix::average_blender_matrix(n, self.dim)? {
                return Err(GradedError::Malformed(format!("r_{n};s_{n} is not the symmetrizer")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "structure": "perm_split",
            "model": S::KIND,
            "variant": self.variant,
            "dim": self.dim,
            "max_degree": self.max_degree(),
            "objects": self.ranks(),
            "r": self.r[2..].iter().map(Matrix::to_json).collect::<Vec<_>>(),
            "s": self.s[2..].iter().map(Matrix::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let model = v.get("model").and_then(Value::as_str);
        if model != Some(S::KIND) {
            return Err(GradedError::Malformed(format!("expected model {:?}, found {model:?}", S::KIND)));
        }
        let dim = usize_field(v, "dim")?;
        let n = usize_field(v, "max_degree")?;
        let tables = |key: &str| -> Result<Vec<Matrix<S>>> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| GradedError::Malformed(format!("missing \"{key}\"")))?
                .iter()
                .map(|m| Ok(Matrix::from_json(m)?))
                .collect()
        };
        let variant = v.get("variant").and_then(Value::as_str).map(str::to_owned);
        let p = PermSplit::new(dim, tables("r")?, tables("s")?, variant)?;
        if p.max_degree() != n.max(1) {
            return Err(GradedError::Malformed(format!("max_degree {n} disagrees with {} tables", p.r.len() - 2)));
        }
        if let Some(objs) = v.get("objects") {
            if ranks_from_json(objs)? != p.ranks() {
                return Err(GradedError::Malformed("\"objects\" disagrees with table shapes".into()));
            }
        }
        Ok(p)
    }
}

/// A binomial graded bimonoid `(A_n, ∇_{n,p}, Δ_{n,p})` truncated at degree `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinGrBimon<S> {
    variant: Option<String>,
    ranks: Vec<usize>,
    nabla: BTreeMap<(usize, usize), Matrix<S>>,
    delta: BTreeMap<(usize, usize), Matrix<S>>,
}

impl<S: Scalar> BinGrBimon<S> {
    /// `ranks[n]` is the rank of `A_n` for `1 <= n <= N` (index 0 is ignored and
    /// forced to 1). Tables are keyed by `(n, p)` with `n, p >= 1`, `n + p <= N`.
    pub fn new(
        ranks: Vec<usize>,
        nabla: BTreeMap<(usize, usize), Matrix<S>>,
        delta: BTreeMap<(usize, usize), Matrix<S>>,
        variant: Option<String>,
    ) -> Result<Self> {
        let mut ranks = ranks;
        if ranks.is_empty() {
            return Err(GradedError::Malformed("no objects".into()));
        }
        ranks[0] = 1;
        let n_max = ranks.len() - 1;
        for n in 1..n_max {
            for p in 1..=n_max - n {
                let m = nabla
                    .get(&(n, p))
                    .ok_or_else(|| GradedError::Malformed(format!("missing nabla({n},{p})")))?;
                check_shape(&format!("nabla({n},{p})"), m, ranks[n + p], ranks[n] * ranks[p])?;
                let m = delta
                    .get(&(n, p))
                    .ok_or_else(|| GradedError::Malformed(format!("missing delta({n},{p})")))?;
                check_shape(&format!("delta({n},{p})"), m, ranks[n] * ranks[p], ranks[n + p])?;
            }
        }
        let extra = nabla.keys().chain(delta.keys()).find(|(n, p)| *n == 0 || *p == 0 || n + p > n_max);
        if let Some((n, p)) = extra {
            return Err(GradedError::Malformed(format!("unexpected table ({n},{p})")));
        }
        Ok(BinGrBimon { variant, ranks, nabla, delta })
    }

    pub fn variant(&self) -> Option<&str> {
        self.variant.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.rank(1)
    }

    pub fn max_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks[n]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks[1..]
    }

    /// Rank of `A_{n_1} ⊗ ... ⊗ A_{n_k}`.
    pub fn word_rank(&self, grades: &[usize]) -> usize {
        grades.iter().map(|&n| self.rank(n)).product()
    }

    fn bound(&self, n: usize) -> Result<()> {
        if n > self.max_degree() {
            return Err(GradedError::DegreeOverflow { requested: n, max: self.max_degree() });
        }
        Ok(())
    }

    pub fn id(&self, n: usize) -> Result<Matrix<S>> {
        self.bound(n)?;
        Ok(Matrix::identity(self.rank(n)))
    }

    /// Identity on `A_{n_1} ⊗ ... ⊗ A_{n_k}`.
    pub fn id_word(&self, grades: &[usize]) -> Result<Matrix<S>> {
        for &n in grades {
            self.bound(n)?;
        }
        Ok(Matrix::identity(self.word_rank(grades)))
    }

    pub fn nabla(&self, n: usize, p: usize) -> Result<Matrix<S>> {
        self.bound(n + p)?;
        if n == 0 || p == 0 {
            return Ok(Matrix::identity(self.rank(n + p)));
        }
        Ok(self.nabla[&(n, p)].clone())
    }

    pub fn delta(&self, n: usize, p: usize) -> Result<Matrix<S>> {
        self.bound(n + p)?;
        if n == 0 || p == 0 {
            return Ok(Matrix::identity(self.rank(n + p)));
        }
        Ok(self.delta[&(n, p)].clone())
    }

    /// Replace one table (shapes are checked); used to build faulty structures.
    pub fn with_table(mut self, which: Table, n: usize, p: usize, m: Matrix<S>) -> Result<Self> {
        let (key, rows, cols) = match which {
            Table::Nabla => ("nabla", self.rank(n + p), self.rank(n) * self.rank(p)),
            Table::Delta => ("delta", self.rank(n) * self.rank(p), self.rank(n + p)),
        };
        check_shape(&format!("{key}({n},{p})"), &m, rows, cols)?;
        match which {
            Table::Nabla => self.nabla.insert((n, p), m),
            Table::Delta => self.delta.insert((n, p), m),
        };
        Ok(self)
    }

    /// Left-nested `∇_{n_1..n_q}`: `A_{n_1} ⊗ ... ⊗ A_{n_q} → A_{Σn}`.
    pub fn higher_nabla(&self, grades: &[usize]) -> Result<Matrix<S>> {
        let total: usize = grades.iter().sum();
        self.bound(total)?;
        let Some((&first, rest)) = grades.split_first() else {
            return Ok(Matrix::identity(1));
        };
        let mut acc = self.id(first)?;
        let mut sum = first;
        for &n in rest {
            acc = acc.kron(&self.id(n)?).compose(&self.nabla(sum, n)?)?;
            sum += n;
        }
        Ok(acc)
    }

    /// Left-nested `Δ_{n_1..n_q}`: `A_{Σn} → A_{n_1} ⊗ ... ⊗ A_{n_q}`.
    pub fn higher_delta(&self, grades: &[usize]) -> Result<Matrix<S>> {
        let total: usize = grades.iter().sum();
        self.bound(total)?;
        let Some((&first, rest)) = grades.split_first() else {
            return Ok(Matrix::identity(1));
        };
        let mut acc = self.id(first)?;
        let mut sum = first;
        for &n in rest {
            acc = self.delta(sum, n)?.compose(&acc.kron(&self.id(n)?))?;
            sum += n;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        let table = |t: &BTreeMap<(usize, usize), Matrix<S>>| {
            t.iter()
                .map(|((n, p), m)| (format!("{n},{p}"), m.to_json()))
                .collect::<Map<String, Value>>()
        };
        json!({
            "structure": "bimonoid",
            "model": S::KIND,
            "variant": self.variant,
            "dim": self.dim(),
            "max_degree": self.max_degree(),
            "objects": self.ranks(),
            "nabla": table(&self.nabla),
            "delta": table(&self.delta),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let model = v.get("model").and_then(Value::as_str);
        if model != Some(S::KIND) {
            return Err(GradedError::Malformed(format!("expected model {:?}, found {model:?}", S::KIND)));
        }
        let mut ranks = vec![1];
        ranks.extend(ranks_from_json(
            v.get("objects").ok_or_else(|| GradedError::Malformed("missing \"objects\"".into()))?,
        )?);
        if usize_field(v, "max_degree")? != ranks.len() - 1 {
            return Err(GradedError::Malformed("max_degree disagrees with \"objects\"".into()));
        }
        let table = |key: &str| -> Result<BTreeMap<(usize, usize), Matrix<S>>> {
            let obj = v
                .get(key)
                .and_then(Value::as_object)
                .ok_or_else(|| GradedError::Malformed(format!("missing \"{key}\"")))?;
            obj.iter()
                .map(|(k, m)| {
                    let (n, p) = k
                        .split_once(',')
                        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                        .ok_or_else(|| GradedError::Malformed(format!("bad key {k:?} in \"{key}\"")))?;
                    Ok(((n, p), Matrix::from_json(m)?))
                })
                .collect()
        };
        let variant = v.get("variant").and_then(Value::as_str).map(str::to_owned);
        BinGrBimon::new(ranks, table("nabla")?, table("delta")?, variant)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Table {
    Nabla,
    Delta,
}

/// A family `f_n: A_n → B_n` for `0 <= n <= N` (`f_0 = 1_I`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMorphism<S> {
    components: Vec<Matrix<S>>,
}

impl<S: Scalar> GradedMorphism<S> {
    /// `components[k]` is `f_{k+1}`.
    pub fn new(components: Vec<Matrix<S>>) -> Self {
        let mut all = vec![Matrix::identity(1)];
        all.extend(components);
        GradedMorphism { components: all }
    }

    pub fn max_degree(&self) -> usize {
        self.components.len() - 1
    }

    pub fn component(&self, n: usize) -> &Matrix<S> {
        &self.components[n]
    }

    pub fn set_component(&mut self, n: usize, m: Matrix<S>) {
        self.components[n] = m;
    }

    /// `f_n ⊗ f_p`.
    pub fn tensor_components(&self, n: usize, p: usize) -> Matrix<S> {
        self.component(n).kron(self.component(p))
    }

    /// Degreewise composite `self;other`.
    pub fn compose(&self, other: &GradedMorphism<S>) -> Result<GradedMorphism<S>> {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(f, g)| f.compose(g))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(GradedMorphism { components })
    }
}

/// `F1`: `r_n = ∇_{1..1}`, `s_n = (1/n!) Δ_{1..1}`.
pub fn f1<S: Scalar>(b: &BinGrBimon<S>) -> Result<PermSplit<S>> {
    let mut r = Vec::new();
    let mut s = Vec::new();
    for n in 2..=b.max_degree() {
        let ones = vec![1; n];
        r.push(b.higher_nabla(&ones)?);
        s.push(b.higher_delta(&ones)?.scale(&inv_factorial(n))?);
    }
    PermSplit::new(b.dim(), r, s, b.variant.clone())
}

/// `G1`: `∇_{n,p} = (s_n ⊗ s_p);r_{n+p}`, `Δ_{n,p} = binom(n+p,n) s_{n+p};(r_n ⊗ r_p)`.
pub fn g1<S: Scalar>(p: &PermSplit<S>) -> Result<BinGrBimon<S>> {
    let n_max = p.max_degree();
    let mut nabla = BTreeMap::new();
    let mut delta = BTreeMap::new();
    for n in 1..n_max {
        for q in 1..=n_max - n {
            let ss = p.s(n)?.kron(p.s(q)?);
            nabla.insert((n, q), ss.compose(p.r(n + q)?)?);
            let rr = p.r(n)?.kron(p.r(q)?);
            delta.insert((n, q), p.s(n + q)?.compose(&rr)?.scale(&binomial(n + q, n))?);
        }
    }
    BinGrBimon::new(p.ranks.clone(), nabla, delta, p.variant.clone())
}

/// `F3` on objects (reduced categories): same assignment as `G1`.
pub fn f3<S: Scalar>(p: &PermSplit<S>) -> Result<BinGrBimon<S>> {
    g1(p)
}

/// `G3` on objects (reduced categories): same assignment as `F1`.
pub fn g3<S: Scalar>(b: &BinGrBimon<S>) -> Result<PermSplit<S>> {
    f1(b)
}

/// `G2`: extends `f_1: A_1 → B_1` by `f_n = s_n^A;f_1^{⊗n};r_n^B`.
pub fn g2_extend<S: Scalar>(f1: &Matrix<S>, a: &PermSplit<S>, b: &PermSplit<S>) -> Result<GradedMorphism<S>> {
    if f1.shape() != (b.dim(), a.dim()) {
        return Err(GradedError::Malformed(format!(
            "f_1 has shape {:?}, expected {:?}",
            f1.shape(),
            (b.dim(), a.dim())
        )));
    }
    let n_max = a.max_degree().min(b.max_degree());
    let mut components = vec![f1.clone()];
    for n in 2..=n_max {
        components.push(a.s(n)?.compose(&f1.tensor_power(n))?.compose(b.r(n)?)?);
    }
    Ok(GradedMorphism::new(components))
}

/// `F2`: keeps the degree-1 component.
pub fn f2<S: Scalar>(f: &GradedMorphism<S>) -> Matrix<S> {
    f.component(1).clone()
}

/// A formal average of a nonempty bag of same-order permutations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Blender {
    order: usize,
    bag: Vec<Permutation>,
}

impl Blender {
    pub fn new(order: usize, mut bag: Vec<Permutation>) -> Result<Self> {
        if bag.is_empty() {
            return Err(GradedError::EmptyBlender);
        }
        if let Some(p) = bag.iter().find(|p| p.size() != order) {
            return Err(GradedError::OrderMismatch(order, p.size()));
        }
        bag.sort();
        Ok(Blender { order, bag })
    }

    pub fn singleton(sigma: Permutation) -> Self {
        Blender { order: sigma.size(), bag: vec![sigma] }
    }

    pub fn identity(order: usize) -> Self {
        Self::singleton(Permutation::identity(order))
    }

    /// The uniform average over all of `S_n`.
    pub fn full(order: usize) -> Result<Self> {
        Ok(Blender { order, bag: enumerate_perms_bounded(order, DEFAULT_PERM_BOUND)? })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cardinality(&self) -> usize {
        self.bag.len()
    }

    pub fn bag(&self) -> &[Permutation] {
        &self.bag
    }

    /// `x ⊞ y`: bag union, i.e. `(m₁x + m₂y)/(m₁+m₂)`.
    pub fn boxplus(&self, other: &Blender) -> Result<Blender> {
        if self.order != other.order {
            return Err(GradedError::OrderMismatch(self.order, other.order));
        }
        Blender::new(self.order, self.bag.iter().chain(&other.bag).cloned().collect())
    }

    /// `x ⊗ y`: bag of block sums.
    pub fn tensor(&self, other: &Blender) -> Blender {
        let bag = self
            .bag
            .iter()
            .flat_map(|s| other.bag.iter().map(move |t| s.block_sum(t)))
            .collect();
        Blender::new(self.order + other.order, bag).expect("nonempty, uniform order")
    }

    /// `x ; y`: bag of products `σ∘τ`, matching `lift(σ);lift(τ) = lift(σ∘τ)`.
    pub fn seq(&self, other: &Blender) -> Result<Blender> {
        if self.order != other.order {
            return Err(GradedError::OrderMismatch(self.order, other.order));
        }
        let mut bag = Vec::with_capacity(self.bag.len() * other.bag.len());
        for s in &self.bag {
            for t in &other.bag {
                bag.push(s.compose(t)?);
            }
        }
        Blender::new(self.order, bag)
    }

    /// `(1/|M|) Σ_{σ∈M} lift(σ)` on `A^{⊗n}`, `dim A = d`.
    pub fn eval<S: Scalar>(&self, d: usize) -> Result<Matrix<S>> {
        let size = d.pow(self.order as u32);
        let mut sum = Matrix::zeros(size, size);
        for s in &self.bag {
            sum = sum.add(&perm_matrix(s, d))?;
        }
        let m = Rational::from_integer((self.bag.len() as i64).into());
        Ok(sum.scale(&m.recip())?)
    }

    /// Equality of evaluations (coarser than bag equality).
    pub fn eval_eq<S: Scalar>(&self, other: &Blender, d: usize) -> Result<bool> {
        Ok(self.order == other.order && self.eval::<S>(d)? == other.eval::<S>(d)?)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, order: usize, max_bag: usize) -> Result<Blender> {
        let perms = enumerate_perms_bounded(order, DEFAULT_PERM_BOUND)?;
        let m = rng.gen_range(1..=max_bag.max(1));
        let bag = (0..m).map(|_| perms[rng.gen_range(0..perms.len())].clone()).collect();
        Blender::new(order, bag)
    }
}

/// `n!` as a rational (convenience re-export for callers building witnesses).
pub fn factorial_q(n: usize) -> Rational {
    factorial(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int, Boolean};
    use crate::sympow::{build_mod_split, build_rel_split, Variant};

    fn sym1(d: usize, n: usize) -> PermSplit<Rational> {
        build_mod_split(d, n, Variant::Sym1).unwrap()
    }

    #[test]
    fn f1_at_degree_two() {
        let b = g1(&sym1(2, 2)).unwrap();
        let p = f1(&b).unwrap();
        assert_eq!(p.r(2).unwrap(), &b.nabla(1, 1).unwrap());
        assert_eq!(p.s(2).unwrap(), &b.delta(1, 1).unwrap().scale(&rat(1, 2)).unwrap());
        assert_eq!(p.r(1).unwrap(), &Matrix::identity(2));
        assert_eq!(p.s(1).unwrap(), &Matrix::identity(2));
    }

    #[test]
    fn round_trips() {
        let p = sym1(2, 4);
        assert_eq!(f1(&g1(&p).unwrap()).unwrap(), p);
        let b = g1(&p).unwrap();
        assert_eq!(g1(&f1(&b).unwrap()).unwrap(), b);
        let rel = build_rel_split(2, 4).unwrap();
        assert_eq!(f1(&g1(&rel).unwrap()).unwrap(), rel);
        assert_eq!(f3(&p).unwrap(), b);
        assert_eq!(g3(&b).unwrap(), p);
    }

    #[test]
    fn g1_examples() {
        let p = sym1(2, 3);
        let b = g1(&p).unwrap();
        assert_eq!(b.nabla(1, 1).unwrap(), *p.r(2).unwrap());
        let two = b.delta(1, 1).unwrap().compose(&b.nabla(1, 1).unwrap()).unwrap();
        assert_eq!(two, Matrix::identity(3).scale(&rat_int(2)).unwrap());

        // in Rel, ∇_{1,1} relates ([x],[y]) to [x,y]
        let rel = g1(&build_rel_split(2, 2).unwrap()).unwrap();
        let nab = rel.nabla(1, 1).unwrap();
        // columns: ([x],[x]), ([x],[y]), ([y],[x]), ([y],[y]); rows: multisets by counts
        // rows: [x,x], [x,y], [y,y]
        let expect = |i: usize, j: usize| Boolean(matches!((i, j), (0, 0) | (1, 1) | (1, 2) | (2, 3)));
        assert_eq!(nab, Matrix::from_fn(3, 4, expect));
    }

    #[test]
    fn g2_examples() {
        let p = sym1(2, 4);
        let id = g2_extend(&Matrix::identity(2), &p, &p).unwrap();
        for n in 1..=4 {
            assert_eq!(id.component(n), &Matrix::identity(p.rank(n)));
        }
        let one = sym1(1, 4);
        let two = Matrix::new(1, 1, vec![rat_int(2)]).unwrap();
        let f = g2_extend(&two, &one, &one).unwrap();
        for n in 1..=4 {
            assert_eq!(f.component(n).get(0, 0), &rat_int(1 << n));
        }
        assert_eq!(f2(&f), two);
    }

    #[test]
    fn g2_preserves_composition() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let p = sym1(2, 3);
        let f = Matrix::from_fn(2, 2, |_, _| Rational::sample(&mut rng));
        let g = Matrix::from_fn(2, 2, |_, _| Rational::sample(&mut rng));
        let ext = |m: &Matrix<Rational>| g2_extend(m, &p, &p).unwrap();
        assert_eq!(ext(&f.compose(&g).unwrap()), ext(&f).compose(&ext(&g)).unwrap());
    }

    #[test]
    fn higher_examples() {
        let b = g1(&sym1(2, 3)).unwrap();
        assert_eq!(b.higher_nabla(&[2]).unwrap(), Matrix::identity(3));
        assert_eq!(b.higher_nabla(&[1, 1]).unwrap(), b.nabla(1, 1).unwrap());
        assert_eq!(b.higher_delta(&[]).unwrap(), Matrix::identity(1));
        let lhs = b.higher_delta(&[1, 1, 1]).unwrap().compose(&b.higher_nabla(&[1, 1, 1]).unwrap()).unwrap();
        assert_eq!(lhs, Matrix::identity(4).scale(&rat_int(6)).unwrap());
        // zero grades are erased strands
        assert_eq!(b.higher_nabla(&[0, 1, 0, 2]).unwrap(), b.nabla(1, 2).unwrap());
        assert!(matches!(b.higher_nabla(&[2, 2]), Err(GradedError::DegreeOverflow { .. })));
    }

    #[test]
    fn json_round_trips() {
        let p = sym1(2, 3);
        assert_eq!(PermSplit::<Rational>::from_json(&p.to_json()).unwrap(), p);
        let b = g1(&p).unwrap();
        assert_eq!(BinGrBimon::<Rational>::from_json(&b.to_json()).unwrap(), b);
        assert!(PermSplit::<Boolean>::from_json(&p.to_json()).is_err());
        let rel = build_rel_split(2, 3).unwrap();
        assert_eq!(PermSplit::<Boolean>::from_json(&rel.to_json()).unwrap(), rel);
    }

    #[test]
    fn blender_examples() {
        let swap = Permutation::new(vec![2, 1]).unwrap();
        let half = Blender::identity(2).boxplus(&Blender::singleton(swap.clone())).unwrap();
        assert_eq!(half.cardinality(), 2);
        assert_eq!(
            half.eval::<Rational>(2).unwrap(),
            crate::matrix::average_blender_matrix(2, 2).unwrap()
        );
        let x = Blender::new(3, vec![Permutation::new(vec![2, 3, 1]).unwrap(), Permutation::identity(3)]).unwrap();
        assert_eq!(x.seq(&Blender::identity(3)).unwrap(), x);
        let s = Blender::singleton(swap.clone());
        assert_eq!(s.seq(&s).unwrap(), Blender::identity(2));
        assert_eq!(Blender::identity(0).eval::<Rational>(2).unwrap(), Matrix::identity(1));
        assert_eq!(Blender::singleton(swap.clone()).eval::<Rational>(2).unwrap(), perm_matrix(&swap, 2));
        assert!(Blender::new(2, vec![]).is_err());
        assert!(Blender::identity(2).boxplus(&Blender::identity(3)).is_err());
        // distinct bags may evaluate equal
        let doubled = half.boxplus(&half).unwrap();
        assert_ne!(doubled, half);
        assert!(doubled.eval_eq::<Rational>(&half, 2).unwrap());
    }
}
