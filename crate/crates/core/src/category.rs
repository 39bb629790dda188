//! The interface of a strict symmetric monoidal Q≥0-linear category and the
//! generic law checks every model is expected to pass.

use std::fmt::Debug;
use std::marker::PhantomData;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::combinat::{enumerate_perms, Permutation};
use crate::matrix::{perm_matrix, Matrix, MatrixError};
use crate::scalar::{Rational, Scalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatError {
    #[error("boundary mismatch in {op}: {detail}")]
    Boundary { op: &'static str, detail: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

impl From<MatrixError> for CatError {
    fn from(e: MatrixError) -> Self {
        match e {
            MatrixError::Scalar(s) => CatError::Scalar(s),
            MatrixError::Shape { op, left, right } => {
                CatError::Boundary { op, detail: format!("{left:?} vs {right:?}") }
            }
            other => CatError::Boundary { op: "matrix", detail: other.to_string() },
        }
    }
}

pub trait LinearCategory: Sync {
    type Obj: Clone + PartialEq + Debug;
    type Mor: Clone + PartialEq + Debug;

    fn unit(&self) -> Self::Obj;
    fn tensor_obj(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Obj;
    fn dom(&self, f: &Self::Mor) -> Self::Obj;
    fn cod(&self, f: &Self::Mor) -> Self::Obj;

    fn identity(&self, a: &Self::Obj) -> Self::Mor;
    fn zero(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Mor;
    /// Diagrammatic composite `f;g`.
    fn compose(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor, CatError>;
    fn tensor(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor;
    fn add(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor, CatError>;
    fn scale(&self, q: &Rational, f: &Self::Mor) -> Result<Self::Mor, CatError>;
    /// The symmetry on `A^{⊗n}` induced by `σ ∈ S_n`.
    fn lift_permutation(&self, sigma: &Permutation, a: &Self::Obj) -> Self::Mor;

    fn sample_object(&self, rng: &mut dyn RngCore) -> Self::Obj;
    fn sample_morphism(&self, a: &Self::Obj, b: &Self::Obj, rng: &mut dyn RngCore) -> Self::Mor;

    fn tensor_power(&self, f: &Self::Mor, n: usize) -> Self::Mor {
        let unit = self.identity(&self.unit());
        (0..n).fold(unit, |acc, _| self.tensor(&acc, f))
    }
}

/// Matrices over `S`: objects are dimensions, the unit is `1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct MatCat<S>(PhantomData<S>);

impl<S> MatCat<S> {
    pub fn new() -> Self {
        MatCat(PhantomData)
    }
}

impl<S: Scalar> LinearCategory for MatCat<S> {
    type Obj = usize;
    type Mor = Matrix<S>;

    fn unit(&self) -> usize {
        1
    }

    fn tensor_obj(&self, a: &usize, b: &usize) -> usize {
        a * b
    }

    fn dom(&self, f: &Matrix<S>) -> usize {
        f.cols()
    }

    fn cod(&self, f: &Matrix<S>) -> usize {
        f.rows()
    }

    fn identity(&self, a: &usize) -> Matrix<S> {
        Matrix::identity(*a)
    }

    fn zero(&self, a: &usize, b: &usize) -> Matrix<S> {
        Matrix::zeros(*b, *a)
    }

    fn compose(&self, f: &Matrix<S>, g: &Matrix<S>) -> Result<Matrix<S>, CatError> {
        Ok(f.compose(g)?)
    }

    fn tensor(&self, f: &Matrix<S>, g: &Matrix<S>) -> Matrix<S> {
        f.kron(g)
    }

    fn add(&self, f: &Matrix<S>, g: &Matrix<S>) -> Result<Matrix<S>, CatError> {
        Ok(f.add(g)?)
    }

    fn scale(&self, q: &Rational, f: &Matrix<S>) -> Result<Matrix<S>, CatError> {
        if q < &Rational::from_integer(0.into()) {
            return Err(ScalarError::Negative(q.to_string()).into());
        }
        Ok(f.scale(q)?)
    }

    fn lift_permutation(&self, sigma: &Permutation, a: &usize) -> Matrix<S> {
        perm_matrix(sigma, *a)
    }

    fn sample_object(&self, rng: &mut dyn RngCore) -> usize {
        rng.gen_range(1..=3)
    }

    fn sample_morphism(&self, a: &usize, b: &usize, rng: &mut dyn RngCore) -> Matrix<S> {
        Matrix::from_fn(*b, *a, |_, _| S::sample(rng))
    }
}

/// Finite-rank free Q-modules.
pub type MatQ = MatCat<Rational>;
/// Finite sets and relations.
pub type RelCat = MatCat<crate::scalar::Boolean>;

/// Outcome of one law family, with a description of each violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub law: &'static str,
    pub trials: usize,
    pub failures: Vec<String>,
}

impl LawReport {
    fn new(law: &'static str) -> Self {
        LawReport { law, trials: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record<T: PartialEq + Debug>(&mut self, what: &str, lhs: Result<T, CatError>, rhs: Result<T, CatError>) {
        self.trials += 1;
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l == r => {}
            (Ok(l), Ok(r)) => self.failures.push(format!("{what}: {l:?} != {r:?}")),
            (l, r) => self.failures.push(format!("{what}: {:?} / {:?}", l.err(), r.err())),
        }
    }
}

fn random_q(rng: &mut dyn RngCore) -> Rational {
    crate::scalar::rat(rng.gen_range(0..=5), rng.gen_range(1..=4))
}

/// `(f+g);h = f;h + g;h`, `f;(g+h) = f;g + f;h`, `(λf);g = λ(f;g) = f;(λg)`,
/// and the same four laws for `⊗`, plus the zero laws.
pub fn check_bilinearity<C: LinearCategory>(cat: &C, rng: &mut dyn RngCore, trials: usize) -> LawReport {
    let mut rep = LawReport::new("bilinearity");
    for _ in 0..trials {
        let (a, b, c) = (cat.sample_object(rng), cat.sample_object(rng), cat.sample_object(rng));
        let f = cat.sample_morphism(&a, &b, rng);
        let g = cat.sample_morphism(&a, &b, rng);
        let h = cat.sample_morphism(&b, &c, rng);
        let k = cat.sample_morphism(&b, &c, rng);
        let lam = random_q(rng);

        rep.record(
            "(f+g);h",
            cat.add(&f, &g).and_then(|s| cat.compose(&s, &h)),
            cat.compose(&f, &h).and_then(|x| cat.add(&x, &cat.compose(&g, &h)?)),
        );
        rep.record(
            "f;(h+k)",
            cat.add(&h, &k).and_then(|s| cat.compose(&f, &s)),
            cat.compose(&f, &h).and_then(|x| cat.add(&x, &cat.compose(&f, &k)?)),
        );
        rep.record(
            "(λf);h",
            cat.scale(&lam, &f).and_then(|x| cat.compose(&x, &h)),
            cat.compose(&f, &h).and_then(|x| cat.scale(&lam, &x)),
        );
        rep.record(
            "f;(λh)",
            cat.scale(&lam, &h).and_then(|x| cat.compose(&f, &x)),
            cat.compose(&f, &h).and_then(|x| cat.scale(&lam, &x)),
        );
        rep.record(
            "(f+g)⊗h",
            cat.add(&f, &g).map(|s| cat.tensor(&s, &h)),
            cat.add(&cat.tensor(&f, &h), &cat.tensor(&g, &h)),
        );
        rep.record(
            "h⊗(f+g)",
            cat.add(&f, &g).map(|s| cat.tensor(&h, &s)),
            cat.add(&cat.tensor(&h, &f), &cat.tensor(&h, &g)),
        );
        rep.record(
            "(λf)⊗h",
            cat.scale(&lam, &f).map(|x| cat.tensor(&x, &h)),
            cat.scale(&lam, &cat.tensor(&f, &h)),
        );
        rep.record(
            "h⊗(λf)",
            cat.scale(&lam, &f).map(|x| cat.tensor(&h, &x)),
            cat.scale(&lam, &cat.tensor(&h, &f)),
        );
        rep.record("0;h", cat.compose(&cat.zero(&a, &b), &h), Ok(cat.zero(&a, &c)));
        rep.record("f;0", cat.compose(&f, &cat.zero(&b, &c)), Ok(cat.zero(&a, &c)));
        let z = cat.zero(&a, &b);
        rep.record("0⊗h", Ok(cat.tensor(&z, &h)), Ok(cat.zero(&cat.tensor_obj(&a, &b), &cat.tensor_obj(&b, &c))));
        rep.record("f+0", cat.add(&f, &z), Ok(f.clone()));
        rep.record("1.f", cat.scale(&Rational::from_integer(1.into()), &f), Ok(f.clone()));
        let half = crate::scalar::rat(1, 2);
        rep.record(
            "½f+½f",
            cat.scale(&half, &f).and_then(|x| cat.add(&x, &x)),
            Ok(f.clone()),
        );
    }
    rep
}

/// `(f⊗g);(h⊗k) = (f;h)⊗(g;k)` and `id⊗id = id`.
pub fn check_tensor_functoriality<C: LinearCategory>(cat: &C, rng: &mut dyn RngCore, trials: usize) -> LawReport {
    let mut rep = LawReport::new("tensor functoriality");
    for _ in 0..trials {
        let objs: Vec<C::Obj> = (0..4).map(|_| cat.sample_object(rng)).collect();
        let o2 = cat.sample_object(rng);
        let f = cat.sample_morphism(&objs[0], &objs[1], rng);
        let h = cat.sample_morphism(&objs[1], &objs[2], rng);
        let g = cat.sample_morphism(&objs[3], &o2, rng);
        let k = cat.sample_morphism(&o2, &objs[0], rng);
        rep.record(
            "interchange",
            cat.compose(&cat.tensor(&f, &g), &cat.tensor(&h, &k)),
            cat.compose(&f, &h).and_then(|x| Ok(cat.tensor(&x, &cat.compose(&g, &k)?))),
        );
        rep.record(
            "id⊗id",
            Ok(cat.tensor(&cat.identity(&objs[0]), &cat.identity(&objs[1]))),
            Ok(cat.identity(&cat.tensor_obj(&objs[0], &objs[1]))),
        );
    }
    rep
}

/// `lift(σ);lift(τ) = lift(σ∘τ)`, `lift(id) = id`, `lift(σ);lift(σ⁻¹) = id`.
pub fn check_lift_monoid<C: LinearCategory>(cat: &C, rng: &mut dyn RngCore, max_n: usize) -> LawReport {
    let mut rep = LawReport::new("lift monoid map");
    let a = cat.sample_object(rng);
    for n in 0..=max_n {
        let perms = enumerate_perms(n).expect("within bound");
        let idn = cat.identity(&(0..n).fold(cat.unit(), |acc, _| cat.tensor_obj(&acc, &a)));
        rep.record("lift(id)", Ok(cat.lift_permutation(&Permutation::identity(n), &a)), Ok(idn.clone()));
        for s in &perms {
            let ls = cat.lift_permutation(s, &a);
            rep.record("σ;σ⁻¹", cat.compose(&ls, &cat.lift_permutation(&s.inverse(), &a)), Ok(idn.clone()));
            for t in &perms {
                let st = s.compose(t).expect("same size");
                rep.record(
                    "lift(σ);lift(τ)",
                    cat.compose(&ls, &cat.lift_permutation(t, &a)),
                    Ok(cat.lift_permutation(&st, &a)),
                );
            }
        }
    }
    rep
}

/// `f^{⊗n};lift(σ,B) = lift(σ,A);f^{⊗n}`.
pub fn check_naturality<C: LinearCategory>(cat: &C, rng: &mut dyn RngCore, trials: usize, max_n: usize) -> LawReport {
    let mut rep = LawReport::new("naturality of symmetries");
    for _ in 0..trials {
        let (a, b) = (cat.sample_object(rng), cat.sample_object(rng));
        let f = cat.sample_morphism(&a, &b, rng);
        let n = rng.gen_range(0..=max_n);
        let perms = enumerate_perms(n).expect("within bound");
        let s = &perms[rng.gen_range(0..perms.len())];
        let fpow = cat.tensor_power(&f, n);
        rep.record(
            "naturality",
            cat.compose(&fpow, &cat.lift_permutation(s, &b)),
            cat.compose(&cat.lift_permutation(s, &a), &fpow),
        );
    }
    rep
}

/// `q.f = (q.1_I) ⊗ f`.
pub fn check_base_change<C: LinearCategory>(cat: &C, rng: &mut dyn RngCore, trials: usize) -> LawReport {
    let mut rep = LawReport::new("base change");
    let unit = cat.identity(&cat.unit());
    for _ in 0..trials {
        let (a, b) = (cat.sample_object(rng), cat.sample_object(rng));
        let f = cat.sample_morphism(&a, &b, rng);
        let q = random_q(rng);
        rep.record("q.f", cat.scale(&q, &f), cat.scale(&q, &unit).map(|s| cat.tensor(&s, &f)));
    }
    rep
}

/// Endomorphisms of the unit commute, and composition agrees with tensor there.
pub fn check_scalar_commutativity<C: LinearCategory>(cat: &C, rng: &mut dyn RngCore, trials: usize) -> LawReport {
    let mut rep = LawReport::new("scalar commutativity");
    let i = cat.unit();
    let one = cat.identity(&i);
    for t in 0..trials {
        let f = if t == 0 { one.clone() } else { cat.sample_morphism(&i, &i, rng) };
        let g = cat.sample_morphism(&i, &i, rng);
        rep.record("f;g = g;f", cat.compose(&f, &g), cat.compose(&g, &f));
        rep.record("f;g = f⊗g", cat.compose(&f, &g), Ok(cat.tensor(&f, &g)));
    }
    rep
}

/// Every generic law family, seeded.
pub fn check_all_laws<C: LinearCategory>(cat: &C, seed: u64) -> Vec<LawReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        check_bilinearity(cat, &mut rng, 25),
        check_tensor_functoriality(cat, &mut rng, 25),
        check_lift_monoid(cat, &mut rng, 3),
        check_naturality(cat, &mut rng, 25, 3),
        check_base_change(cat, &mut rng, 25),
        check_scalar_commutativity(cat, &mut rng, 25),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Boolean};

    #[test]
    fn matq_passes_all_laws() {
        for rep in check_all_laws(&MatQ::new(), 11) {
            assert!(rep.passed(), "{}: {:?}", rep.law, rep.failures);
            assert!(rep.trials > 0);
        }
    }

    #[test]
    fn rel_passes_all_laws() {
        for rep in check_all_laws(&RelCat::new(), 12) {
            assert!(rep.passed(), "{}: {:?}", rep.law, rep.failures);
        }
    }

    #[test]
    fn lift_examples() {
        let cat = MatQ::new();
        assert_eq!(cat.lift_permutation(&Permutation::identity(3), &2), Matrix::identity(8));
        assert_eq!(cat.lift_permutation(&Permutation::identity(0), &2), Matrix::identity(1));
        let swap = cat.lift_permutation(&Permutation::new(vec![2, 1]).unwrap(), &2);
        assert_eq!(swap, crate::matrix::swap_matrix(2, 2));
    }

    #[test]
    fn scale_rejects_negative() {
        let cat = MatQ::new();
        assert!(cat.scale(&rat(-1, 2), &Matrix::identity(2)).is_err());
        let rel = RelCat::new();
        assert!(rel.scale(&rat(-1, 2), &Matrix::<Boolean>::identity(2)).is_err());
    }

    #[test]
    fn compose_boundary_error() {
        let cat = MatQ::new();
        let f = Matrix::identity(2);
        let g = Matrix::identity(3);
        assert!(matches!(cat.compose(&f, &g), Err(CatError::Boundary { .. })));
    }

    #[test]
    fn unit_endomorphisms_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(check_scalar_commutativity(&MatQ::new(), &mut rng, 10).passed());
        assert!(check_scalar_commutativity(&RelCat::new(), &mut rng, 10).passed());
    }
}
