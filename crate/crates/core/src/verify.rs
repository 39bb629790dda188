//! Executable checks of the structural identities, each evaluated exactly on
//! concrete structures, plus a suite runner producing [`CheckReport`]s.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::category::{check_all_laws, MatCat};
use crate::combinat::{contingency_tables, enumerate_perms, subsets, Multiset, NatMatrix, Permutation};
use crate::graded::{f1, g1, g2_extend, BinGrBimon, Blender, GradedError, GradedMorphism, PermSplit};
use crate::matrix::{average_blender_matrix, perm_matrix, permute_factors, swap_matrix, Invertible, Matrix};
use crate::report::CheckReport;
use crate::scalar::{binomial, factorial, Rational, Scalar};
use crate::sympow::{build_mod_split, gamma_embedding_check, SymBasis, SympowError, Variant};

type Result<T> = std::result::Result<T, GradedError>;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("f_1 is not invertible")]
    NotInvertible,
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Sympow(#[from] SympowError),
}

fn chain<S: Scalar>(ms: &[&Matrix<S>]) -> Result<Matrix<S>> {
    Ok(Matrix::compose_all(ms.iter().copied())?)
}

fn tens<S: Scalar>(ms: &[&Matrix<S>]) -> Matrix<S> {
    Matrix::kron_all(ms.iter().copied())
}

fn gamma<S: Scalar>(b: &BinGrBimon<S>, n: usize, p: usize) -> Matrix<S> {
    swap_matrix(b.rank(n), b.rank(p))
}

/// Compositions of `total` into positive parts.
pub fn compositions(total: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `(Δ_{a,b} ⊗ Δ_{c,d});(id_a ⊗ γ_{b,c} ⊗ id_d);(∇_{a,c} ⊗ ∇_{b,d})`.
pub fn axiom1_term<S: Scalar>(b: &BinGrBimon<S>, a: usize, bb: usize, c: usize, d: usize) -> Result<Matrix<S>> {
    let split = b.delta(a, bb)?.kron(&b.delta(c, d)?);
    let wire = tens(&[&b.id(a)?, &gamma(b, bb, c), &b.id(d)?]);
    let merge = b.nabla(a, c)?.kron(&b.nabla(bb, d)?);
    chain(&[&split, &wire, &merge])
}

/// Right side of the compatibility axiom at `(n, p, q, r)`.
pub fn axiom1_rhs<S: Scalar>(b: &BinGrBimon<S>, n: usize, p: usize, q: usize, r: usize) -> Result<Matrix<S>> {
    let mut sum = Matrix::zeros(b.rank(q) * b.rank(r), b.rank(n) * b.rank(p));
    for a in 0..=n.min(q) {
        let (bb, c) = (n - a, q - a);
        if c > p || bb > r {
            continue;
        }
        let d = p - c;
        sum = sum.add(&axiom1_term(b, a, bb, c, d)?)?;
    }
    Ok(sum)
}

/// `∇_{n,p};Δ_{q,r}` against the sum over `a+b=n, c+d=p, a+c=q, b+d=r`.
pub fn check_axiom1<S: Scalar>(b: &BinGrBimon<S>, n: usize, p: usize, q: usize, r: usize) -> CheckReport {
    let params = json!({ "n": n, "p": p, "q": q, "r": r });
    if n + p != q + r {
        return CheckReport::fail("axiom1", params, "n + p must equal q + r");
    }
    let lhs = b.nabla(n, p).and_then(|m| Ok(m.compose(&b.delta(q, r)?)?));
    CheckReport::compare_results("axiom1", params, lhs, axiom1_rhs(b, n, p, q, r))
}

/// `Δ_{n,p};∇_{n,p} = binom(n+p,n) Id`.
pub fn check_axiom2<S: Scalar>(b: &BinGrBimon<S>, n: usize, p: usize) -> CheckReport {
    let lhs = b.delta(n, p).and_then(|m| Ok(m.compose(&b.nabla(n, p)?)?));
    let rhs = b.id(n + p).and_then(|m| Ok(m.scale(&binomial(n + p, n))?));
    CheckReport::compare_results("axiom2", json!({ "n": n, "p": p }), lhs, rhs)
}

/// `∇_{1,1};Δ_{1,1} = id + swap`.
pub fn check_example_swap<S: Scalar>(b: &BinGrBimon<S>) -> CheckReport {
    let lhs = b.nabla(1, 1).and_then(|m| Ok(m.compose(&b.delta(1, 1)?)?));
    let d = b.dim();
    let rhs = Matrix::identity(d * d).add(&swap_matrix(d, d));
    CheckReport::compare_results("example1", json!({}), lhs, rhs.map_err(GradedError::from))
}

/// The two-term identity for `∇_{n,p};Δ_{n+p-1,1}`.
pub fn leibniz_rhs<S: Scalar>(b: &BinGrBimon<S>, n: usize, p: usize) -> Result<Matrix<S>> {
    let first = chain(&[
        &b.delta(n - 1, 1)?.kron(&b.id(p)?),
        &tens(&[&b.id(n - 1)?, &gamma(b, 1, p)]),
        &b.nabla(n - 1, p)?.kron(&b.id(1)?),
    ])?;
    let second = chain(&[&b.id(n)?.kron(&b.delta(p - 1, 1)?), &b.nabla(n, p - 1)?.kron(&b.id(1)?)])?;
    Ok(first.add(&second)?)
}

pub fn check_leibniz<S: Scalar>(b: &BinGrBimon<S>, n: usize, p: usize, check: &str) -> CheckReport {
    let params = json!({ "n": n, "p": p });
    if n == 0 || p == 0 {
        return CheckReport::fail(check, params, "n and p must be positive");
    }
    let lhs = b.nabla(n, p).and_then(|m| Ok(m.compose(&b.delta(n + p - 1, 1)?)?));
    CheckReport::compare_results(check, params, lhs, leibniz_rhs(b, n, p))
}

/// For a permutation-matrix table, `σ(β) = α` where `t[α][β] = 1`.
pub fn table_permutation(t: &NatMatrix) -> Option<Permutation> {
    if t.rows() != t.cols() || t.entries().iter().any(|&x| x > 1) {
        return None;
    }
    let images = (0..t.cols())
        .map(|beta| t.column(beta).iter().position(|&x| x == 1).map(|a| a + 1))
        .collect::<Option<Vec<_>>>()?;
    Permutation::new(images).ok()
}

/// One summand of the higher compatibility identity: split every input by its
/// row, route strand `(α, β)` from the `α`-th split to the `β`-th merge, and
/// merge every output by its column.
pub fn table_term<S: Scalar>(b: &BinGrBimon<S>, t: &NatMatrix) -> Result<Matrix<S>> {
    let (q, r) = (t.rows(), t.cols());
    let splits = (0..q).map(|a| b.higher_delta(t.row(a))).collect::<Result<Vec<_>>>()?;
    let merges = (0..r).map(|c| b.higher_nabla(&t.column(c))).collect::<Result<Vec<_>>>()?;
    let dims: Vec<usize> = t.entries().iter().map(|&i| b.rank(i)).collect();
    let images = (0..r).flat_map(|beta| (0..q).map(move |alpha| alpha * r + beta + 1)).collect();
    let sigma = Permutation::new(images)?;
    let wire = permute_factors(&dims, &sigma);
    chain(&[&tens(&splits.iter().collect::<Vec<_>>()), &wire, &tens(&merges.iter().collect::<Vec<_>>())])
}

pub fn table_sum<S: Scalar>(b: &BinGrBimon<S>, rows: &[usize], cols: &[usize]) -> Result<Matrix<S>> {
    let mut sum = Matrix::zeros(b.word_rank(cols), b.word_rank(rows));
    for t in contingency_tables(rows, cols)? {
        sum = sum.add(&table_term(b, &t)?)?;
    }
    Ok(sum)
}

/// `∇_{n_1..n_q};Δ_{p_1..p_r}` against the sum over contingency tables.
pub fn check_higher_compat<S: Scalar>(b: &BinGrBimon<S>, rows: &[usize], cols: &[usize]) -> CheckReport {
    let params = json!({ "rows": rows, "cols": cols });
    let lhs = b.higher_nabla(rows).and_then(|m| Ok(m.compose(&b.higher_delta(cols)?)?));
    CheckReport::compare_results("high1", params, lhs, table_sum(b, rows, cols))
}

/// `∇_{1..1};Δ_{1..1} = Σ_{σ ∈ S_q} σ`, and the table summands are exactly
/// the `q!` permutations, each once.
pub fn check_permutation_wirings<S: Scalar>(b: &BinGrBimon<S>, q: usize) -> Vec<CheckReport> {
    let ones = vec![1; q];
    let params = json!({ "q": q });
    let d = b.dim();
    let lhs = b.higher_nabla(&ones).and_then(|m| Ok(m.compose(&b.higher_delta(&ones)?)?));
    let rhs = enumerate_perms(q).map_err(GradedError::from).and_then(|perms| {
        let size = d.pow(q as u32);
        perms
            .iter()
            .try_fold(Matrix::zeros(size, size), |acc, s| Ok(acc.add(&perm_matrix(s, d))?))
    });
    let equation = CheckReport::compare_results("high2", params.clone(), lhs, rhs);

    let wirings = (|| -> Result<std::result::Result<(), String>> {
        let mut seen = Vec::new();
        for t in contingency_tables(&ones, &ones)? {
            let Some(sigma) = table_permutation(&t) else {
                return Ok(Err(format!("table {:?} is not a permutation matrix", t.to_rows())));
            };
            if table_term(b, &t)? != perm_matrix(&sigma, d) {
                return Ok(Err(format!("summand of table {:?} is not the wiring {sigma}", t.to_rows())));
            }
            seen.push(sigma);
        }
        seen.sort();
        if seen != enumerate_perms(q)? {
            return Ok(Err("summands are not exactly the permutations of S_q".into()));
        }
        Ok(Ok(()))
    })();
    let wiring = match wirings {
        Ok(Ok(())) => CheckReport::pass("high2.wirings", params),
        Ok(Err(note)) => CheckReport::fail("high2.wirings", params, note),
        Err(e) => CheckReport::fail("high2.wirings", params, e.to_string()),
    };
    vec![equation, wiring]
}

/// `Δ_{1..1};∇_{1..1} = q! Id`.
pub fn check_split_merge_ones<S: Scalar>(b: &BinGrBimon<S>, q: usize) -> CheckReport {
    let ones = vec![1; q];
    let lhs = b.higher_delta(&ones).and_then(|m| Ok(m.compose(&b.higher_nabla(&ones)?)?));
    let rhs = b.id(q).and_then(|m| Ok(m.scale(&factorial(q))?));
    CheckReport::compare_results("high3", json!({ "q": q }), lhs, rhs)
}

/// Associativity, coassociativity, commutativity, cocommutativity and the
/// re-association identities for higher `∇`/`Δ`, for all totals up to `max_total`.
pub fn check_assoc_suite<S: Scalar>(b: &BinGrBimon<S>, max_total: usize) -> Vec<CheckReport> {
    let t = max_total.min(b.max_degree());
    let mut out = Vec::new();
    for n in 0..=t {
        for p in 0..=t - n {
            for q in 0..=t - n - p {
                let params = json!({ "n": n, "p": p, "q": q });
                let lhs = (|| chain(&[&b.nabla(n, p)?.kron(&b.id(q)?), &b.nabla(n + p, q)?]))();
                let rhs = (|| chain(&[&b.id(n)?.kron(&b.nabla(p, q)?), &b.nabla(n, p + q)?]))();
                out.push(CheckReport::compare_results("assoc.nabla", params.clone(), lhs, rhs));
                let lhs = (|| chain(&[&b.delta(n + p, q)?, &b.delta(n, p)?.kron(&b.id(q)?)]))();
                let rhs = (|| chain(&[&b.delta(n, p + q)?, &b.id(n)?.kron(&b.delta(p, q)?)]))();
                out.push(CheckReport::compare_results("assoc.delta", params, lhs, rhs));
            }
            let params = json!({ "n": n, "p": p });
            let lhs = b.nabla(p, n).and_then(|m| Ok(gamma(b, n, p).compose(&m)?));
            out.push(CheckReport::compare_results("comm.nabla", params.clone(), lhs, b.nabla(n, p)));
            let lhs = b.delta(n, p).and_then(|m| Ok(m.compose(&gamma(b, n, p))?));
            out.push(CheckReport::compare_results("comm.delta", params, lhs, b.delta(p, n)));
        }
    }
    for total in 3..=t {
        for ns in compositions(total).into_iter().filter(|ns| ns.len() >= 3) {
            let params = json!({ "grades": ns });
            let rest1: usize = ns[1..].iter().sum();
            let rest2: usize = ns[2..].iter().sum();
            let (n1, n2) = (ns[0], ns[1]);
            let rhs = (|| chain(&[&b.id(n1)?.kron(&b.higher_nabla(&ns[1..])?), &b.nabla(n1, rest1)?]))();
            out.push(CheckReport::compare_results("cor1.nabla", params.clone(), b.higher_nabla(&ns), rhs));
            let rhs = (|| chain(&[&b.delta(n1, rest1)?, &b.id(n1)?.kron(&b.higher_delta(&ns[1..])?)]))();
            out.push(CheckReport::compare_results("cor1.delta", params.clone(), b.higher_delta(&ns), rhs));
            let rhs = (|| {
                chain(&[
                    &tens(&[&b.id(n1)?, &b.id(n2)?, &b.higher_nabla(&ns[2..])?]),
                    &b.id(n1)?.kron(&b.nabla(n2, rest2)?),
                    &b.nabla(n1, rest1)?,
                ])
            })();
            out.push(CheckReport::compare_results("cor2.nabla", params.clone(), b.higher_nabla(&ns), rhs));
            let rhs = (|| {
                chain(&[
                    &b.delta(n1, rest1)?,
                    &b.id(n1)?.kron(&b.delta(n2, rest2)?),
                    &tens(&[&b.id(n1)?, &b.id(n2)?, &b.higher_delta(&ns[2..])?]),
                ])
            })();
            out.push(CheckReport::compare_results("cor2.delta", params, b.higher_delta(&ns), rhs));
        }
    }
    out
}

/// `T(a,b,c,d)`, the generic summand of the compatibility axiom.
fn lemma4_t<S: Scalar>(b: &BinGrBimon<S>, a: usize, bb: usize, c: usize, d: usize) -> Result<Matrix<S>> {
    axiom1_term(b, a, bb, c, d)
}

fn lemma4_lhs<S: Scalar>(b: &BinGrBimon<S>, a: usize, bb: usize, c: usize, d: usize, inner: &Matrix<S>) -> Result<Matrix<S>> {
    let k = bb + d;
    chain(&[
        &b.delta(a, bb)?.kron(&b.delta(c, d)?),
        &tens(&[&b.id(a)?, &gamma(b, bb, c), &b.id(d)?]),
        &inner.kron(&b.nabla(bb, d)?),
        &b.id(a + c - 1)?.kron(&b.nabla(1, k)?),
    ])
}

/// The auxiliary identities used to derive the compatibility axiom of `G1(p)`:
/// the recursion for `Δ`, the transposition lemma, the two-term Leibniz rule,
/// and the two index-shifting identities.
pub fn check_lemma_suite<S: Scalar>(p: &PermSplit<S>, max_total: usize) -> Vec<CheckReport> {
    let b = match g1(p) {
        Ok(b) => b,
        Err(e) => return vec![CheckReport::fail("lemma", json!({}), e.to_string())],
    };
    let t = max_total.min(p.max_degree());
    let mut out = Vec::new();

    for q in 3..=t {
        for k in 1..=q - 2 {
            let params = json!({ "q": q, "k": k });
            let rhs = (|| {
                let m = chain(&[
                    &b.delta(q - k, k)?,
                    &b.delta(q - k - 1, 1)?.kron(&b.id(k)?),
                    &b.id(q - k - 1)?.kron(&b.nabla(1, k)?),
                ])?;
                Ok(m.scale(&Rational::new(1.into(), (k as i64 + 1).into()))?)
            })();
            out.push(CheckReport::compare_results("lemma.rec", params, b.delta(q - k - 1, k + 1), rhs));
        }
    }

    let d = p.dim();
    for n in 1..t {
        let rr = match (p.r(n), p.r(1)) {
            (Ok(a), Ok(c)) => a.kron(c),
            _ => continue,
        };
        let perms = match enumerate_perms(n + 1) {
            Ok(ps) => ps,
            Err(e) => {
                out.push(CheckReport::fail("lemma.transposition", json!({ "n": n }), e.to_string()));
                continue;
            }
        };
        for sigma in perms {
            let i = sigma.apply(n + 1);
            let params = json!({ "n": n, "sigma": sigma.images(), "i": i });
            let tr = Permutation::transposition(n + 1, i, n + 1);
            let lhs = perm_matrix(&sigma, d).compose(&rr);
            let rhs = perm_matrix(&tr, d).compose(&rr);
            out.push(CheckReport::compare_results("lemma.transposition", params, lhs, rhs));
        }
    }

    for n in 1..t {
        for q in 1..=t - n {
            out.push(check_leibniz(&b, n, q, "lemma.leibniz"));
        }
    }

    for total in 1..=t {
        for a in 0..=total {
            for bb in 0..=total - a {
                for c in 0..=total - a - bb {
                    let d = total - a - bb - c;
                    let params = json!({ "a": a, "b": bb, "c": c, "d": d });
                    if a >= 1 {
                        let (lhs, rhs) = (
                            (|| {
                                let x = chain(&[
                                    &b.delta(a - 1, 1)?.kron(&b.id(c)?),
                                    &b.id(a - 1)?.kron(&gamma(&b, 1, c)),
                                    &b.nabla(a - 1, c)?.kron(&b.id(1)?),
                                ])?;
                                lemma4_lhs(&b, a, bb, c, d, &x)
                            })(),
                            lemma4_t(&b, a - 1, bb + 1, c, d)
                                .and_then(|m| Ok(m.scale(&Rational::from_integer((bb as i64 + 1).into()))?)),
                        );
                        out.push(CheckReport::compare_results("lemma.shift_left", params.clone(), lhs, rhs));
                    }
                    if c >= 1 {
                        let (lhs, rhs) = (
                            (|| {
                                let y = chain(&[&b.id(a)?.kron(&b.delta(c - 1, 1)?), &b.nabla(a, c - 1)?.kron(&b.id(1)?)])?;
                                lemma4_lhs(&b, a, bb, c, d, &y)
                            })(),
                            lemma4_t(&b, a, bb, c - 1, d + 1)
                                .and_then(|m| Ok(m.scale(&Rational::from_integer((d as i64 + 1).into()))?)),
                        );
                        out.push(CheckReport::compare_results("lemma.shift_right", params, lhs, rhs));
                    }
                }
            }
        }
    }
    out
}

/// `s_n;r_n = Id` and `r_n;s_n = (1/n!) Σ σ`.
pub fn check_splitting<S: Scalar>(p: &PermSplit<S>, n: usize) -> Vec<CheckReport> {
    let params = json!({ "n": n });
    let (r, s) = match (p.r(n), p.s(n)) {
        (Ok(r), Ok(s)) => (r, s),
        (Err(e), _) | (_, Err(e)) => return vec![CheckReport::fail("splitting", params, e.to_string())],
    };
    vec![
        CheckReport::compare_results("splitting.sr", params.clone(), s.compose(r), Ok(Matrix::identity(p.rank(n)))),
        CheckReport::compare_results("splitting.rs", params, r.compose(s), average_blender_matrix(n, p.dim())),
    ]
}

/// `F1(G1(P)) = P`.
pub fn check_split_round_trip<S: Scalar>(p: &PermSplit<S>) -> CheckReport {
    let back = g1(p).and_then(|b| f1(&b));
    match back {
        Ok(q) => CheckReport::assert("bijec.f1g1", json!({}), &q == p, first_table_difference_split(&q, p)),
        Err(e) => CheckReport::fail("bijec.f1g1", json!({}), e.to_string()),
    }
}

/// `G1(F1(B)) = B`.
pub fn check_bimonoid_round_trip<S: Scalar>(b: &BinGrBimon<S>) -> CheckReport {
    match f1(b).and_then(|p| g1(&p)) {
        Ok(c) => CheckReport::assert("bijec.g1f1", json!({}), &c == b, "tables differ after G1(F1(B))"),
        Err(e) => CheckReport::fail("bijec.g1f1", json!({}), e.to_string()),
    }
}

fn first_table_difference_split<S: Scalar>(a: &PermSplit<S>, b: &PermSplit<S>) -> String {
    for n in 2..=a.max_degree().min(b.max_degree()) {
        if a.r(n).ok() != b.r(n).ok() {
            return format!("r_{n} differs");
        }
        if a.s(n).ok() != b.s(n).ok() {
            return format!("s_{n} differs");
        }
    }
    "structures differ".into()
}

/// Verdicts of the five equivalent morphism conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MorphismVerdicts {
    /// `f_n;s^B_n = s^A_n;f_1^{⊗n}`
    pub eqs: bool,
    /// `f_n = s^A_n;f_1^{⊗n};r^B_n`
    pub eqsr: bool,
    /// `f_1^{⊗n};r^B_n = r^A_n;f_n`
    pub eqr: bool,
    /// `(f_n ⊗ f_p);∇^B = ∇^A;f_{n+p}`
    pub nabla_square: bool,
    /// `Δ^A;(f_n ⊗ f_p) = f_{n+p};Δ^B`
    pub delta_square: bool,
}

impl MorphismVerdicts {
    pub fn all(&self) -> bool {
        self.eqs && self.eqsr && self.eqr && self.nabla_square && self.delta_square
    }

    pub fn none(&self) -> bool {
        !(self.eqs || self.eqsr || self.eqr || self.nabla_square || self.delta_square)
    }
}

pub fn morphism_verdicts<S: Scalar>(f: &GradedMorphism<S>, a: &PermSplit<S>, b: &PermSplit<S>) -> Result<MorphismVerdicts> {
    let (ba, bb) = (g1(a)?, g1(b)?);
    let n_max = f.max_degree().min(a.max_degree()).min(b.max_degree());
    let f1 = f.component(1);
    let mut v = MorphismVerdicts { eqs: true, eqsr: true, eqr: true, nabla_square: true, delta_square: true };
    for n in 2..=n_max {
        let fpow = f1.tensor_power(n);
        let fnn = f.component(n);
        v.eqs &= fnn.compose(b.s(n)?)? == a.s(n)?.compose(&fpow)?;
        v.eqsr &= *fnn == chain(&[a.s(n)?, &fpow, b.r(n)?])?;
        v.eqr &= fpow.compose(b.r(n)?)? == a.r(n)?.compose(fnn)?;
    }
    for n in 1..n_max {
        for p in 1..=n_max - n {
            let fnp = f.tensor_components(n, p);
            v.nabla_square &= fnp.compose(&bb.nabla(n, p)?)? == ba.nabla(n, p)?.compose(f.component(n + p))?;
            v.delta_square &= ba.delta(n, p)?.compose(&fnp)? == f.component(n + p).compose(&bb.delta(n, p)?)?;
        }
    }
    Ok(v)
}

/// Change one entry of one component of degree `>= 2`.
pub fn corrupt_family<S: Scalar, R: Rng + ?Sized>(f: &GradedMorphism<S>, rng: &mut R) -> (GradedMorphism<S>, usize) {
    let n = rng.gen_range(2..=f.max_degree());
    let mut m = f.component(n).clone();
    let (i, j) = (rng.gen_range(0..m.rows()), rng.gen_range(0..m.cols()));
    let v = m.get(i, j).perturb();
    m.set(i, j, v);
    let mut g = f.clone();
    g.set_component(n, m);
    (g, n)
}

fn verdicts_json(v: &MorphismVerdicts) -> serde_json::Value {
    json!({
        "eqs": v.eqs, "eqsr": v.eqsr, "eqr": v.eqr,
        "nabla_square": v.nabla_square, "delta_square": v.delta_square,
    })
}

/// The extension of `f_1` satisfies all five conditions, and a corrupted
/// family fails all five.
pub fn check_morphism_equivalences<S: Scalar, R: Rng + ?Sized>(
    f1: &Matrix<S>,
    a: &PermSplit<S>,
    b: &PermSplit<S>,
    rng: &mut R,
) -> Vec<CheckReport> {
    let f = match g2_extend(f1, a, b) {
        Ok(f) => f,
        Err(e) => return vec![CheckReport::fail("morphism.valid", json!({}), e.to_string())],
    };
    let mut out = Vec::new();
    match morphism_verdicts(&f, a, b) {
        Ok(v) => out.push(CheckReport::assert("morphism.valid", verdicts_json(&v), v.all(), "a condition failed")),
        Err(e) => out.push(CheckReport::fail("morphism.valid", json!({}), e.to_string())),
    }
    if f.max_degree() >= 2 {
        let (g, n) = corrupt_family(&f, rng);
        match morphism_verdicts(&g, a, b) {
            Ok(v) => {
                let mut params = verdicts_json(&v);
                params["corrupted_degree"] = json!(n);
                out.push(CheckReport::assert("morphism.corrupt", params, v.none(), "verdicts disagree"));
            }
            Err(e) => out.push(CheckReport::fail("morphism.corrupt", json!({}), e.to_string())),
        }
    }
    out
}

/// Result of a unicity check: the witness family and the reports.
#[derive(Clone, Debug)]
pub struct Unicity<S> {
    pub witness: GradedMorphism<S>,
    pub inverse: GradedMorphism<S>,
    pub reports: Vec<CheckReport>,
}

/// Builds `f_n = s^1_n;f_1^{⊗n};r^2_n` and its inverse `s^2_n;(f_1^{-1})^{⊗n};r^1_n`,
/// and checks they form an isomorphism of splittings and of bimonoids.
pub fn check_unicity<S: Invertible>(p1: &PermSplit<S>, p2: &PermSplit<S>, f1: &Matrix<S>) -> std::result::Result<Unicity<S>, VerifyError> {
    let inv = S::inverse(f1).ok_or(VerifyError::NotInvertible)?;
    let f = g2_extend(f1, p1, p2)?;
    let g = g2_extend(&inv, p2, p1)?;
    let n_max = f.max_degree();
    let mut reports = Vec::new();
    for n in 1..=n_max {
        let params = json!({ "n": n });
        reports.push(CheckReport::compare_results(
            "unicity.left_inverse",
            params.clone(),
            f.component(n).compose(g.component(n)),
            Ok(Matrix::identity(p1.rank(n))),
        ));
        reports.push(CheckReport::compare_results(
            "unicity.right_inverse",
            params,
            g.component(n).compose(f.component(n)),
            Ok(Matrix::identity(p2.rank(n))),
        ));
    }
    for (name, fam, a, b) in [("unicity.forward", &f, p1, p2), ("unicity.backward", &g, p2, p1)] {
        let rep = match morphism_verdicts(fam, a, b) {
            Ok(v) => CheckReport::assert(name, verdicts_json(&v), v.all(), "not a morphism"),
            Err(e) => CheckReport::fail(name, json!({}), e.to_string()),
        };
        reports.push(rep);
    }
    Ok(Unicity { witness: f, inverse: g, reports })
}

/// Closed-form tables for the four `Mod` variants, built from multiset
/// arithmetic rather than from `r`/`s`.
pub mod closed_forms {
    use super::*;

    fn pair_index(bn: &SymBasis, bp: &SymBasis, m1: &Multiset, m2: &Multiset) -> usize {
        bn.index_of(m1) * bp.rank() + bp.index_of(m2)
    }

    fn int(n: u64) -> Rational {
        Rational::from_integer(n.into())
    }

    /// `[M1] ⊗ [M2] ↦ [M1 ⊎ M2]` with coefficient 1.
    pub fn merge(d: usize, n: usize, p: usize) -> std::result::Result<Matrix<Rational>, SympowError> {
        let (bn, bp, bt) = (SymBasis::new(d, n)?, SymBasis::new(d, p)?, SymBasis::new(d, n + p)?);
        let mut m = Matrix::zeros(bt.rank(), bn.rank() * bp.rank());
        for m1 in bn.multisets() {
            for m2 in bp.multisets() {
                m.set(bt.index_of(&m1.union(m2)), pair_index(&bn, &bp, m1, m2), int(1));
            }
        }
        Ok(m)
    }

    /// `[x_1..x_{n+p}] ↦ Σ_{|A| = n} x_A ⊗ x_{A^c}`.
    pub fn subset_split(d: usize, n: usize, p: usize) -> std::result::Result<Matrix<Rational>, SympowError> {
        let (bn, bp, bt) = (SymBasis::new(d, n)?, SymBasis::new(d, p)?, SymBasis::new(d, n + p)?);
        let mut m = Matrix::zeros(bn.rank() * bp.rank(), bt.rank());
        for (col, big) in bt.multisets().iter().enumerate() {
            let w = big.sorted_word();
            for a in subsets(n + p, n)? {
                let inside: Vec<usize> = a.iter().map(|&i| w[i - 1]).collect();
                let outside: Vec<usize> = (1..=n + p).filter(|i| !a.contains(i)).map(|i| w[i - 1]).collect();
                let row = pair_index(&bn, &bp, &Multiset::from_word(d, &inside), &Multiset::from_word(d, &outside));
                m.add_to(row, col, int(1));
            }
        }
        Ok(m)
    }

    /// `e_M ⊗ e_M' ↦ (Π binom(m_i + m'_i, m_i) / binom(n+p, n)) e_{M ⊎ M'}`.
    pub fn orbit_merge(d: usize, n: usize, p: usize) -> std::result::Result<Matrix<Rational>, SympowError> {
        let (bn, bp, bt) = (SymBasis::new(d, n)?, SymBasis::new(d, p)?, SymBasis::new(d, n + p)?);
        let mut m = Matrix::zeros(bt.rank(), bn.rank() * bp.rank());
        for m1 in bn.multisets() {
            for m2 in bp.multisets() {
                let num = m1
                    .counts()
                    .iter()
                    .zip(m2.counts())
                    .fold(int(1), |acc, (&x, &y)| acc * binomial(x + y, x));
                m.set(bt.index_of(&m1.union(m2)), pair_index(&bn, &bp, m1, m2), num / binomial(n + p, n));
            }
        }
        Ok(m)
    }

    /// `e_M ↦ binom(n+p, n) Σ_{M1 ⊎ M2 = M} e_{M1} ⊗ e_{M2}`.
    pub fn orbit_split(d: usize, n: usize, p: usize) -> std::result::Result<Matrix<Rational>, SympowError> {
        let (bn, bp, bt) = (SymBasis::new(d, n)?, SymBasis::new(d, p)?, SymBasis::new(d, n + p)?);
        let mut m = Matrix::zeros(bn.rank() * bp.rank(), bt.rank());
        for m1 in bn.multisets() {
            for m2 in bp.multisets() {
                m.set(pair_index(&bn, &bp, m1, m2), bt.index_of(&m1.union(m2)), binomial(n + p, n));
            }
        }
        Ok(m)
    }

    /// `φ^n([M]) = (Π m_i! / n!) e_M`, the comparison map from variant 1 to variant 3.
    pub fn phi(d: usize, n: usize) -> std::result::Result<Matrix<Rational>, SympowError> {
        let b = SymBasis::new(d, n)?;
        let mut m = Matrix::zeros(b.rank(), b.rank());
        for (k, ms) in b.multisets().iter().enumerate() {
            m.set(k, k, int(ms.multiplicity_factorials()) / factorial(n));
        }
        Ok(m)
    }
}

/// `G1`-computed tables of the four variants against the closed forms.
pub fn check_variant_formulas(d: usize, n_max: usize) -> Vec<CheckReport> {
    use closed_forms::*;
    let build = |v| build_mod_split(d, n_max, v).map_err(VerifyError::from).and_then(|p| Ok(g1(&p)?));
    let (b1, b2, b3, b4) = match (build(Variant::Sym1), build(Variant::Sym2), build(Variant::Gamma3), build(Variant::Gamma4)) {
        (Ok(a), Ok(b), Ok(c), Ok(e)) => (a, b, c, e),
        _ => return vec![CheckReport::fail("variant", json!({ "d": d, "max_degree": n_max }), "construction failed")],
    };
    let mut out = Vec::new();
    for n in 1..n_max {
        for p in 1..=n_max - n {
            let params = json!({ "d": d, "n": n, "p": p });
            let c = binomial(n + p, n);
            let ci = c.recip();
            let e = |r: std::result::Result<Matrix<Rational>, SympowError>| r.map_err(|e| e.to_string());
            let g = |r: Result<Matrix<Rational>>| r.map_err(|e| e.to_string());
            let sc = |r: std::result::Result<Matrix<Rational>, String>, k: &Rational| {
                r.and_then(|m| m.scale(k).map_err(|e| e.to_string()))
            };
            let cases = [
                ("variant.nabla1", g(b1.nabla(n, p)), e(merge(d, n, p))),
                ("variant.delta1", g(b1.delta(n, p)), e(subset_split(d, n, p))),
                ("variant.nabla2", g(b2.nabla(n, p)), sc(e(merge(d, n, p)), &ci)),
                ("variant.delta2", g(b2.delta(n, p)), sc(e(subset_split(d, n, p)), &c)),
                ("variant.nabla3", g(b3.nabla(n, p)), e(orbit_merge(d, n, p))),
                ("variant.delta3", g(b3.delta(n, p)), e(orbit_split(d, n, p))),
                ("variant.nabla4", g(b4.nabla(n, p)), sc(g(b3.nabla(n, p)), &c)),
                ("variant.delta4", g(b4.delta(n, p)), sc(g(b3.delta(n, p)), &ci)),
            ];
            for (name, lhs, rhs) in cases {
                out.push(CheckReport::compare_results(name, params.clone(), lhs, rhs));
            }
        }
    }
    out
}

/// Coequalizer and equalizer presentations of the splitting at degree `n`.
pub fn check_quotient_factorizations<S: Scalar, R: Rng + ?Sized>(p: &PermSplit<S>, n: usize, rng: &mut R) -> Vec<CheckReport> {
    let params = json!({ "n": n });
    let run = |rng: &mut R| -> Result<(std::result::Result<(), String>, std::result::Result<(), String>)> {
        let d = p.dim();
        let size = d.pow(n as u32);
        let y = rng.gen_range(1..=3);
        let avg = average_blender_matrix::<S>(n, d)?;
        let perms = enumerate_perms(n)?;
        let (r, s) = (p.r(n)?, p.s(n)?);

        let g = Matrix::from_fn(y, size, |_, _| S::sample(rng));
        let f = avg.compose(&g)?;
        let coeq = (|| {
            for sigma in &perms {
                if perm_matrix(sigma, d).compose(&f)? != f {
                    return Ok(Err("f is not invariant".to_string()));
                }
            }
            let phi = s.compose(&f)?;
            if r.compose(&phi)? != f {
                return Ok(Err("f does not factor through r".into()));
            }
            let mut other = phi.clone();
            let (i, j) = (rng.gen_range(0..other.rows()), rng.gen_range(0..other.cols()));
            other.set(i, j, other.get(i, j).perturb());
            if r.compose(&other)? == f {
                return Ok(Err("factorization through r is not unique".into()));
            }
            Ok::<_, GradedError>(Ok(()))
        })()?;

        let g = Matrix::from_fn(size, y, |_, _| S::sample(rng));
        let f = g.compose(&avg)?;
        let eq = (|| {
            for sigma in &perms {
                if f.compose(&perm_matrix(sigma, d))? != f {
                    return Ok(Err("f is not invariant".to_string()));
                }
            }
            let psi = f.compose(r)?;
            if psi.compose(s)? != f {
                return Ok(Err("f does not factor through s".into()));
            }
            let mut other = psi.clone();
            let (i, j) = (rng.gen_range(0..other.rows()), rng.gen_range(0..other.cols()));
            other.set(i, j, other.get(i, j).perturb());
            if other.compose(s)? == f {
                return Ok(Err("factorization through s is not unique".into()));
            }
            Ok::<_, GradedError>(Ok(()))
        })()?;
        Ok((coeq, eq))
    };
    let verdict = |name: &str, r: std::result::Result<(), String>| match r {
        Ok(()) => CheckReport::pass(name, params.clone()),
        Err(note) => CheckReport::fail(name, params.clone(), note),
    };
    match run(rng) {
        Ok((coeq, eq)) => vec![verdict("propsym.coequalizer", coeq), verdict("propsym.equalizer", eq)],
        Err(e) => vec![CheckReport::fail("propsym", params.clone(), e.to_string())],
    }
}

fn blender_eq<S: Scalar>(name: &str, params: &serde_json::Value, d: usize, lhs: Result<Blender>, rhs: Result<Blender>) -> CheckReport {
    CheckReport::compare_results(
        name,
        params.clone(),
        lhs.and_then(|x| x.eval::<S>(d)),
        rhs.and_then(|x| x.eval::<S>(d)),
    )
}

/// The graded-semiring laws of blenders on one random instance, compared as
/// evaluated morphisms on `A^{⊗n}` with `dim A = d`.
pub fn check_blender_laws<S: Scalar, R: Rng + ?Sized>(d: usize, max_order: usize, max_bag: usize, rng: &mut R) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let n = rng.gen_range(0..=max_order);
    let rand = |rng: &mut R, k: usize| Blender::random(rng, k, max_bag);
    let (x, y, z) = match (rand(rng, n), rand(rng, n), rand(rng, n)) {
        (Ok(x), Ok(y), Ok(z)) => (x, y, z),
        _ => return vec![CheckReport::fail("blender", json!({ "n": n }), "sampling failed")],
    };
    let params = json!({
        "n": n,
        "x": x.bag().iter().map(|p| p.images().to_vec()).collect::<Vec<_>>(),
        "y": y.bag().iter().map(|p| p.images().to_vec()).collect::<Vec<_>>(),
        "z": z.bag().iter().map(|p| p.images().to_vec()).collect::<Vec<_>>(),
    });
    let e = |name: &str, l: Result<Blender>, r: Result<Blender>| blender_eq::<S>(name, &params, d, l, r);
    out.push(e("blender.boxplus_comm", x.boxplus(&y), y.boxplus(&x)));
    out.push(e("blender.boxplus_assoc", x.boxplus(&y).and_then(|xy| xy.boxplus(&z)), y.boxplus(&z).and_then(|yz| x.boxplus(&yz))));
    out.push(e("blender.seq_assoc", x.seq(&y).and_then(|xy| xy.seq(&z)), y.seq(&z).and_then(|yz| x.seq(&yz))));
    out.push(e("blender.seq_unit", x.seq(&Blender::identity(n)), Ok(x.clone())));
    out.push(e("blender.seq_unit_left", Blender::identity(n).seq(&x), Ok(x.clone())));
    out.push(e(
        "blender.seq_dist_right",
        x.boxplus(&y).and_then(|s| s.seq(&z)),
        x.seq(&z).and_then(|a| a.boxplus(&y.seq(&z)?)),
    ));
    out.push(e(
        "blender.seq_dist_left",
        x.boxplus(&y).and_then(|s| z.seq(&s)),
        z.seq(&x).and_then(|a| a.boxplus(&z.seq(&y)?)),
    ));
    out.push(e("blender.tensor_unit", Ok(x.tensor(&Blender::identity(0))), Ok(x.clone())));
    out.push(e("blender.tensor_unit_left", Ok(Blender::identity(0).tensor(&x)), Ok(x.clone())));

    // tensor laws with orders summing to at most max_order
    let n1 = rng.gen_range(0..=max_order);
    let n2 = rng.gen_range(0..=max_order - n1);
    let n3 = rng.gen_range(0..=max_order - n1 - n2);
    let sample = (|| Ok::<_, GradedError>((rand(rng, n1)?, rand(rng, n2)?, rand(rng, n3)?, rand(rng, n1)?, rand(rng, n2)?, rand(rng, n1)?)))();
    let Ok((u, v, w, u2, v2, u3)) = sample else {
        out.push(CheckReport::fail("blender.tensor", json!({}), "sampling failed"));
        return out;
    };
    let params = json!({ "orders": [n1, n2, n3] });
    let e = |name: &str, l: Result<Blender>, r: Result<Blender>| blender_eq::<S>(name, &params, d, l, r);
    out.push(e("blender.tensor_assoc", Ok(u.tensor(&v).tensor(&w)), Ok(u.tensor(&v.tensor(&w)))));
    out.push(e(
        "blender.tensor_dist_right",
        u.boxplus(&u2).map(|s| s.tensor(&v)),
        u.tensor(&v).boxplus(&u2.tensor(&v)),
    ));
    out.push(e(
        "blender.tensor_dist_left",
        u.boxplus(&u2).map(|s| v.tensor(&s)),
        v.tensor(&u).boxplus(&v.tensor(&u2)),
    ));
    out.push(e(
        "blender.interchange",
        u.tensor(&v).seq(&u3.tensor(&v2)),
        u.seq(&u3).and_then(|a| Ok(a.tensor(&v.seq(&v2)?))),
    ));
    out
}

/// `s_n;x = s_n` and `x;r_n = r_n` for every singleton blender and some
/// random bags of order `n`.
pub fn check_blender_absorption<S: Scalar, R: Rng + ?Sized>(p: &PermSplit<S>, n: usize, random_bags: usize, rng: &mut R) -> Vec<CheckReport> {
    let params = json!({ "n": n });
    let result = (|| -> Result<Option<String>> {
        let (r, s) = (p.r(n)?, p.s(n)?);
        let mut blenders: Vec<Blender> = enumerate_perms(n)?.into_iter().map(Blender::singleton).collect();
        blenders.push(Blender::full(n)?);
        for _ in 0..random_bags {
            blenders.push(Blender::random(rng, n, 3)?);
        }
        for x in &blenders {
            let m = x.eval::<S>(p.dim())?;
            if s.compose(&m)? != *s {
                return Ok(Some(format!("s_{n} does not absorb {:?}", x.bag())));
            }
            if m.compose(r)? != *r {
                return Ok(Some(format!("r_{n} does not absorb {:?}", x.bag())));
            }
        }
        Ok(None)
    })();
    vec![match result {
        Ok(None) => CheckReport::pass("blender.absorption", params),
        Ok(Some(note)) => CheckReport::fail("blender.absorption", params, note),
        Err(e) => CheckReport::fail("blender.absorption", params, e.to_string()),
    }]
}

/// Named subsets of the suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    Splitting,
    Axiom1,
    Axiom2,
    Examples,
    High1,
    High2,
    High3,
    Assoc,
    Lemmas,
    Bijec,
    Morphisms,
    Unicity,
    Blenders,
    Propsym,
    Variants,
    Laws,
}

impl Suite {
    pub const NAMES: [(&'static str, Suite); 17] = [
        ("all", Suite::All),
        ("splitting", Suite::Splitting),
        ("axiom1", Suite::Axiom1),
        ("axiom2", Suite::Axiom2),
        ("examples", Suite::Examples),
        ("high1", Suite::High1),
        ("high2", Suite::High2),
        ("high3", Suite::High3),
        ("assoc", Suite::Assoc),
        ("lemmas", Suite::Lemmas),
        ("bijec", Suite::Bijec),
        ("morphisms", Suite::Morphisms),
        ("unicity", Suite::Unicity),
        ("blenders", Suite::Blenders),
        ("propsym", Suite::Propsym),
        ("variants", Suite::Variants),
        ("laws", Suite::Laws),
    ];

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Suite::NAMES
            .iter()
            .find(|(name, _)| *name == s)
            .map(|(_, v)| *v)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::NAMES.iter().map(|(n, _)| *n).collect();
                format!("unknown suite {s:?}; expected one of {}", names.join(", "))
            })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = Suite::NAMES.iter().find(|(_, v)| v == self).map(|(n, _)| *n).unwrap_or("?");
        f.write_str(name)
    }
}

/// A structure handed to [`run_suite`].
#[derive(Clone, Debug)]
pub enum Structure<S> {
    Split(PermSplit<S>),
    Bimonoid(BinGrBimon<S>),
}

/// Scalars the suite can run over; model-specific checks hook in here.
pub trait SuiteScalar: Invertible {
    /// A random invertible `d x d` matrix.
    fn sample_invertible<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix<Self> {
        let perms = enumerate_perms(d).expect("small dimension");
        let sigma = &perms[rng.gen_range(0..perms.len())];
        Matrix::from_fn(d, d, |i, j| if sigma.apply(j + 1) == i + 1 { Self::one() } else { Self::zero() })
    }

    fn model_checks(_p: &PermSplit<Self>, _max_total: usize, _seed: u64) -> Vec<CheckReport> {
        Vec::new()
    }
}

impl SuiteScalar for crate::scalar::Boolean {}

impl SuiteScalar for Rational {
    fn sample_invertible<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix<Self> {
        loop {
            let m = Matrix::from_fn(d, d, |_, _| Rational::sample(rng));
            if Rational::inverse(&m).is_some() {
                return m;
            }
        }
    }

    /// Closed forms of all variants, and the three stated isomorphisms between them.
    fn model_checks(p: &PermSplit<Self>, max_total: usize, _seed: u64) -> Vec<CheckReport> {
        let d = p.dim();
        let n = max_total.min(p.max_degree());
        if n < 2 {
            return Vec::new();
        }
        let mut out = check_variant_formulas(d, n);
        out.extend(check_variant_isomorphisms(d, n));
        if p.variant() == Some("gamma3") || p.variant() == Some("gamma4") {
            out.extend(gamma_embedding_check(p));
        }
        out
    }
}

/// The explicit isomorphisms between variants: `(1/n!) Id`, `n! Id`, `φ`.
pub fn check_variant_isomorphisms(d: usize, n_max: usize) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let pairs = [
        (Variant::Sym1, Variant::Sym2, "sym1->sym2"),
        (Variant::Gamma3, Variant::Gamma4, "gamma3->gamma4"),
        (Variant::Sym1, Variant::Gamma3, "sym1->gamma3"),
    ];
    for (v1, v2, label) in pairs {
        let params = json!({ "d": d, "max_degree": n_max, "pair": label });
        let (p1, p2) = match (build_mod_split(d, n_max, v1), build_mod_split(d, n_max, v2)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                out.push(CheckReport::fail("unicity", params, e.to_string()));
                continue;
            }
        };
        let u = match check_unicity(&p1, &p2, &Matrix::identity(d)) {
            Ok(u) => u,
            Err(e) => {
                out.push(CheckReport::fail("unicity", params, e.to_string()));
                continue;
            }
        };
        out.extend(u.reports.into_iter().map(|mut r| {
            r.params["pair"] = json!(label);
            r
        }));
        for n in 1..=n_max {
            let expected = match v2 {
                Variant::Sym2 => Matrix::identity(p1.rank(n)).scale(&factorial(n).recip()),
                Variant::Gamma4 => Matrix::identity(p1.rank(n)).scale(&factorial(n)),
                _ => closed_forms::phi(d, n).map_err(|e| crate::matrix::MatrixError::Decode(e.to_string())),
            };
            let params = json!({ "pair": label, "n": n });
            out.push(CheckReport::compare_results("unicity.witness", params, Ok(u.witness.component(n).clone()), expected));
        }
    }
    out
}

type Task<'a> = Box<dyn Fn() -> Vec<CheckReport> + Send + Sync + 'a>;

fn task_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Every check of `suite` over all parameters with total degree up to
/// `max_total`. Randomized checks are seeded from `seed`; output order is
/// deterministic.
pub fn run_suite<S: SuiteScalar>(structure: &Structure<S>, suite: Suite, max_total: usize, seed: u64) -> Vec<CheckReport> {
    let (split, bimon, given_split) = match structure {
        Structure::Split(p) => match g1(p) {
            Ok(b) => (Ok(p.clone()), Ok(b), true),
            Err(e) => (Ok(p.clone()), Err(e), true),
        },
        Structure::Bimonoid(b) => (f1(b), Ok(b.clone()), false),
    };
    let n_max = match structure {
        Structure::Split(p) => p.max_degree(),
        Structure::Bimonoid(b) => b.max_degree(),
    };
    let t = max_total.min(n_max);

    let mut tasks: Vec<(Suite, Task)> = Vec::new();
    let failed = |name: &'static str, e: &GradedError| -> Vec<CheckReport> { vec![CheckReport::fail(name, json!({}), e.to_string())] };

    match &split {
        Ok(p) => {
            for n in 2..=t {
                tasks.push((Suite::Splitting, Box::new(move || check_splitting(p, n))));
            }
            if given_split {
                tasks.push((Suite::Bijec, Box::new(move || vec![check_split_round_trip(p)])));
            }
            tasks.push((Suite::Lemmas, Box::new(move || check_lemma_suite(p, t))));
            for n in 2..=t.min(4) {
                tasks.push((Suite::Propsym, Box::new(move || check_quotient_factorizations(p, n, &mut task_rng(seed, 1000 + n)))));
                tasks.push((Suite::Blenders, Box::new(move || check_blender_absorption(p, n, 5, &mut task_rng(seed, 2000 + n)))));
            }
            for k in 0..5 {
                tasks.push((
                    Suite::Morphisms,
                    Box::new(move || {
                        let mut rng = task_rng(seed, 3000 + k);
                        let f = Matrix::from_fn(p.dim(), p.dim(), |_, _| S::sample(&mut rng));
                        check_morphism_equivalences(&f, p, p, &mut rng)
                    }),
                ));
            }
            tasks.push((
                Suite::Unicity,
                Box::new(move || {
                    let mut rng = task_rng(seed, 4000);
                    let f = S::sample_invertible(p.dim(), &mut rng);
                    match check_unicity(p, p, &f) {
                        Ok(u) => u.reports,
                        Err(e) => vec![CheckReport::fail("unicity", json!({}), e.to_string())],
                    }
                }),
            ));
            tasks.push((Suite::Variants, Box::new(move || S::model_checks(p, t, seed))));
        }
        Err(e) => {
            for s in [Suite::Splitting, Suite::Lemmas, Suite::Propsym, Suite::Morphisms, Suite::Unicity] {
                tasks.push((s, Box::new(move || failed("splitting", e))));
            }
        }
    }

    match &bimon {
        Ok(b) => {
            for total in 1..=t {
                for n in 0..=total {
                    for q in 0..=total {
                        let (p, r) = (total - n, total - q);
                        tasks.push((Suite::Axiom1, Box::new(move || vec![check_axiom1(b, n, p, q, r)])));
                    }
                }
                for rows in compositions(total) {
                    for cols in compositions(total) {
                        let rows = rows.clone();
                        tasks.push((Suite::High1, Box::new(move || vec![check_higher_compat(b, &rows, &cols)])));
                    }
                }
                tasks.push((Suite::High2, Box::new(move || check_permutation_wirings(b, total))));
                tasks.push((Suite::High3, Box::new(move || vec![check_split_merge_ones(b, total)])));
            }
            for n in 1..t {
                for p in 1..=t - n {
                    tasks.push((Suite::Axiom2, Box::new(move || vec![check_axiom2(b, n, p)])));
                    tasks.push((Suite::Examples, Box::new(move || vec![check_leibniz(b, n, p, "example2")])));
                }
            }
            if t >= 2 {
                tasks.push((Suite::Examples, Box::new(move || vec![check_example_swap(b)])));
            }
            tasks.push((Suite::Assoc, Box::new(move || check_assoc_suite(b, t))));
            if !given_split {
                tasks.push((Suite::Bijec, Box::new(move || vec![check_bimonoid_round_trip(b)])));
            }
        }
        Err(e) => {
            for s in [Suite::Axiom1, Suite::Axiom2, Suite::High1, Suite::Assoc] {
                tasks.push((s, Box::new(move || failed("bimonoid", e))));
            }
        }
    }

    let d = match &bimon {
        Ok(b) => b.dim(),
        Err(_) => 1,
    };
    for k in 0..10 {
        tasks.push((Suite::Blenders, Box::new(move || check_blender_laws::<S, _>(d, 4, 3, &mut task_rng(seed, 5000 + k)))));
    }
    tasks.push((
        Suite::Laws,
        Box::new(move || {
            check_all_laws(&MatCat::<S>::new(), seed)
                .into_iter()
                .map(|l| CheckReport::assert(format!("laws.{}", l.law), json!({ "trials": l.trials }), l.passed(), l.failures.join("; ")))
                .collect()
        }),
    ));

    tasks
        .into_par_iter()
        .filter(|(s, _)| suite.includes(*s))
        .map(|(_, task)| task())
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Table;
    use crate::scalar::{rat, Boolean};
    use crate::sympow::build_rel_split;

    fn sym1(d: usize, n: usize) -> PermSplit<Rational> {
        build_mod_split(d, n, Variant::Sym1).unwrap()
    }

    #[test]
    fn axiom1_examples() {
        let b = g1(&sym1(2, 3)).unwrap();
        assert!(check_axiom1(&b, 1, 1, 1, 1).passed());
        assert!(check_axiom1(&b, 2, 1, 1, 2).passed());
        assert!(check_axiom1(&b, 0, 3, 2, 1).passed());
        let rel = g1(&build_rel_split(2, 3).unwrap()).unwrap();
        assert!(check_axiom1(&rel, 2, 1, 1, 2).passed());
        assert!(!check_axiom1(&b, 1, 1, 2, 1).passed());
    }

    #[test]
    fn tables_reduce_to_axiom1() {
        let b = g1(&sym1(2, 3)).unwrap();
        assert_eq!(table_sum(&b, &[1, 1], &[1, 1]).unwrap(), axiom1_rhs(&b, 1, 1, 1, 1).unwrap());
        assert!(check_higher_compat(&b, &[1, 1, 1], &[1, 1, 1]).passed());
        assert!(check_higher_compat(&b, &[2, 1], &[1, 2]).passed());
        assert!(check_permutation_wirings(&b, 3).iter().all(CheckReport::passed));
        assert!(check_split_merge_ones(&b, 1).passed());
        assert!(check_split_merge_ones(&b, 3).passed());
    }

    #[test]
    fn table_permutation_orientation() {
        let t = NatMatrix::new(3, 3, vec![0, 1, 0, 0, 0, 1, 1, 0, 0]);
        // column 0 has its 1 in row 2, so σ(1) = 3
        assert_eq!(table_permutation(&t).unwrap().images(), &[3, 1, 2]);
        assert_eq!(table_permutation(&NatMatrix::new(1, 1, vec![2])), None);
    }

    #[test]
    fn zeroed_delta_fails_axiom2() {
        let b = g1(&sym1(2, 3)).unwrap();
        let broken = b.with_table(Table::Delta, 1, 1, Matrix::zeros(4, 3)).unwrap();
        let reports = run_suite(&Structure::Bimonoid(broken), Suite::Axiom2, 3, 0);
        let bad: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].params, json!({ "n": 1, "p": 1 }));
    }

    #[test]
    fn morphism_examples() {
        let p = sym1(2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let reps = check_morphism_equivalences(&Matrix::identity(2), &p, &p, &mut rng);
        assert!(reps.iter().all(CheckReport::passed), "{reps:?}");
        let f = Matrix::from_fn(2, 2, |_, _| Rational::sample(&mut rng));
        assert!(check_morphism_equivalences(&f, &p, &p, &mut rng).iter().all(CheckReport::passed));
    }

    #[test]
    fn unicity_witnesses() {
        let (p1, p2) = (sym1(2, 4), build_mod_split(2, 4, Variant::Sym2).unwrap());
        let u = check_unicity(&p1, &p2, &Matrix::identity(2)).unwrap();
        assert!(u.reports.iter().all(CheckReport::passed));
        assert_eq!(u.witness.component(3), &Matrix::identity(4).scale(&rat(1, 6)).unwrap());
        let same = check_unicity(&p1, &p1, &Matrix::identity(2)).unwrap();
        for n in 1..=4 {
            assert_eq!(same.witness.component(n), &Matrix::identity(p1.rank(n)));
        }
        let singular = Matrix::from_fn(2, 2, |_, _| rat(1, 1));
        assert!(matches!(check_unicity(&p1, &p2, &singular), Err(VerifyError::NotInvertible)));
    }

    #[test]
    fn variant_examples() {
        let b1 = g1(&sym1(2, 2)).unwrap();
        // ∇^(1)_{1,1}([x],[y]) = [x,y]
        assert_eq!(b1.nabla(1, 1).unwrap().get(1, 1), &rat(1, 1));
        let b2 = g1(&build_mod_split(2, 2, Variant::Sym2).unwrap()).unwrap();
        assert_eq!(b2.nabla(1, 1).unwrap().get(1, 1), &rat(1, 2));
        assert!(check_variant_formulas(2, 4).iter().all(CheckReport::passed));
    }

    #[test]
    fn lemma_suite_small() {
        let reps = check_lemma_suite(&sym1(2, 4), 4);
        let bad: Vec<_> = reps.iter().filter(|r| !r.passed()).map(|r| (&r.check, &r.params)).collect();
        assert!(bad.is_empty(), "{bad:?}");
        let rel = check_lemma_suite(&build_rel_split(2, 4).unwrap(), 4);
        assert!(rel.iter().all(CheckReport::passed));
    }

    #[test]
    fn assoc_suite_small() {
        let b = g1(&sym1(2, 4)).unwrap();
        let reps = check_assoc_suite(&b, 4);
        let bad: Vec<_> = reps.iter().filter(|r| !r.passed()).map(|r| (&r.check, &r.params)).collect();
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn factorizations_and_blenders() {
        let p = sym1(2, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 2..=4 {
            assert!(check_quotient_factorizations(&p, n, &mut rng).iter().all(CheckReport::passed));
            assert!(check_blender_absorption(&p, n, 3, &mut rng).iter().all(CheckReport::passed));
        }
        let rel = build_rel_split(2, 3).unwrap();
        assert!(check_quotient_factorizations(&rel, 3, &mut rng).iter().all(CheckReport::passed));
        for _ in 0..5 {
            assert!(check_blender_laws::<Boolean, _>(2, 3, 3, &mut rng).iter().all(CheckReport::passed));
        }
    }

    #[test]
    fn suite_is_deterministic() {
        let s = Structure::Split(sym1(2, 3));
        let a = run_suite(&s, Suite::All, 3, 42);
        let b = run_suite(&s, Suite::All, 3, 42);
        assert_eq!(a, b);
        let bad: Vec<_> = a.iter().filter(|r| !r.passed()).map(|r| (&r.check, &r.params, &r.witness)).collect();
        assert!(bad.is_empty(), "{bad:?}");
        let only: Vec<_> = run_suite(&s, Suite::High1, 3, 42);
        assert!(only.iter().all(|r| r.check == "high1"));
    }

    #[test]
    fn compositions_count() {
        for t in 1..=6 {
            assert_eq!(compositions(t).len(), 1 << (t - 1));
        }
    }
}
