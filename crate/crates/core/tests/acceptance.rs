//! End-to-end acceptance suite. Every comparison is exact; each criterion
//! prints one PASS/FAIL line and the process exits nonzero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spml_core::category::{LinearCategory, MatCat};
use spml_core::combinat::{contingency_tables, enumerate_multisets, enumerate_perms, subsets, Multiset, NatMatrix, Permutation};
use spml_core::dsl::{self, Binding, Expr, ExprSampler};
use spml_core::graded::{g1, PermSplit};
use spml_core::matrix::{perm_matrix, Matrix};
use spml_core::scalar::{binomial, factorial, Boolean, Rational, Scalar};
use spml_core::sympow::{build_mod_split, build_rel_split, Variant};
use spml_core::verify::{self, compositions, run_suite, Structure, Suite, SuiteScalar};
use spml_core::CheckReport;

const N: usize = 5;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn all_pass(reports: &[CheckReport]) -> Outcome {
    match reports.iter().find(|r| !r.passed()) {
        None => Ok(format!("{} checks", reports.len())),
        Some(r) => Err(format!("{} {} {:?}", r.check, r.params, r.witness.as_ref().and_then(|w| w.note.clone()))),
    }
}

fn mod_splits(n: usize) -> Vec<(String, PermSplit<Rational>)> {
    Variant::ALL
        .iter()
        .map(|&v| (v.to_string(), build_mod_split(2, n, v).expect("construction")))
        .collect()
}

fn rel_split(n: usize) -> PermSplit<Boolean> {
    build_rel_split(2, n).expect("construction")
}

fn suite_everywhere(suite: Suite, max_total: usize) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for (_, p) in mod_splits(N) {
        out.extend(run_suite(&Structure::Split(p), suite, max_total, 1));
    }
    out.extend(run_suite(&Structure::Split(rel_split(N)), suite, max_total, 1));
    out
}

fn criterion1() -> Outcome {
    let mut reps = Vec::new();
    for (_, p) in mod_splits(N) {
        for n in 2..=N {
            reps.extend(verify::check_splitting(&p, n));
        }
    }
    let rel = rel_split(N);
    for n in 2..=N {
        reps.extend(verify::check_splitting(&rel, n));
    }
    // independent oracle for the symmetrizer: explicit sum over S_n
    for (_, p) in mod_splits(4) {
        for n in 2..=4 {
            let sum = enumerate_perms(n)
                .unwrap()
                .iter()
                .fold(Matrix::zeros(1 << n, 1 << n), |acc, s| acc.add(&perm_matrix(s, 2)).unwrap());
            let avg = sum.scale(&factorial(n).recip()).unwrap();
            reps.push(CheckReport::compare("symmetrizer", serde_json::json!({ "n": n }), &p.r(n).unwrap().compose(p.s(n).unwrap()).unwrap(), &avg));
        }
    }
    all_pass(&reps)
}

fn criterion2() -> Outcome {
    let mut reps = suite_everywhere(Suite::Axiom1, N);
    reps.extend(suite_everywhere(Suite::Axiom2, N));
    all_pass(&reps)
}

fn criterion3() -> Outcome {
    let mut reps = Vec::new();
    let b = g1(&build_mod_split(2, N, Variant::Sym1).unwrap()).unwrap();
    let rel = g1(&rel_split(N)).unwrap();
    for total in 1..=N {
        for rows in compositions(total) {
            for cols in compositions(total) {
                reps.push(verify::check_higher_compat(&b, &rows, &cols));
                reps.push(verify::check_higher_compat(&rel, &rows, &cols));
            }
        }
        reps.extend(verify::check_permutation_wirings(&b, total));
        reps.extend(verify::check_permutation_wirings(&rel, total));
        reps.push(verify::check_split_merge_ones(&b, total));
        reps.push(verify::check_split_merge_ones(&rel, total));
    }
    // tuples containing zero grades
    for (rows, cols) in [(vec![0, 2], vec![1, 0, 1]), (vec![2, 0, 1], vec![3]), (vec![0], vec![0, 0])] {
        reps.push(verify::check_higher_compat(&b, &rows, &cols));
    }
    all_pass(&reps)
}

fn criterion4() -> Outcome {
    let mut reps = Vec::new();
    for d in 1..=2 {
        for n in 2..=N {
            for v in Variant::ALL {
                let p = build_mod_split(d, n, v).unwrap();
                reps.push(verify::check_split_round_trip(&p));
                reps.push(verify::check_bimonoid_round_trip(&g1(&p).unwrap()));
            }
            let p = build_rel_split(d, n).unwrap();
            reps.push(verify::check_split_round_trip(&p));
            reps.push(verify::check_bimonoid_round_trip(&g1(&p).unwrap()));
        }
    }
    all_pass(&reps)
}

fn criterion5() -> Outcome {
    let b = g1(&build_mod_split(2, N, Variant::Sym1).unwrap()).unwrap();
    let mut reps = vec![verify::check_example_swap(&b)];
    for n in 1..N {
        for p in 1..=N - n {
            reps.push(verify::check_leibniz(&b, n, p, "example2"));
        }
    }
    all_pass(&reps)
}

fn criterion6() -> Outcome {
    let mut reps = suite_everywhere(Suite::Assoc, N);
    reps.extend(suite_everywhere(Suite::Lemmas, N));
    for name in ["assoc.nabla", "assoc.delta", "comm.nabla", "cor1.nabla", "cor2.delta", "lemma.rec", "lemma.transposition", "lemma.leibniz", "lemma.shift_left", "lemma.shift_right"] {
        if !reps.iter().any(|r| r.check == name) {
            return Err(format!("no {name} checks ran"));
        }
    }
    all_pass(&reps)
}

fn morphism_round<S: SuiteScalar>(a: &PermSplit<S>, b: &PermSplit<S>, seed: u64) -> Vec<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f1 = Matrix::from_fn(b.dim(), a.dim(), |_, _| S::sample(&mut rng));
    verify::check_morphism_equivalences(&f1, a, b, &mut rng)
}

fn criterion7() -> Outcome {
    let splits = mod_splits(4);
    let rel = rel_split(4);
    let mut reps = Vec::new();
    for seed in 0..20u64 {
        let (a, b) = (&splits[seed as usize % 4].1, &splits[(seed as usize / 4) % 4].1);
        reps.extend(morphism_round(a, b, seed));
        reps.extend(morphism_round(&rel, &rel, 100 + seed));
    }
    let corrupt = reps.iter().filter(|r| r.check == "morphism.corrupt").count();
    if corrupt != 40 {
        return Err(format!("expected 40 corrupted families, ran {corrupt}"));
    }
    all_pass(&reps)
}

fn criterion8() -> Outcome {
    let reps = verify::check_variant_isomorphisms(2, 4);
    if reps.iter().filter(|r| r.check == "unicity.witness").count() != 12 {
        return Err("missing witness comparisons".into());
    }
    all_pass(&reps)
}

fn criterion9() -> Outcome {
    let mut reps = verify::check_variant_formulas(2, N);
    reps.extend(verify::check_variant_formulas(1, N));
    reps.extend(verify::check_variant_formulas(3, 4));
    all_pass(&reps)
}

fn criterion10() -> Outcome {
    let mut reps = Vec::new();
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        reps.extend(verify::check_blender_laws::<Rational, _>(2, 4, 3, &mut rng));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        reps.extend(verify::check_blender_laws::<Boolean, _>(2, 4, 3, &mut rng));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (_, p) in mod_splits(N) {
        for n in 1..=4 {
            reps.extend(verify::check_blender_absorption(&p, n, 10, &mut rng));
        }
    }
    let rel = rel_split(N);
    for n in 1..=4 {
        reps.extend(verify::check_blender_absorption(&rel, n, 10, &mut rng));
    }
    all_pass(&reps)
}

fn criterion11() -> Outcome {
    let mut reps = Vec::new();
    let rel = rel_split(4);
    for (_, p) in mod_splits(4) {
        for n in 2..=4 {
            for seed in 0..20u64 {
                reps.extend(verify::check_quotient_factorizations(&p, n, &mut ChaCha8Rng::seed_from_u64(seed)));
            }
        }
    }
    for n in 2..=4 {
        for seed in 0..20u64 {
            reps.extend(verify::check_quotient_factorizations(&rel, n, &mut ChaCha8Rng::seed_from_u64(seed)));
        }
    }
    all_pass(&reps)
}

/// Weak compositions of `total` into `len` parts.
fn weak_compositions(total: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=total)
        .flat_map(|first| {
            weak_compositions(total - first, len - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// All tables with the given margins, by filtering products of row choices.
fn brute_force_tables(rows: &[usize], cols: &[usize]) -> BTreeSet<Vec<usize>> {
    let mut acc: Vec<Vec<usize>> = vec![vec![]];
    for &r in rows {
        let choices: Vec<Vec<usize>> = weak_compositions(r, cols.len())
            .into_iter()
            .filter(|row| row.iter().zip(cols).all(|(x, c)| x <= c))
            .collect();
        acc = acc
            .iter()
            .flat_map(|prefix| choices.iter().map(move |row| [prefix.clone(), row.clone()].concat()))
            .collect();
    }
    acc.into_iter()
        .filter(|flat| (0..cols.len()).all(|j| (0..rows.len()).map(|i| flat[i * cols.len() + j]).sum::<usize>() == cols[j]))
        .collect()
}

fn criterion12() -> Outcome {
    let mut margins: Vec<Vec<usize>> = Vec::new();
    for total in 0..=6 {
        margins.extend(compositions(total));
        for len in 1..=3 {
            margins.extend(weak_compositions(total, len).into_iter().filter(|m| m.contains(&0)));
        }
    }
    let mut pairs = 0;
    for rows in &margins {
        for cols in &margins {
            if rows.iter().sum::<usize>() != cols.iter().sum::<usize>() {
                continue;
            }
            pairs += 1;
            let got: Vec<NatMatrix> = contingency_tables(rows, cols).map_err(|e| e.to_string())?;
            let got_set: BTreeSet<Vec<usize>> = got.iter().map(|t| t.entries().to_vec()).collect();
            if got_set.len() != got.len() {
                return Err(format!("duplicate tables for {rows:?} / {cols:?}"));
            }
            if got_set != brute_force_tables(rows, cols) {
                return Err(format!("tables differ for {rows:?} / {cols:?}"));
            }
        }
    }
    for d in 1..=4 {
        for n in 0..=6 {
            let ms = enumerate_multisets(d, n).map_err(|e| e.to_string())?;
            if Rational::from_integer(ms.len().into()) != binomial(d + n - 1, n) {
                return Err(format!("multiset count d={d} n={n}"));
            }
            // oracle: distinct sorted words over all d^n words
            let mut brute = BTreeSet::new();
            for code in 0..d.pow(n as u32) {
                let word: Vec<usize> = (0..n).map(|k| code / d.pow(k as u32) % d).collect();
                brute.insert(Multiset::from_word(d, &word));
            }
            if brute != ms.iter().cloned().collect() {
                return Err(format!("multisets differ d={d} n={n}"));
            }
        }
    }
    for n in 0..=7 {
        for k in 0..=n {
            let s = subsets(n, k).map_err(|e| e.to_string())?;
            if Rational::from_integer(s.len().into()) != binomial(n, k) || s.iter().collect::<BTreeSet<_>>().len() != s.len() {
                return Err(format!("subset count n={n} k={k}"));
            }
        }
        let perms = enumerate_perms(n).map_err(|e| e.to_string())?;
        if Rational::from_integer(perms.len().into()) != factorial(n) {
            return Err(format!("permutation count n={n}"));
        }
    }
    Ok(format!("{pairs} margin pairs"))
}

// Text builders for the interface checks of criterion 13.

fn tensor_all(es: Vec<Expr>) -> Expr {
    es.into_iter().reduce(Expr::tensor).unwrap_or(Expr::Id(vec![0]))
}

fn higher_nabla_expr(grades: &[usize]) -> Expr {
    match grades {
        [] => Expr::Id(vec![0]),
        [g] => Expr::Id(vec![*g]),
        [a, b] => Expr::Nabla(*a, *b),
        _ => {
            let k = grades.len() - 1;
            let head: usize = grades[..k].iter().sum();
            Expr::seq(Expr::tensor(higher_nabla_expr(&grades[..k]), Expr::Id(vec![grades[k]])), Expr::Nabla(head, grades[k]))
        }
    }
}

fn higher_delta_expr(grades: &[usize]) -> Expr {
    match grades {
        [] => Expr::Id(vec![0]),
        [g] => Expr::Id(vec![*g]),
        [a, b] => Expr::Delta(*a, *b),
        _ => {
            let k = grades.len() - 1;
            let head: usize = grades[..k].iter().sum();
            Expr::seq(Expr::Delta(head, grades[k]), Expr::tensor(higher_delta_expr(&grades[..k]), Expr::Id(vec![grades[k]])))
        }
    }
}

/// The symmetry permuting graded factors (output factor `j` is input factor
/// `σ(j)`), written with `s`, a strand permutation and `r`.
fn wire_expr(grades: &[usize], sigma: &[usize]) -> Expr {
    let starts: Vec<usize> = grades.iter().scan(0, |acc, &g| {
        let s = *acc;
        *acc += g;
        Some(s)
    }).collect();
    let images: Vec<usize> = sigma
        .iter()
        .flat_map(|&src| (0..grades[src - 1]).map(|o| starts[src - 1] + o + 1).collect::<Vec<_>>())
        .collect();
    let split = tensor_all(grades.iter().map(|&g| Expr::S(g)).collect());
    let merge = tensor_all(sigma.iter().map(|&src| Expr::R(grades[src - 1])).collect());
    if images.is_empty() {
        return Expr::Id(vec![0]);
    }
    Expr::seq(Expr::seq(split, Expr::Sym(Permutation::new(images).unwrap())), merge)
}

fn higher_compat_expr(rows: &[usize], cols: &[usize]) -> (Expr, Expr) {
    let lhs = Expr::seq(higher_nabla_expr(rows), higher_delta_expr(cols));
    let (q, r) = (rows.len(), cols.len());
    let terms: Vec<Expr> = contingency_tables(rows, cols)
        .unwrap()
        .iter()
        .map(|t| {
            let split = tensor_all((0..q).map(|a| higher_delta_expr(t.row(a))).collect());
            let merge = tensor_all((0..r).map(|c| higher_nabla_expr(&t.column(c))).collect());
            let sigma: Vec<usize> = (0..r).flat_map(|b| (0..q).map(move |a| a * r + b + 1)).collect();
            Expr::seq(Expr::seq(split, wire_expr(t.entries(), &sigma)), merge)
        })
        .collect();
    (lhs, terms.into_iter().reduce(Expr::sum).unwrap())
}

fn text_equation<S: Scalar>(lhs: &Expr, rhs: &Expr, binding: &Binding<S>) -> Result<CheckReport, String> {
    let l = dsl::parse(&lhs.to_string()).map_err(|e| e.to_string())?;
    let r = dsl::parse(&rhs.to_string()).map_err(|e| e.to_string())?;
    dsl::check_equation(&l.expr, &r.expr, binding).map_err(|e| e.to_string())
}

fn compositional<S: Scalar>(e: &Expr, binding: &Binding<S>) -> bool {
    let cat = MatCat::<S>::new();
    let ev = |x: &Expr| dsl::evaluate(x, binding).unwrap();
    let here = ev(e);
    let (p, b) = (binding.split(), binding.bimonoid());
    match e {
        Expr::Id(g) => here == Matrix::identity(b.word_rank(g)),
        Expr::Nabla(n, q) => here == b.nabla(*n, *q).unwrap(),
        Expr::Delta(n, q) => here == b.delta(*n, *q).unwrap(),
        Expr::R(n) => &here == p.r(*n).unwrap(),
        Expr::S(n) => &here == p.s(*n).unwrap(),
        Expr::Sym(s) => here == perm_matrix(s, b.dim()),
        Expr::Scale(q, x) => here == cat.scale(q, &ev(x)).unwrap() && compositional(x, binding),
        Expr::Seq(x, y) => here == cat.compose(&ev(x), &ev(y)).unwrap() && compositional(x, binding) && compositional(y, binding),
        Expr::Tensor(x, y) => here == cat.tensor(&ev(x), &ev(y)) && compositional(x, binding) && compositional(y, binding),
        Expr::Sum(x, y) => here == cat.add(&ev(x), &ev(y)).unwrap() && compositional(x, binding) && compositional(y, binding),
    }
}

fn criterion13() -> Outcome {
    let q = Binding::from_split(build_mod_split(2, N, Variant::Sym1).unwrap()).map_err(|e| e.to_string())?;
    let rel = Binding::from_split(rel_split(N)).map_err(|e| e.to_string())?;
    let sampler = ExprSampler::default();
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let depth = rng.gen_range(1..=4);
        let e = sampler.sample(&mut rng, depth);
        let text = e.to_string();
        let back = dsl::parse_untyped(&text).map_err(|err| format!("seed {seed}: {err} in {text}"))?;
        if back != e {
            return Err(format!("seed {seed}: round trip changed {text}"));
        }
        if !compositional(&e, &q) || !compositional(&e, &rel) {
            return Err(format!("seed {seed}: evaluation not compositional for {text}"));
        }
    }

    let mut reps = Vec::new();
    for total in 1..=N {
        for rows in compositions(total) {
            for cols in compositions(total) {
                let (l, r) = higher_compat_expr(&rows, &cols);
                reps.push(text_equation(&l, &r, &q)?);
            }
        }
        let ones = vec![1; total];
        let lhs = Expr::seq(higher_nabla_expr(&ones), higher_delta_expr(&ones));
        let perms = enumerate_perms(total).unwrap().into_iter().map(Expr::Sym).reduce(Expr::sum).unwrap();
        reps.push(text_equation(&lhs, &perms, &q)?);
        let lhs = Expr::seq(higher_delta_expr(&ones), higher_nabla_expr(&ones));
        reps.push(text_equation(&lhs, &Expr::scale(factorial(total), Expr::Id(vec![total])), &q)?);
    }

    let swap = (dsl::parse("nabla(1,1) ; delta(1,1)").unwrap(), dsl::parse("id(1,1) + sym([2 1])").unwrap());
    reps.push(dsl::check_equation(&swap.0.expr, &swap.1.expr, &q).map_err(|e| e.to_string())?);
    for n in 1..N {
        for p in 1..=N - n {
            let lhs = format!("nabla({n},{p}) ; delta({},1)", n + p - 1);
            let gamma = wire_expr(&[1, p], &[2, 1]);
            let rhs = format!(
                "(delta({},1) * id({p})) ; (id({}) * ({gamma})) ; (nabla({},{p}) * id(1)) + (id({n}) * delta({},1)) ; (nabla({n},{}) * id(1))",
                n - 1,
                n - 1,
                n - 1,
                p - 1,
                p - 1
            );
            let (l, r) = (dsl::parse(&lhs).map_err(|e| e.to_string())?, dsl::parse(&rhs).map_err(|e| e.to_string())?);
            reps.push(dsl::check_equation(&l.expr, &r.expr, &q).map_err(|e| e.to_string())?);
        }
    }
    all_pass(&reps).map(|s| format!("200 random expressions, {s}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("splitting axioms", criterion1),
        ("bimonoid axioms of G1", criterion2),
        ("higher compatibility", criterion3),
        ("F1/G1 round trips", criterion4),
        ("example equations", criterion5),
        ("associativity and lemma suites", criterion6),
        ("morphism equivalences", criterion7),
        ("unicity witnesses", criterion8),
        ("variant closed forms", criterion9),
        ("blender laws", criterion10),
        ("coequalizer and equalizer", criterion11),
        ("combinatorial oracles", criterion12),
        ("diagram language", criterion13),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}, {secs:.2}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
