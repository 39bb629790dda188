//! A small typed language for graded string-diagram expressions.
//!
//! ```text
//! expr    := sumterm { "+" sumterm }
//! sumterm := seqterm { ";" seqterm }
//! seqterm := factor { "*" factor }
//! factor  := [ rational "." ] atom
//! atom    := "id(" nat {"," nat} ")" | "nabla(" nat "," nat ")" | "delta(" nat "," nat ")"
//!          | "r(" nat ")" | "s(" nat ")" | "sym([" nat {" " nat} "])" | "(" expr ")"
//! ```
//!
//! `;` is diagrammatic composition, `*` is tensor, `+` is sum. Grade words are
//! compared after erasing grade-0 strands.

use std::fmt;

use num_bigint::BigInt;
use rand::Rng;
use serde_json::json;
use thiserror::Error;

use crate::category::{LinearCategory, MatCat};
use crate::combinat::Permutation;
use crate::graded::{f1, g1, BinGrBimon, GradedError, PermSplit};
use crate::matrix::Matrix;
use crate::report::CheckReport;
use crate::scalar::{Rational, Scalar};

/// Grades of a tensor product of graded objects; `0` is the unit.
pub type GradeWord = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Id(GradeWord),
    Nabla(usize, usize),
    Delta(usize, usize),
    R(usize),
    S(usize),
    Sym(Permutation),
    Scale(Rational, Box<Expr>),
    Seq(Box<Expr>, Box<Expr>),
    Tensor(Box<Expr>, Box<Expr>),
    Sum(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Error, PartialEq)]
pub enum DslError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("grade mismatch in `{node}`: {left} vs {right}")]
    Grade { node: String, left: String, right: String },
    #[error("boundary mismatch between sides: {left} vs {right}")]
    Boundary { left: String, right: String },
    #[error("evaluation of `{node}` failed: {msg}")]
    Eval { node: String, msg: String },
}

fn show_word(w: &[usize]) -> String {
    let parts: Vec<String> = w.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

fn erase(w: &[usize]) -> GradeWord {
    w.iter().copied().filter(|&n| n != 0).collect()
}

/// Equality of grade words up to grade-0 strands.
pub fn same_grades(a: &[usize], b: &[usize]) -> bool {
    erase(a) == erase(b)
}

impl Expr {
    pub fn seq(a: Expr, b: Expr) -> Expr {
        Expr::Seq(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: Expr, b: Expr) -> Expr {
        Expr::Tensor(Box::new(a), Box::new(b))
    }

    pub fn sum(a: Expr, b: Expr) -> Expr {
        Expr::Sum(Box::new(a), Box::new(b))
    }

    pub fn scale(q: Rational, e: Expr) -> Expr {
        Expr::Scale(q, Box::new(e))
    }

    /// Inferred `(domain, codomain)`.
    pub fn boundary(&self) -> Result<(GradeWord, GradeWord), DslError> {
        Ok(match self {
            Expr::Id(g) => (g.clone(), g.clone()),
            Expr::Nabla(n, p) => (vec![*n, *p], vec![n + p]),
            Expr::Delta(n, p) => (vec![n + p], vec![*n, *p]),
            Expr::R(n) => (vec![1; *n], vec![*n]),
            Expr::S(n) => (vec![*n], vec![1; *n]),
            Expr::Sym(s) => (vec![1; s.size()], vec![1; s.size()]),
            Expr::Scale(_, e) => e.boundary()?,
            Expr::Seq(a, b) => {
                let (da, ca) = a.boundary()?;
                let (db, cb) = b.boundary()?;
                if !same_grades(&ca, &db) {
                    return Err(DslError::Grade {
                        node: self.to_string(),
                        left: format!("codomain {}", show_word(&ca)),
                        right: format!("domain {}", show_word(&db)),
                    });
                }
                (da, cb)
            }
            Expr::Tensor(a, b) => {
                let (mut da, mut ca) = a.boundary()?;
                let (db, cb) = b.boundary()?;
                da.extend(db);
                ca.extend(cb);
                (da, ca)
            }
            Expr::Sum(a, b) => {
                let (da, ca) = a.boundary()?;
                let (db, cb) = b.boundary()?;
                if !same_grades(&da, &db) || !same_grades(&ca, &cb) {
                    return Err(DslError::Grade {
                        node: self.to_string(),
                        left: format!("{} -> {}", show_word(&da), show_word(&ca)),
                        right: format!("{} -> {}", show_word(&db), show_word(&cb)),
                    });
                }
                (da, ca)
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Sum(..) => 0,
            Expr::Seq(..) => 1,
            Expr::Tensor(..) => 2,
            Expr::Scale(..) => 3,
            _ => 4,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < ctx {
            f.write_str("(")?;
        }
        match self {
            Expr::Id(g) => {
                let parts: Vec<String> = g.iter().map(usize::to_string).collect();
                write!(f, "id({})", parts.join(","))?
            }
            Expr::Nabla(n, p) => write!(f, "nabla({n},{p})")?,
            Expr::Delta(n, p) => write!(f, "delta({n},{p})")?,
            Expr::R(n) => write!(f, "r({n})")?,
            Expr::S(n) => write!(f, "s({n})")?,
            Expr::Sym(s) => {
                let parts: Vec<String> = s.images().iter().map(usize::to_string).collect();
                write!(f, "sym([{}])", parts.join(" "))?
            }
            Expr::Scale(q, e) => {
                write!(f, "{q} . ")?;
                e.write(f, 4)?;
            }
            Expr::Seq(a, b) | Expr::Tensor(a, b) | Expr::Sum(a, b) => {
                let op = match self {
                    Expr::Seq(..) => " ; ",
                    Expr::Tensor(..) => " * ",
                    _ => " + ",
                };
                a.write(f, prec)?;
                f.write_str(op)?;
                b.write(f, prec + 1)?;
            }
        }
        if prec < ctx {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Nat(BigInt),
    Sym(char),
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer, DslError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            toks.push((start, Tok::Nat(digits.parse().expect("ascii digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            toks.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "()[],;+*./".contains(c) {
            toks.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(DslError::Syntax { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(Lexer { toks, end: chars.len() })
}

struct Parser {
    lexer: Lexer,
    at: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.lexer.toks.get(self.at).map_or(self.lexer.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.lexer.toks.get(self.at).map(|t| &t.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), DslError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn big(&mut self) -> Result<BigInt, DslError> {
        match self.peek() {
            Some(Tok::Nat(n)) => {
                let n = n.clone();
                self.at += 1;
                Ok(n)
            }
            _ => self.err("expected a natural number"),
        }
    }

    fn nat(&mut self) -> Result<usize, DslError> {
        let pos = self.pos();
        let n = self.big()?;
        usize::try_from(&n).map_err(|_| DslError::Syntax { pos, msg: format!("{n} is too large") })
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut e = self.seq_term()?;
        while self.eat('+') {
            e = Expr::sum(e, self.seq_term()?);
        }
        Ok(e)
    }

    fn seq_term(&mut self) -> Result<Expr, DslError> {
        let mut e = self.tensor_term()?;
        while self.eat(';') {
            e = Expr::seq(e, self.tensor_term()?);
        }
        Ok(e)
    }

    fn tensor_term(&mut self) -> Result<Expr, DslError> {
        let mut e = self.factor()?;
        while self.eat('*') {
            e = Expr::tensor(e, self.factor()?);
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<Expr, DslError> {
        if let Some(Tok::Nat(_)) = self.peek() {
            let num = self.big()?;
            let den = if self.eat('/') { self.big()? } else { BigInt::from(1) };
            if den == BigInt::from(0) {
                return self.err("zero denominator");
            }
            self.expect('.')?;
            let atom = self.atom()?;
            return Ok(Expr::scale(Rational::new(num, den), atom));
        }
        self.atom()
    }

    fn pair(&mut self) -> Result<(usize, usize), DslError> {
        self.expect('(')?;
        let n = self.nat()?;
        self.expect(',')?;
        let p = self.nat()?;
        self.expect(')')?;
        Ok((n, p))
    }

    fn single(&mut self) -> Result<usize, DslError> {
        self.expect('(')?;
        let n = self.nat()?;
        self.expect(')')?;
        Ok(n)
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        let start = self.pos();
        match self.peek().cloned() {
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match name.as_str() {
                    "id" => {
                        self.expect('(')?;
                        let mut g = vec![self.nat()?];
                        while self.eat(',') {
                            g.push(self.nat()?);
                        }
                        self.expect(')')?;
                        Ok(Expr::Id(g))
                    }
                    "nabla" => self.pair().map(|(n, p)| Expr::Nabla(n, p)),
                    "delta" => self.pair().map(|(n, p)| Expr::Delta(n, p)),
                    "r" => self.single().map(Expr::R),
                    "s" => self.single().map(Expr::S),
                    "sym" => {
                        self.expect('(')?;
                        self.expect('[')?;
                        let mut images = vec![self.nat()?];
                        while let Some(Tok::Nat(_)) = self.peek() {
                            images.push(self.nat()?);
                        }
                        self.expect(']')?;
                        self.expect(')')?;
                        Permutation::new(images)
                            .map(Expr::Sym)
                            .map_err(|e| DslError::Syntax { pos: start, msg: e.to_string() })
                    }
                    other => Err(DslError::Syntax { pos: start, msg: format!("unknown generator {other:?}") }),
                }
            }
            Some(_) => self.err("expected a generator or '('"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses without grade checking.
pub fn parse_untyped(text: &str) -> Result<Expr, DslError> {
    let mut p = Parser { lexer: lex(text)?, at: 0 };
    let e = p.expr()?;
    if p.at != p.lexer.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// A parsed expression together with its inferred boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub expr: Expr,
    pub dom: GradeWord,
    pub cod: GradeWord,
}

impl Diagram {
    pub fn new(expr: Expr) -> Result<Self, DslError> {
        let (dom, cod) = expr.boundary()?;
        Ok(Diagram { expr, dom, cod })
    }
}

/// Parses and grade-checks.
pub fn parse(text: &str) -> Result<Diagram, DslError> {
    Diagram::new(parse_untyped(text)?)
}

/// A structure expressions are evaluated in: the splitting and its bimonoid.
#[derive(Clone, Debug)]
pub struct Binding<S> {
    split: PermSplit<S>,
    bimonoid: BinGrBimon<S>,
}

impl<S: Scalar> Binding<S> {
    pub fn from_split(p: PermSplit<S>) -> Result<Self, GradedError> {
        let bimonoid = g1(&p)?;
        Ok(Binding { split: p, bimonoid })
    }

    pub fn from_bimonoid(b: BinGrBimon<S>) -> Result<Self, GradedError> {
        let split = f1(&b)?;
        Ok(Binding { split, bimonoid: b })
    }

    pub fn split(&self) -> &PermSplit<S> {
        &self.split
    }

    pub fn bimonoid(&self) -> &BinGrBimon<S> {
        &self.bimonoid
    }
}

/// Evaluates a well-graded expression to a matrix in the binding's model.
pub fn evaluate<S: Scalar>(e: &Expr, binding: &Binding<S>) -> Result<Matrix<S>, DslError> {
    e.boundary()?;
    eval_node(e, binding)
}

fn eval_node<S: Scalar>(e: &Expr, binding: &Binding<S>) -> Result<Matrix<S>, DslError> {
    let cat = MatCat::<S>::new();
    let b = binding.bimonoid();
    let fail = |msg: String| DslError::Eval { node: e.to_string(), msg };
    let graded = |r: Result<Matrix<S>, GradedError>| r.map_err(|x| fail(x.to_string()));
    match e {
        Expr::Id(g) => graded(b.id_word(g)),
        Expr::Nabla(n, p) => graded(b.nabla(*n, *p)),
        Expr::Delta(n, p) => graded(b.delta(*n, *p)),
        Expr::R(n) => graded(binding.split().r(*n).cloned()),
        Expr::S(n) => graded(binding.split().s(*n).cloned()),
        Expr::Sym(s) => Ok(cat.lift_permutation(s, &b.dim())),
        Expr::Scale(q, x) => cat.scale(q, &eval_node(x, binding)?).map_err(|x| fail(x.to_string())),
        Expr::Seq(x, y) => cat
            .compose(&eval_node(x, binding)?, &eval_node(y, binding)?)
            .map_err(|x| fail(x.to_string())),
        Expr::Tensor(x, y) => Ok(cat.tensor(&eval_node(x, binding)?, &eval_node(y, binding)?)),
        Expr::Sum(x, y) => cat
            .add(&eval_node(x, binding)?, &eval_node(y, binding)?)
            .map_err(|x| fail(x.to_string())),
    }
}

/// Evaluates both sides and compares them exactly.
pub fn check_equation<S: Scalar>(lhs: &Expr, rhs: &Expr, binding: &Binding<S>) -> Result<CheckReport, DslError> {
    let (dl, cl) = lhs.boundary()?;
    let (dr, cr) = rhs.boundary()?;
    if !same_grades(&dl, &dr) || !same_grades(&cl, &cr) {
        return Err(DslError::Boundary {
            left: format!("{} -> {}", show_word(&dl), show_word(&cl)),
            right: format!("{} -> {}", show_word(&dr), show_word(&cr)),
        });
    }
    let l = eval_node(lhs, binding)?;
    let r = eval_node(rhs, binding)?;
    let params = json!({ "lhs": lhs.to_string(), "rhs": rhs.to_string() });
    Ok(CheckReport::compare("eq", params, &l, &r))
}

/// Random well-graded expressions whose grades stay within `max_grade`.
pub struct ExprSampler {
    pub max_grade: usize,
    pub max_width: usize,
}

impl Default for ExprSampler {
    fn default() -> Self {
        ExprSampler { max_grade: 3, max_width: 3 }
    }
}

impl ExprSampler {
    fn scalar<R: Rng + ?Sized>(rng: &mut R) -> Rational {
        Rational::new(rng.gen_range(0..=4).into(), rng.gen_range(1..=3).into())
    }

    fn word<R: Rng + ?Sized>(&self, rng: &mut R) -> GradeWord {
        let len = rng.gen_range(1..=self.max_width.min(2));
        (0..len).map(|_| rng.gen_range(0..=self.max_grade.min(2))).collect()
    }

    /// A random expression with domain `dom`.
    pub fn from_domain<R: Rng + ?Sized>(&self, rng: &mut R, dom: &[usize], depth: usize) -> Expr {
        let gens = self.generators_from(dom);
        if depth == 0 || rng.gen_bool(0.25) {
            return gens[rng.gen_range(0..gens.len())].clone();
        }
        match rng.gen_range(0..5) {
            0 => {
                let a = self.from_domain(rng, dom, depth - 1);
                let cod = a.boundary().expect("well graded").1;
                Expr::seq(a, self.from_domain(rng, &cod, depth - 1))
            }
            1 if dom.len() >= 2 => {
                let k = rng.gen_range(1..dom.len());
                Expr::tensor(self.from_domain(rng, &dom[..k], depth - 1), self.from_domain(rng, &dom[k..], depth - 1))
            }
            2 => {
                let a = self.from_domain(rng, dom, depth - 1);
                let cod = a.boundary().expect("well graded").1;
                for _ in 0..8 {
                    let b = self.from_domain(rng, dom, depth - 1);
                    if same_grades(&b.boundary().expect("well graded").1, &cod) {
                        return Expr::sum(a, b);
                    }
                }
                Expr::sum(a.clone(), Expr::scale(Self::scalar(rng), a))
            }
            3 => Expr::scale(Self::scalar(rng), self.from_domain(rng, dom, depth - 1)),
            _ => Expr::tensor(Expr::Id(vec![0]), self.from_domain(rng, dom, depth - 1)),
        }
    }

    fn generators_from(&self, dom: &[usize]) -> Vec<Expr> {
        let mut out = vec![Expr::Id(dom.to_vec())];
        let w = erase(dom);
        if let [n, p] = w[..] {
            if n + p <= self.max_grade {
                out.push(Expr::Nabla(n, p));
            }
        }
        if let [n] = w[..] {
            out.push(Expr::S(n));
            for k in 0..=n {
                out.push(Expr::Delta(k, n - k));
            }
        }
        if !w.is_empty() && w.iter().all(|&g| g == 1) && w.len() <= self.max_grade {
            out.push(Expr::R(w.len()));
            out.push(Expr::Sym(Permutation::new((1..=w.len()).rev().collect()).expect("reversal")));
        }
        out
    }

    /// A random expression over a random domain.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, depth: usize) -> Expr {
        let dom = self.word(rng);
        self.from_domain(rng, &dom, depth)
    }
}
