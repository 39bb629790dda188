use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spml_core::combinat::contingency_tables;
use spml_core::dsl::{self, Binding};
use spml_core::graded::g1;
use spml_core::sympow::{build_mod_split_with, build_rel_split_with, Bounds};
use spml_core::verify::{run_suite, Structure, Suite, SuiteScalar};
use spml_core::{BinGrBimon, Boolean, PermSplit, Rational, Variant};

const FORMAT: &str = "spml-structure/1";

#[derive(Parser)]
#[command(name = "spml", version, about = "Exact symmetric powers, splittings and graded bimonoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Matq,
    Rel,
}

#[derive(Subcommand)]
enum Command {
    /// Build a permutation splitting (or its bimonoid) and write it as JSON.
    Build {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long, default_value = "sym1")]
        variant: Variant,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        set_size: Option<usize>,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        out: PathBuf,
        /// Write the bimonoid obtained from the splitting instead.
        #[arg(long)]
        as_bimonoid: bool,
    },
    /// Run the verification suite on a structure file.
    Verify {
        structure: PathBuf,
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 5)]
        max_total: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check an equation between two diagram expressions.
    Eq {
        structure: PathBuf,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Evaluate a diagram expression to an exact matrix.
    Eval {
        structure: PathBuf,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate contingency tables with given margins.
    Tables {
        #[arg(long, value_delimiter = ',')]
        rows: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        cols: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure classes mapped onto exit codes.
enum Outcome {
    Ok,
    Failed,
}

/// Errors that are the caller's fault: bad files, bad bounds, bad expressions.
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

fn degree_cap() -> Result<usize> {
    match std::env::var("SPML_MAX_DEGREE") {
        Ok(v) => v.trim().parse().with_context(|| format!("SPML_MAX_DEGREE={v:?} is not a natural number")),
        Err(_) => Ok(Bounds::default().max_degree),
    }
}

fn write_json(path: Option<&Path>, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn stamp(mut doc: Value) -> Value {
    doc["format"] = json!(FORMAT);
    doc["tool_version"] = json!(env!("CARGO_PKG_VERSION"));
    doc
}

/// A loaded structure file in one of the two models.
enum Loaded {
    Q(Structure<Rational>),
    B(Structure<Boolean>),
}

fn decode<S: SuiteScalar>(doc: &Value) -> Result<Structure<S>> {
    match doc.get("structure").and_then(Value::as_str) {
        Some("perm_split") => Ok(Structure::Split(PermSplit::from_json(doc)?)),
        Some("bimonoid") => Ok(Structure::Bimonoid(BinGrBimon::from_json(doc)?)),
        other => bail!("unknown structure kind {other:?}"),
    }
}

fn load(path: &Path) -> Result<Loaded> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let doc: Value = serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))?;
    if doc.get("format").and_then(Value::as_str) != Some(FORMAT) {
        bail!("{} is not a {FORMAT} file", path.display());
    }
    let loaded = match doc.get("model").and_then(Value::as_str) {
        Some("matq") => Loaded::Q(decode(&doc)?),
        Some("rel") => Loaded::B(decode(&doc)?),
        other => bail!("unknown model {other:?}"),
    };
    let n = match &loaded {
        Loaded::Q(Structure::Split(p)) => p.max_degree(),
        Loaded::Q(Structure::Bimonoid(b)) => b.max_degree(),
        Loaded::B(Structure::Split(p)) => p.max_degree(),
        Loaded::B(Structure::Bimonoid(b)) => b.max_degree(),
    };
    let cap = degree_cap()?;
    if n > cap {
        bail!("structure degree {n} exceeds SPML_MAX_DEGREE={cap}");
    }
    Ok(loaded)
}

fn structure_json<S: SuiteScalar>(s: &Structure<S>) -> Value {
    match s {
        Structure::Split(p) => p.to_json(),
        Structure::Bimonoid(b) => b.to_json(),
    }
}

fn binding<S: SuiteScalar>(s: &Structure<S>) -> Result<Binding<S>> {
    Ok(match s {
        Structure::Split(p) => Binding::from_split(p.clone())?,
        Structure::Bimonoid(b) => Binding::from_bimonoid(b.clone())?,
    })
}

fn cmd_build(
    model: Model,
    variant: Variant,
    dim: Option<usize>,
    set_size: Option<usize>,
    max_degree: usize,
    out: &Path,
    as_bimonoid: bool,
) -> std::result::Result<Outcome, InputError> {
    let bounds = Bounds { max_degree: degree_cap()?, ..Bounds::default() };
    let doc = match model {
        Model::Matq => {
            let d = dim.ok_or_else(|| anyhow!("--dim is required for the matq model"))?;
            let p = build_mod_split_with(d, max_degree, variant, bounds)?;
            if as_bimonoid {
                g1(&p)?.to_json()
            } else {
                p.to_json()
            }
        }
        Model::Rel => {
            let x = set_size.ok_or_else(|| anyhow!("--set-size is required for the rel model"))?;
            let p = build_rel_split_with(x, max_degree, bounds)?;
            if as_bimonoid {
                g1(&p)?.to_json()
            } else {
                p.to_json()
            }
        }
    };
    write_json(Some(out), &stamp(doc))?;
    Ok(Outcome::Ok)
}

fn verify_with<S: SuiteScalar>(
    s: &Structure<S>,
    suite: Suite,
    max_total: usize,
    seed: u64,
    report: Option<&Path>,
) -> std::result::Result<Outcome, InputError> {
    let reports = run_suite(s, suite, max_total, seed);
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
    for r in &failed {
        eprintln!("FAIL {} {}", r.check, r.params);
    }
    println!("{} checks, {} passed, {} failed", reports.len(), reports.len() - failed.len(), failed.len());
    if let Some(path) = report {
        let meta = structure_json(s);
        let doc = json!({
            "suite": suite.to_string(),
            "max_total": max_total,
            "seed": seed,
            "model": meta["model"],
            "variant": meta["variant"],
            "dim": meta["dim"],
            "max_degree": meta["max_degree"],
            "tool_version": env!("CARGO_PKG_VERSION"),
            "summary": { "total": reports.len(), "failed": failed.len() },
            "reports": reports,
        });
        write_json(Some(path), &doc)?;
    }
    Ok(if failed.is_empty() { Outcome::Ok } else { Outcome::Failed })
}

fn eq_with<S: SuiteScalar>(s: &Structure<S>, lhs: &str, rhs: &str) -> std::result::Result<Outcome, InputError> {
    let l = dsl::parse(lhs)?;
    let r = dsl::parse(rhs)?;
    let report = dsl::check_equation(&l.expr, &r.expr, &binding(s)?)?;
    println!("{}", serde_json::to_string(&report)?);
    Ok(if report.passed() { Outcome::Ok } else { Outcome::Failed })
}

fn eval_with<S: SuiteScalar>(s: &Structure<S>, expr: &str, out: Option<&Path>) -> std::result::Result<Outcome, InputError> {
    let d = dsl::parse(expr)?;
    let m = dsl::evaluate(&d.expr, &binding(s)?)?;
    let doc = json!({
        "expr": d.expr.to_string(),
        "dom": d.dom,
        "cod": d.cod,
        "matrix": m.to_json(),
    });
    write_json(out, &doc)?;
    Ok(Outcome::Ok)
}

fn run(cli: Cli) -> std::result::Result<Outcome, InputError> {
    match cli.command {
        Command::Build { model, variant, dim, set_size, max_degree, out, as_bimonoid } => {
            cmd_build(model, variant, dim, set_size, max_degree, &out, as_bimonoid)
        }
        Command::Verify { structure, suite, max_total, seed, report } => match load(&structure)? {
            Loaded::Q(s) => verify_with(&s, suite, max_total, seed, report.as_deref()),
            Loaded::B(s) => verify_with(&s, suite, max_total, seed, report.as_deref()),
        },
        Command::Eq { structure, lhs, rhs } => match load(&structure)? {
            Loaded::Q(s) => eq_with(&s, &lhs, &rhs),
            Loaded::B(s) => eq_with(&s, &lhs, &rhs),
        },
        Command::Eval { structure, expr, out } => match load(&structure)? {
            Loaded::Q(s) => eval_with(&s, &expr, out.as_deref()),
            Loaded::B(s) => eval_with(&s, &expr, out.as_deref()),
        },
        Command::Tables { rows, cols, out } => {
            let tables = contingency_tables(&rows, &cols)?;
            let doc = json!({
                "rows": rows,
                "cols": cols,
                "count": tables.len(),
                "tables": tables.iter().map(|t| t.to_rows()).collect::<Vec<_>>(),
            });
            write_json(out.as_deref(), &doc)?;
            Ok(Outcome::Ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
