use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use k3div_core::catalog::{realizability_cell, verify_catalog, Evidence};
use k3div_core::json::frac;
use k3div_core::lattice::{
    build_lattice, discriminant_form, half_class_q_test, is_two_divisible, TwoDivisibility,
};
use k3div_core::qe::{analyze, WeierstrassQE};
use k3div_core::singularity::{classify, BiSeries};

#[derive(Parser)]
#[command(
    name = "k3div",
    version,
    about = "Exact lattice, fibration and singularity computations for K3 surfaces in characteristic 2"
)]
struct Cli {
    /// Write the JSON report to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Suppress the one-line summary on standard error.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Even lattices given by expressions such as "U(2)+E8(2)+~A1^12".
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// 2-divisibility of a class.
    #[command(subcommand)]
    Divisible(DivisibleCmd),
    /// Quasi-elliptic fibrations y^2 = x^3 + phi^2 (a x + psi) ... in Weierstrass form.
    #[command(subcommand)]
    Qe(QeCmd),
    /// Rational double points in characteristic 2.
    #[command(subcommand)]
    Sing(SingCmd),
    /// The catalog of 2-divisible sets of (-2)-curves.
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Rank, signature and discriminant form.
    Info {
        #[arg(long)]
        spec: String,
    },
}

#[derive(Subcommand)]
enum DivisibleCmd {
    /// Whether a class is twice a lattice vector.
    Check {
        #[arg(long)]
        spec: String,
        /// Coordinates in the lattice basis, separated by commas or spaces.
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
}

#[derive(Args)]
struct FieldArg {
    /// gf2, gf4, gf8, ..., gf(2^k) or gf(2^k; modulus=g^k+...).
    #[arg(long, env = "K3DIV_FIELD", default_value = "gf2")]
    field: String,
}

#[derive(Subcommand)]
enum QeCmd {
    /// Singular fibers, torsion section, height ledger and certificates.
    Analyze {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        psi: String,
    },
}

#[derive(Subcommand)]
enum SingCmd {
    /// Classify f(t, s) = 0 at the origin.
    Classify {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        f: String,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Verify every table, or a single cell of the realizability matrix.
    Verify {
        /// A cell "n,sigma".
        #[arg(long)]
        cell: Option<String>,
    },
}

enum Failure {
    Parse(anyhow::Error),
    Verify(anyhow::Error),
}

struct Outcome {
    report: Value,
    summary: String,
    ok: bool,
}

fn parse<T, E: Into<anyhow::Error>>(r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Parse(e.into()))
}

fn compute<T, E: Into<anyhow::Error>>(r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Verify(e.into()))
}

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value, Failure> {
    compute(serde_json::to_value(x))
}

fn parse_class(text: &str) -> anyhow::Result<Vec<i64>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<i64>()
                .with_context(|| format!("bad coordinate {s:?}"))
        })
        .collect()
}

fn parse_cell(text: &str) -> anyhow::Result<(usize, u32)> {
    let (n, s) = text
        .split_once(',')
        .ok_or_else(|| anyhow!("cell {text:?} is not of the form n,sigma"))?;
    Ok((
        n.trim().parse().with_context(|| format!("bad n {n:?}"))?,
        s.trim()
            .parse()
            .with_context(|| format!("bad sigma {s:?}"))?,
    ))
}

fn lattice_info(spec: &str) -> Result<Outcome, Failure> {
    let e = parse(build_lattice(spec))?;
    let l = &e.lattice;
    let form = discriminant_form(l);
    let (p, q) = l.signature();
    let summary = format!(
        "{spec}: rank {}, signature ({p},{q}), length {}, type {}",
        l.rank(),
        form.length,
        match form.type_i {
            Some(true) => "I",
            Some(false) => "II",
            None => "undecided",
        }
    );
    let report = json!({
        "spec": e.expr.to_string(),
        "rank": l.rank(),
        "signature": [p, q],
        "determinant": l.determinant().to_string(),
        "lattice": to_value(&l.to_json())?,
        "discriminant": to_value(&form.to_json())?,
    });
    Ok(Outcome {
        report,
        summary,
        ok: true,
    })
}

fn divisible_check(spec: &str, class: &str) -> Result<Outcome, Failure> {
    let e = parse(build_lattice(spec))?;
    let coords = parse(parse_class(class))?;
    let l = &e.lattice;
    let d = parse(l.class_i64(&coords))?;
    let verdict = compute(is_two_divisible(l, &d))?;
    let half = compute(half_class_q_test(l, &d))?;
    let (divisible, detail) = match &verdict {
        TwoDivisibility::Divisible { witness } => (
            true,
            json!({ "half": witness.iter().map(|x| x.to_string()).collect::<Vec<_>>() }),
        ),
        TwoDivisibility::NotDivisible { residue } => (false, json!({ "residue": residue })),
    };
    let report = json!({
        "spec": e.expr.to_string(),
        "class": coords,
        "self_intersection": d.self_int.to_string(),
        "divisible": divisible,
        "witness": detail,
        "half_class": {
            "in_dual": half.in_dual,
            "q": half.q_value.as_ref().map(frac),
        },
    });
    let summary = format!(
        "D^2 = {}: {}",
        d.self_int,
        if divisible {
            "divisible by 2"
        } else {
            "not divisible by 2"
        }
    );
    Ok(Outcome {
        report,
        summary,
        ok: divisible,
    })
}

fn qe_analyze(field: &str, phi: &str, a: &str, psi: &str) -> Result<Outcome, Failure> {
    let w = parse(WeierstrassQE::parse(field, phi, a, psi))?;
    let r = compute(analyze(&w))?;
    let ok = r.certificates.iter().all(|c| c.verified);
    let summary = format!(
        "{} III + {} I0*, sigma {}, r {}, certificates {}",
        r.n_iii,
        r.ell,
        r.sigma,
        r.r,
        r.certificates
            .iter()
            .map(|c| format!("n={}:{}", c.n, if c.verified { "ok" } else { "FAIL" }))
            .collect::<Vec<_>>()
            .join(" ")
    );
    Ok(Outcome {
        report: to_value(&r)?,
        summary,
        ok,
    })
}

fn sing_classify(field: &str, f: &str) -> Result<Outcome, Failure> {
    let field = parse(k3div_core::field::parse_field(field))?;
    let series = parse(BiSeries::parse(f, field))?;
    let v = classify(&series);
    let summary = format!("{}: {}", f, v.kind.name());
    Ok(Outcome {
        report: to_value(&v)?,
        summary,
        ok: true,
    })
}

fn catalog_verify(cell: Option<&str>) -> Result<Outcome, Failure> {
    if let Some(text) = cell {
        let (n, sigma) = parse(parse_cell(text))?;
        let c = parse(realizability_cell(n, sigma))?;
        let how = match &c.evidence {
            Evidence::Witness(w) => format!("{:?} witness", w.source).to_lowercase(),
            Evidence::Trace(_) => "impossibility trace".into(),
            Evidence::External { .. } => "external result".into(),
        };
        return Ok(Outcome {
            summary: format!("({n}, {sigma}): {} by {how}", c.status.label()),
            ok: c.verified(),
            report: to_value(&c)?,
        });
    }
    let r = compute(verify_catalog())?;
    let summary = if r.passed {
        format!(
            "catalog verified: {} rows, {} cells",
            r.picard_rows.len(),
            r.matrix.cells.len()
        )
    } else {
        format!("catalog FAILED: {}", r.failures.join("; "))
    };
    Ok(Outcome {
        ok: r.passed,
        summary,
        report: to_value(&r)?,
    })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Lattice(LatticeCmd::Info { spec }) => lattice_info(spec),
        Command::Divisible(DivisibleCmd::Check { spec, class }) => divisible_check(spec, class),
        Command::Qe(QeCmd::Analyze { field, phi, a, psi }) => qe_analyze(&field.field, phi, a, psi),
        Command::Sing(SingCmd::Classify { field, f }) => sing_classify(&field.field, f),
        Command::Catalog(CatalogCmd::Verify { cell }) => catalog_verify(cell.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(Failure::Parse(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
        Err(Failure::Verify(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    // serde_json::Value keeps object keys in a BTreeMap, so output is sorted
    let mut text = serde_json::to_string_pretty(&outcome.report).expect("JSON values serialize");
    text.push('\n');
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if !cli.quiet {
        eprintln!("{}", outcome.summary);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
