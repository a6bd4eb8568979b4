//! The `pdlift` command line.
//!
//! Exit codes: 0 no obstruction / surjective, 2 refuted / not surjective,
//! 3 precision limited, 1 bad input.

mod problem;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::lifting::{
    check_well_defined, deligne_example, probe_smoothness, t1_lifting_check, ProbeBounds, T1Verdict,
};
use crate::pd_rings::{make_ring, make_truncation, CurveFactor, Family, RingDescriptor, RingHandle};
use crate::witt::RingParams;

pub use problem::{bundled, parse_images, ProblemFile, BUNDLED};

#[derive(Debug, Parser)]
#[command(name = "pdlift", version, about = "Lifting probes over divided-power test rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for an obstruction to smoothness of a presented algebra.
    Probe {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        m_max: u32,
        #[arg(long, default_value_t = 4)]
        d_max: u32,
        /// Candidate maps per grid cell.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Check the T^1-lifting property along W_{m,d} -> W_{m,d-1} at a base map.
    T1check {
        file: PathBuf,
        /// Defaults to the precision of the file.
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, default_value_t = 2)]
        d: u32,
        /// Image of a variable, e.g. "T: 9*g1". Overrides the file.
        #[arg(long = "image")]
        images: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run a bundled scenario.
    Example {
        name: String,
        #[arg(long)]
        json: bool,
    },
    /// Dump basis, moduli and structure constants of a test ring as JSON.
    RingTable {
        family: FamilyName,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Coefficients of g, lowest first, comma separated; "0" for g = 0.
        #[arg(long, default_value = "1")]
        g: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyName {
    Wm,
    WmEps,
    WmMixedEps,
    Pd,
    PdEps,
    PdEpsQuot,
    Ramified,
    ResidueSeries,
}

pub const EXAMPLES: &[&str] = &["deligne-p2", "deligne-p3", "deligne-p5", "node", "free", "p-torsion"];

struct Output {
    text: String,
    json: serde_json::Value,
    code: i32,
}

fn output<T: Serialize + std::fmt::Display>(report: &T, code: i32) -> Result<Output> {
    Ok(Output {
        text: report.to_string(),
        json: serde_json::to_value(report).map_err(|e| Error::Incompatible(e.to_string()))?,
        code,
    })
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let json = match &cli.command {
        Command::Probe { json, .. } | Command::T1check { json, .. } | Command::Example { json, .. } => *json,
        Command::RingTable { .. } => true,
    };
    match execute(&cli.command) {
        Ok(o) => {
            let _ = if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&o.json).expect("json value"))
            } else {
                writeln!(out, "{}", o.text.trim_end())
            };
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn read_problem(path: &PathBuf) -> Result<ProblemFile> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Error::Incompatible(format!("cannot read {}: {e}", path.display())))?;
    ProblemFile::from_json(&src)
        .map_err(|e| Error::Incompatible(format!("{}: {e}", path.display())))
}

fn execute(command: &Command) -> Result<Output> {
    match command {
        Command::Probe {
            file,
            m_max,
            d_max,
            budget,
            ..
        } => {
            let bounds = ProbeBounds {
                m_max: *m_max,
                d_max: *d_max,
                budget: *budget,
            };
            probe(&read_problem(file)?, &bounds)
        }
        Command::T1check { file, m, d, images, .. } => {
            let mut problem = read_problem(file)?;
            if !images.is_empty() {
                problem.images = Some(images.clone());
            }
            t1check(&problem, m.unwrap_or(problem.precision), *d)
        }
        Command::Example { name, .. } => example(name),
        Command::RingTable { family, p, m, d, n, g } => ring_table(*family, *p, *m, *d, *n, g),
    }
}

fn probe(problem: &ProblemFile, bounds: &ProbeBounds) -> Result<Output> {
    if bounds.m_max == 0 || bounds.d_max < 2 {
        return Err(Error::Incompatible("need --m-max >= 1 and --d-max >= 2".into()));
    }
    let precision = problem.precision.max(bounds.m_max + 1);
    let degree_cap = problem
        .degree_cap
        .unwrap_or(bounds.m_max + bounds.d_max)
        .max(bounds.m_max + bounds.d_max);
    let pres = problem.presentation(precision, degree_cap)?;
    let point = problem.point();
    let report = probe_smoothness(&pres, point.as_deref(), bounds)?;
    let code = report.exit_code();
    output(&report, code)
}

fn t1check(problem: &ProblemFile, m: u32, d: u32) -> Result<Output> {
    if d < 2 {
        return Err(Error::Incompatible("t1check needs d >= 2 (it restricts along W_{m,d} -> W_{m,d-1})".into()));
    }
    if m == 0 {
        return Err(Error::Incompatible("t1check needs m >= 1".into()));
    }
    let params = RingParams::new(problem.p)?;
    let precision = problem.precision.max(m);
    let degree_cap = problem.degree_cap.unwrap_or(0).max(m + d + 1);
    let pres = problem.presentation(precision, degree_cap)?;
    let surj = make_truncation(
        &RingDescriptor::new(Family::Pd { m, d }, params),
        &RingDescriptor::new(Family::Pd { m, d: d - 1 }, params),
    )?;
    let lines = match &problem.images {
        Some(lines) => lines.clone(),
        None => problem.vars.iter().map(|v| format!("{v}: 0")).collect(),
    };
    let images = parse_images(&problem.vars, &lines, surj.source())?;
    let x = match check_well_defined(&pres, surj.source(), images)? {
        crate::lifting::WellDefinedness::Map(x) => x,
        crate::lifting::WellDefinedness::Fails(failures) => {
            let list: Vec<String> = failures
                .iter()
                .map(|f| format!("generator {} evaluates to {}", f.index, f.value))
                .collect();
            return Err(Error::IllDefinedMap(list.join("; ")));
        }
    };
    let x_prime = x.push_forward(surj.hom())?;
    let report = t1_lifting_check(&x, &x_prime, &surj)?;
    let code = match report.verdict {
        T1Verdict::Surjective => 0,
        T1Verdict::NotSurjective { .. } => 2,
        T1Verdict::PrecisionLimited { .. } => 3,
    };
    output(&report, code)
}

fn example(name: &str) -> Result<Output> {
    let deligne = |p| -> Result<Output> {
        let report = deligne_example(p)?;
        let code = if report.all_hold() { 2 } else { 1 };
        output(&report, code)
    };
    match name {
        "deligne-p2" => deligne(2),
        "deligne-p3" => deligne(3),
        "deligne-p5" => deligne(5),
        "node" | "free" | "p-torsion" => {
            let problem = bundled(name).expect("listed example");
            probe(&problem, &ProbeBounds::default())
        }
        _ => Err(Error::Incompatible(format!(
            "unknown example '{name}'; available: {}",
            EXAMPLES.join(", ")
        ))),
    }
}

fn curve_factor(g: &str) -> Result<CurveFactor> {
    let coeffs = g
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<i64>()
                .map_err(|_| Error::Incompatible(format!("bad coefficient '{c}' in --g")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(if coeffs.iter().all(|&c| c == 0) {
        CurveFactor::Zero
    } else {
        CurveFactor::Unit(coeffs)
    })
}

pub fn family(name: FamilyName, m: u32, d: u32, n: u32, g: &str) -> Result<Family> {
    Ok(match name {
        FamilyName::Wm => Family::Wm { m },
        FamilyName::WmEps => Family::WmEps { m },
        FamilyName::WmMixedEps => Family::WmMixedEps { m },
        FamilyName::Pd => Family::Pd { m, d },
        FamilyName::PdEps => Family::PdEps { m, d },
        FamilyName::PdEpsQuot => Family::PdEpsQuot { m, d },
        FamilyName::Ramified => Family::Ramified {
            n,
            g: curve_factor(g)?,
            d,
        },
        FamilyName::ResidueSeries => Family::ResidueSeries { d },
    })
}

fn ring_table(name: FamilyName, p: u64, m: u32, d: u32, n: u32, g: &str) -> Result<Output> {
    let desc = RingDescriptor::new(family(name, m, d, n, g)?, RingParams::new(p)?);
    let ring = make_ring(&desc)?;
    let labels = ring.labels();
    let mut products = Vec::new();
    for i in 0..ring.dim() {
        for j in i..ring.dim() {
            let prod = &ring.basis_elem(i) * &ring.basis_elem(j);
            products.push(json!({
                "left": labels[i],
                "right": labels[j],
                "product": prod.to_string(),
                "coords": prod.coords(),
            }));
        }
    }
    let table = json!({
        "name": desc.to_string(),
        "descriptor": desc,
        "basis": labels,
        "modExps": ring.mod_exps(),
        "moduli": ring.moduli(),
        "order": ring.order().to_string(),
        "maxIdealSize": ring.max_ideal_size().to_string(),
        "nilpotencyBound": ring.nilpotency_bound(),
        "products": products,
    });
    Ok(Output {
        text: table.to_string(),
        json: table,
        code: 0,
    })
}
