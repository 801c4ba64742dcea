//! Command-line front end. Exit codes: 0 success, 1 mismatch or failure,
//! 2 usage or config error.

use std::io::Write;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::config::{Expectation, RunConfig, ToleranceSet};
use crate::geometry::{
    classify_with_tolerance, geodesic_flow, hausdorff_after_reparametrization, projective_deform,
    Classification, GeodesicPath, SprayClass,
};
use crate::operators::{solution_audit, SolutionAudit};
use crate::sampling::{sample_points, SampleBox};
use crate::symbols::{symbol_audit, SymbolAudit};

pub const SCHEMA: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "projmetric",
    version,
    about = "Spray geometry and projective metrizability audits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute symbol dimensions of P1 and P2 and compare with the closed forms.
    SymbolAudit {
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        /// Emit a JSON document instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Classify the spray as flat, isotropic or generic at sample points.
    Classify {
        config: String,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Audit each candidate Finsler function against the spray.
    CheckSolution {
        config: String,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Integrate a geodesic and print it as CSV.
    Geodesics {
        config: String,
        /// Initial position, comma separated.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        x0: Vec<f64>,
        /// Initial velocity, comma separated.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        y0: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        t_end: f64,
        #[arg(long, allow_hyphen_values = true)]
        dt: f64,
        /// Second config whose spray is integrated from the same data and
        /// compared after arc-length reparametrization.
        #[arg(long)]
        compare: Option<String>,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

/// A command error with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

fn usage(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.to_string(),
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_FAILURE,
        message: e.to_string(),
    }
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::SymbolAudit { n_min, n_max, json } => cmd_symbol_audit(n_min, n_max, json, out),
        Command::Classify {
            config,
            samples,
            seed,
        } => {
            let cfg = RunConfig::load(&config).map_err(usage)?;
            let report = cmd_classify(&cfg, samples, seed)?;
            write_json(out, &report)?;
            Ok(EXIT_OK)
        }
        Command::CheckSolution {
            config,
            samples,
            seed,
        } => {
            let cfg = RunConfig::load(&config).map_err(usage)?;
            let report = cmd_check_solution(&cfg, samples, seed)?;
            write_json(out, &report)?;
            Ok(if report.all_expected_passed {
                EXIT_OK
            } else {
                EXIT_FAILURE
            })
        }
        Command::Geodesics {
            config,
            x0,
            y0,
            t_end,
            dt,
            compare,
        } => {
            let cfg = RunConfig::load(&config).map_err(usage)?;
            let other = compare
                .map(|c| RunConfig::load(&c).map_err(usage))
                .transpose()?;
            cmd_geodesics(&cfg, other.as_ref(), &x0, &y0, t_end, dt, out, err)
        }
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure {
        code: EXIT_FAILURE,
        message: e.to_string(),
    })?;
    writeln!(out, "{text}").map_err(io)
}

#[derive(Debug, Serialize)]
pub struct SymbolAuditReport {
    pub schema: u32,
    pub command: &'static str,
    #[serde(flatten)]
    pub audit: SymbolAudit,
}

fn cmd_symbol_audit(
    n_min: usize,
    n_max: usize,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let audit = symbol_audit(n_min, n_max).map_err(usage)?;
    let all_match = audit.all_match;
    if json {
        write_json(
            out,
            &SymbolAuditReport {
                schema: SCHEMA,
                command: "symbol-audit",
                audit,
            },
        )?;
    } else {
        write_table(&audit, out).map_err(io)?;
    }
    Ok(if all_match { EXIT_OK } else { EXIT_FAILURE })
}

fn write_table(audit: &SymbolAudit, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(
        out,
        "{:<3} {:<6} {:<34} {:>9} {:>9}  status",
        "n", "system", "quantity", "computed", "expected"
    )?;
    for s in &audit.systems {
        for c in &s.checks {
            writeln!(
                out,
                "{:<3} {:<6} {:<34} {:>9} {:>9}  {}",
                s.n,
                s.system.to_string(),
                c.quantity,
                c.computed,
                c.expected,
                if c.matches { "match" } else { "MISMATCH" }
            )?;
        }
        writeln!(
            out,
            "{:<3} {:<6} exact={} quasi_regular={} basis={} flags={:?}",
            s.n,
            s.system.to_string(),
            s.exact,
            s.quasi_regular,
            s.flag_basis,
            s.flag_dims
        )?;
        for d in &s.flagged_discrepancies {
            writeln!(
                out,
                "{:<3} {:<6} note: printed restricted dimension for k={} is {}, computed {}",
                s.n,
                s.system.to_string(),
                d.k,
                d.printed,
                d.computed
            )?;
        }
    }
    writeln!(
        out,
        "overall: {}",
        if audit.all_match {
            "all match"
        } else {
            "MISMATCH"
        }
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleHeader {
    pub count: usize,
    pub seed: u64,
    pub region: SampleBox,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassRow {
    pub index: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    #[serde(flatten)]
    pub classification: Classification,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleError {
    pub index: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ClassCounts {
    pub flat: usize,
    pub isotropic: usize,
    pub generic: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassSummary {
    /// Class shared by every evaluated sample, if any.
    pub class: Option<SprayClass>,
    pub counts: ClassCounts,
    pub lambda: Option<LambdaStats>,
    pub max_flat_defect: f64,
    pub max_isotropy_defect: f64,
    pub max_alpha_s_minus_lambda: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassBlock {
    pub summary: ClassSummary,
    pub failures: Vec<SampleError>,
    pub per_sample: Vec<ClassRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Deformation {
    pub name: String,
    #[serde(flatten)]
    pub block: ClassBlock,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub schema: u32,
    pub command: &'static str,
    pub config_digest: String,
    pub tolerances: ToleranceSet,
    pub n: usize,
    pub samples: SampleHeader,
    #[serde(flatten)]
    pub block: ClassBlock,
    pub deformations: Vec<Deformation>,
}

fn sample_header(cfg: &RunConfig, count: Option<usize>, seed: Option<u64>) -> SampleHeader {
    SampleHeader {
        count: count.unwrap_or(cfg.samples.count),
        seed: seed.unwrap_or(cfg.samples.seed),
        region: cfg.samples.region.clone(),
    }
}

fn classify_block(m: &crate::expr::SprayModel, header: &SampleHeader, tol: f64) -> ClassBlock {
    use rayon::prelude::*;
    let points = sample_points(&header.region, header.count, header.seed);
    let results: Vec<_> = points
        .par_iter()
        .map(|p| classify_with_tolerance(m, p, tol))
        .collect();
    let mut counts = ClassCounts::default();
    let mut failures = Vec::new();
    let mut per_sample = Vec::new();
    for (index, (p, r)) in points.iter().zip(results).enumerate() {
        match r {
            Ok(c) => {
                match c.class {
                    SprayClass::Flat => counts.flat += 1,
                    SprayClass::Isotropic => counts.isotropic += 1,
                    SprayClass::Generic => counts.generic += 1,
                }
                per_sample.push(ClassRow {
                    index,
                    x: p.x.clone(),
                    y: p.y.clone(),
                    classification: c,
                });
            }
            Err(e) => {
                counts.failed += 1;
                failures.push(SampleError {
                    index,
                    message: e.to_string(),
                });
            }
        }
    }
    let lambdas: Vec<f64> = per_sample
        .iter()
        .filter_map(|r| r.classification.lambda)
        .collect();
    let lambda = (!lambdas.is_empty()).then(|| LambdaStats {
        min: lambdas.iter().copied().fold(f64::INFINITY, f64::min),
        max: lambdas.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean: lambdas.iter().sum::<f64>() / lambdas.len() as f64,
    });
    let fold = |g: fn(&Classification) -> f64| {
        per_sample
            .iter()
            .map(|r| g(&r.classification).abs())
            .fold(0.0, f64::max)
    };
    let evaluated = per_sample.len();
    let class = if evaluated == 0 {
        None
    } else if counts.flat == evaluated {
        Some(SprayClass::Flat)
    } else if counts.flat + counts.isotropic == evaluated {
        Some(SprayClass::Isotropic)
    } else if counts.generic == evaluated {
        Some(SprayClass::Generic)
    } else {
        None
    };
    ClassBlock {
        summary: ClassSummary {
            class,
            counts,
            lambda,
            max_flat_defect: fold(|c| c.flat_defect),
            max_isotropy_defect: fold(|c| c.isotropy_defect),
            max_alpha_s_minus_lambda: fold(|c| c.alpha_s_minus_lambda),
        },
        failures,
        per_sample,
    }
}

/// Classification report for the configured spray and for its deformation
/// by each configured projective factor.
pub fn cmd_classify(
    cfg: &RunConfig,
    samples: Option<usize>,
    seed: Option<u64>,
) -> Result<ClassifyReport, Failure> {
    let header = sample_header(cfg, samples, seed);
    if header.count == 0 {
        return Err(usage("sample count must be positive"));
    }
    let tol = cfg.tolerances.classify;
    let block = classify_block(&cfg.spray, &header, tol);
    let deformations = cfg
        .projective_factors
        .iter()
        .map(|f| {
            let m = projective_deform(&cfg.spray, &f.factor)
                .map_err(|e| usage(format!("projective factor {}: {e}", f.name)))?;
            Ok(Deformation {
                name: f.name.clone(),
                block: classify_block(&m, &header, tol),
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(ClassifyReport {
        schema: SCHEMA,
        command: "classify",
        config_digest: cfg.digest.clone(),
        tolerances: cfg.tolerances.clone(),
        n: cfg.spray.dim(),
        samples: header,
        block,
        deformations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "pass as expected")]
    PassAsExpected,
    #[serde(rename = "fail as expected")]
    FailAsExpected,
    #[serde(rename = "unexpected pass")]
    UnexpectedPass,
    #[serde(rename = "unexpected fail")]
    UnexpectedFail,
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateReport {
    pub name: String,
    pub expect: Expectation,
    /// Every sample evaluated, the order-2 system holds and the Hessian
    /// metric is positive definite.
    pub passed: bool,
    pub verdict: Verdict,
    pub audit: SolutionAudit,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSolutionReport {
    pub schema: u32,
    pub command: &'static str,
    pub config_digest: String,
    pub tolerances: ToleranceSet,
    pub n: usize,
    pub samples: SampleHeader,
    pub candidates: Vec<CandidateReport>,
    pub all_expected_passed: bool,
}

pub fn candidate_passes(audit: &SolutionAudit) -> bool {
    audit.evaluated == audit.samples
        && audit.evaluated > 0
        && audit.flags.order2_solution
        && audit.flags.hessian_positive
}

pub fn cmd_check_solution(
    cfg: &RunConfig,
    samples: Option<usize>,
    seed: Option<u64>,
) -> Result<CheckSolutionReport, Failure> {
    if cfg.candidates.is_empty() {
        return Err(usage("config has no [[candidates]]"));
    }
    let header = sample_header(cfg, samples, seed);
    if header.count == 0 {
        return Err(usage("sample count must be positive"));
    }
    let points = sample_points(&header.region, header.count, header.seed);
    let tol = cfg.tolerances.audit();
    let mut candidates = Vec::new();
    for c in &cfg.candidates {
        let audit = solution_audit(&cfg.spray, &c.function, &points, &tol)
            .map_err(|e| usage(format!("candidate {}: {e}", c.name)))?;
        let passed = candidate_passes(&audit);
        let verdict = match (c.expect, passed) {
            (Expectation::Pass, true) => Verdict::PassAsExpected,
            (Expectation::Pass, false) => Verdict::UnexpectedFail,
            (Expectation::Fail, false) => Verdict::FailAsExpected,
            (Expectation::Fail, true) => Verdict::UnexpectedPass,
        };
        candidates.push(CandidateReport {
            name: c.name.clone(),
            expect: c.expect,
            passed,
            verdict,
            audit,
        });
    }
    let all_expected_passed = candidates
        .iter()
        .all(|c| c.verdict != Verdict::UnexpectedFail);
    Ok(CheckSolutionReport {
        schema: SCHEMA,
        command: "check-solution",
        config_digest: cfg.digest.clone(),
        tolerances: cfg.tolerances.clone(),
        n: cfg.spray.dim(),
        samples: header,
        candidates,
        all_expected_passed,
    })
}

/// Number of arc-length samples used for the Hausdorff comparison.
pub const COMPARE_POINTS: usize = 2000;

pub fn write_csv(path: &GeodesicPath, out: &mut dyn Write) -> std::io::Result<()> {
    let mut header = vec!["t".to_string()];
    header.extend((1..=path.n).map(|i| format!("x{i}")));
    header.extend((1..=path.n).map(|i| format!("y{i}")));
    writeln!(out, "{}", header.join(","))?;
    for ((t, x), y) in path.times.iter().zip(&path.xs).zip(&path.ys) {
        let row: Vec<String> = std::iter::once(t)
            .chain(x)
            .chain(y)
            .map(|v| format!("{v:.16e}"))
            .collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_geodesics(
    cfg: &RunConfig,
    other: Option<&RunConfig>,
    x0: &[f64],
    y0: &[f64],
    t_end: f64,
    dt: f64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let path = geodesic_flow(&cfg.spray, x0, y0, t_end, dt).map_err(usage)?;
    write_csv(&path, out).map_err(io)?;
    if let Some(exit) = &path.exit {
        writeln!(
            err,
            "error: domain exit at t = {:.16e}: {}",
            exit.time, exit.message
        )
        .map_err(io)?;
        return Ok(EXIT_FAILURE);
    }
    if let Some(other) = other {
        if other.spray.dim() != cfg.spray.dim() {
            return Err(usage(format!(
                "compared spray has n = {}, expected {}",
                other.spray.dim(),
                cfg.spray.dim()
            )));
        }
        let second = geodesic_flow(&other.spray, x0, y0, t_end, dt).map_err(usage)?;
        if let Some(exit) = &second.exit {
            writeln!(
                err,
                "error: compared spray left its domain at t = {:.16e}: {}",
                exit.time, exit.message
            )
            .map_err(io)?;
            return Ok(EXIT_FAILURE);
        }
        let d = hausdorff_after_reparametrization(&path.xs, &second.xs, COMPARE_POINTS);
        let common =
            crate::geometry::arc_length(&path.xs).min(crate::geometry::arc_length(&second.xs));
        writeln!(err, "common arc length: {common:.16e}").map_err(io)?;
        writeln!(err, "hausdorff distance after reparametrization: {d:.16e}").map_err(io)?;
    }
    Ok(EXIT_OK)
}
