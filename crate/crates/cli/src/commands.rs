use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use katolab::conformal::{conformity_table, ConformityRow, DEFAULT_CONFORMITY_TOL};
use katolab::field::{make_scenario, run_scenario, RunOptions, ScenarioName, ScenarioReport, DEFAULT_MODES, FIELD_TOL};
use katolab::kato::{key_lemma_geometry, run_fuzz, FuzzConfig, FuzzReport, FuzzTarget, KeyGeometry};
use katolab::symbols::{ellipticity_constant_with, twist, OperatorName, OperatorRef, OperatorSpec, Sampling};
use katolab::tensor::Space;
use katolab::Execution;

use crate::config::Config;
use crate::output::{num, Header, Table};
use crate::CliError;

pub const FUZZ_TOL: f64 = 1e-9;
pub const ELLIPTICITY_TOL: f64 = 1e-9;
pub const MAX_TABLE_N: usize = 7;

/// Everything a command produces before formatting.
pub struct Outcome {
    pub header: Header,
    pub result: Value,
    pub table: Table,
    pub sides: Vec<SideFile>,
    /// First failing entry, reported on stderr with exit status 1.
    pub failure: Option<String>,
}

pub enum SideFile {
    Csv(PathBuf, Table),
    JsonLines(PathBuf, Vec<Value>),
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Io(e.to_string()))
}

fn require<T>(v: Option<T>, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Config(format!("missing {what}")))
}

fn positive_tolerance(t: f64) -> Result<f64, CliError> {
    if t.is_finite() && t > 0.0 {
        Ok(t)
    } else {
        Err(CliError::Config(format!("tolerance must be positive and finite, got {t}")))
    }
}

pub struct Common {
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub execution: Execution,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Largest dimension in the table (2..=7).
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub max_n: Option<u64>,
}

pub fn projections_verify(args: &VerifyArgs, common: &Common, cfg: &Config) -> Result<Outcome, CliError> {
    let max_n = cfg.pick(args.max_n, "max-n", 6)? as usize;
    if !(2..=MAX_TABLE_N).contains(&max_n) {
        return Err(CliError::Config(format!(
            "max-n must lie in 2..={MAX_TABLE_N}; symmetric powers beyond that do not fit in dense matrices"
        )));
    }
    let seed = cfg.pick(common.seed, "seed", 0)?;
    let tol = positive_tolerance(cfg.pick(common.tolerance, "tolerance", DEFAULT_CONFORMITY_TOL)?)?;
    let rows = conformity_table(max_n, tol, seed)?;
    let passed = rows.iter().all(|r| r.passes(tol));
    let table = Table {
        columns: vec![
            "constructor",
            "n",
            "k",
            "expected_rho_squared",
            "measured_rho_squared",
            "residual",
            "surjective",
            "certified",
            "twistor_symbol_deviation",
            "pass",
        ],
        rows: rows.iter().map(|r| conformity_csv_row(r, tol)).collect(),
    };
    Ok(Outcome {
        header: Header::new("projections verify", Some(seed), tol, None, passed),
        result: json!({ "max_n": max_n, "rows": to_value(&rows)? }),
        table,
        sides: Vec::new(),
        failure: rows.iter().find(|r| !r.passes(tol)).map(|r| {
            let k = r.k.map_or(String::new(), |k| format!(" k={k}"));
            format!(
                "{} n={}{k}: measured ρ² {}, expected {}, residual {:e}",
                r.constructor.as_str(),
                r.n,
                r.measured_rho_squared,
                r.expected_rho_squared,
                r.residual
            )
        }),
    })
}

fn conformity_csv_row(r: &ConformityRow, tol: f64) -> Vec<String> {
    vec![
        r.constructor.as_str().to_string(),
        r.n.to_string(),
        r.k.map_or(String::new(), |k| k.to_string()),
        num(r.expected_rho_squared),
        num(r.measured_rho_squared),
        num(r.residual),
        r.surjective.to_string(),
        r.certified.to_string(),
        r.twistor_symbol.as_ref().map_or(String::new(), |t| num(t.max_deviation)),
        r.passes(tol).to_string(),
    ]
}

#[derive(Debug, Clone, Args)]
pub struct EllipticityArgs {
    /// Catalog operator as `name:n[:k]`.
    #[arg(long)]
    pub op: Option<OperatorRef>,
    /// Tensor with a trivial bundle of this rank.
    #[arg(long)]
    pub twist: Option<usize>,
    /// Coarse sphere samples before local refinement.
    #[arg(long)]
    pub samples: Option<usize>,
}

fn twisted(op: &OperatorRef, rank: usize) -> Result<OperatorSpec, CliError> {
    let spec = op.build()?;
    match rank {
        0 => Err(CliError::Config("twist rank must be at least 1".into())),
        1 => Ok(spec),
        r => Ok(twist(&spec, &Space::fiber("E", r))?),
    }
}

#[derive(Serialize)]
struct EllipticityReport {
    operator: String,
    n: usize,
    fiber_dim: usize,
    epsilon: f64,
    declared_epsilon: Option<f64>,
    declared_rho_squared: Option<f64>,
    elliptic: bool,
    invariant: bool,
    argmin_xi: Vec<f64>,
    samples: usize,
}

pub fn ellipticity(args: &EllipticityArgs, common: &Common, cfg: &Config) -> Result<Outcome, CliError> {
    let op: OperatorRef = require(cfg.pick_opt(args.op, "op")?, "--op name:n[:k]")?;
    let spec = twisted(&op, cfg.pick(args.twist, "twist", 1)?)?;
    let tol = positive_tolerance(cfg.pick(common.tolerance, "tolerance", ELLIPTICITY_TOL)?)?;
    let coarse = cfg.pick(args.samples, "samples", Sampling::default().coarse_count)?;
    if coarse == 0 {
        return Err(CliError::Config("ellipticity needs at least one sphere sample".into()));
    }
    let sampling = Sampling { coarse_count: coarse, ..Sampling::default() };
    let r = ellipticity_constant_with(&spec, sampling, common.execution)?;
    let passed = spec.declared_epsilon.is_none_or(|d| (r.epsilon - d).abs() <= tol * d.max(1.0));
    let report = EllipticityReport {
        operator: spec.name.clone(),
        n: spec.n,
        fiber_dim: spec.fiber_dim(),
        epsilon: r.epsilon,
        declared_epsilon: spec.declared_epsilon,
        declared_rho_squared: spec.declared_rho_squared,
        elliptic: r.epsilon > tol,
        invariant: r.invariant,
        argmin_xi: r.argmin_xi.clone(),
        samples: r.samples,
    };
    let table = Table {
        columns: vec!["operator", "n", "fiber_dim", "epsilon", "declared_epsilon", "elliptic", "invariant", "pass"],
        rows: vec![vec![
            report.operator.clone(),
            report.n.to_string(),
            report.fiber_dim.to_string(),
            num(report.epsilon),
            report.declared_epsilon.map_or(String::new(), num),
            report.elliptic.to_string(),
            report.invariant.to_string(),
            passed.to_string(),
        ]],
    };
    Ok(Outcome {
        header: Header::new("ellipticity", None, tol, spec.declared_epsilon, passed),
        failure: (!passed)
            .then(|| format!("{}: ε = {}, declared {:?}", report.operator, report.epsilon, report.declared_epsilon)),
        result: to_value(&report)?,
        table,
        sides: Vec::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoremArg {
    Foldo,
    Hodge,
    KeyLemma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryArg {
    Line,
    Exterior,
    Interior,
}

macro_rules! value_enum_from_str {
    ($($t:ty),*) => {$(
        impl std::str::FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                <$t as ValueEnum>::from_str(s, true)
            }
        }
    )*};
}
value_enum_from_str!(TheoremArg, GeometryArg);

#[derive(Debug, Clone, Args)]
pub struct FuzzArgs {
    #[arg(long, value_enum)]
    pub theorem: Option<TheoremArg>,
    /// Catalog operator as `name:n[:k]` (foldo, key-lemma line geometry).
    #[arg(long)]
    pub op: Option<OperatorRef>,
    /// Key-lemma geometry.
    #[arg(long, value_enum)]
    pub geometry: Option<GeometryArg>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub fiber_dim: Option<usize>,
    #[arg(long)]
    pub twist: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Fixed coupling; drawn per sample from [0, c-max] when absent.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub c_star: Option<f64>,
    #[arg(long)]
    pub c_max: Option<f64>,
    /// Also write every verdict to this CSV file.
    #[arg(long)]
    pub verdicts_csv: Option<PathBuf>,
    /// Also write every verdict to this file, one JSON object per line.
    #[arg(long)]
    pub verdicts_jsonl: Option<PathBuf>,
}

fn coupling_ok(c: Option<f64>, name: &str) -> Result<Option<f64>, CliError> {
    match c {
        Some(v) if !(v.is_finite() && v >= 0.0) => {
            Err(CliError::Config(format!("{name} must be finite and >= 0, got {v}")))
        }
        other => Ok(other),
    }
}

fn fuzz_target(args: &FuzzArgs, cfg: &Config) -> Result<FuzzTarget, CliError> {
    let theorem: TheoremArg = require(cfg.pick_opt(args.theorem, "theorem")?, "--theorem foldo|hodge|key-lemma")?;
    let op: Option<OperatorRef> = cfg.pick_opt(args.op, "op")?;
    let n: Option<usize> = cfg.pick_opt(args.n, "n")?;
    let k: Option<usize> = cfg.pick_opt(args.k, "k")?;
    let fiber_dim = cfg.pick(args.fiber_dim, "fiber-dim", 1)?;
    if fiber_dim == 0 {
        return Err(CliError::Config("fiber-dim must be at least 1".into()));
    }
    let degree = |what: &str| -> Result<(usize, usize), CliError> {
        match (n, k, op) {
            (Some(n), Some(k), _) => Ok((n, k)),
            (_, _, Some(o)) if o.name == OperatorName::Hodge => Ok((n.unwrap_or(o.n), k.unwrap_or(o.k))),
            _ => Err(CliError::Config(format!("{what} needs --n and --k"))),
        }
    };
    Ok(match theorem {
        TheoremArg::Foldo => FuzzTarget::Foldo {
            op: require(op, "--op name:n[:k] for the foldo theorem")?,
            twist: cfg.pick(args.twist, "twist", 1)?.max(1),
        },
        TheoremArg::Hodge => {
            let (n, k) = degree("hodge fuzzing")?;
            FuzzTarget::Hodge { n, k, fiber_dim }
        }
        TheoremArg::KeyLemma => {
            let geometry = cfg.pick(args.geometry, "geometry", GeometryArg::Line)?;
            FuzzTarget::KeyLemma(match geometry {
                GeometryArg::Line => {
                    KeyGeometry::LineComponent { op: require(op, "--op name:n[:k] for the line geometry")? }
                }
                GeometryArg::Exterior => {
                    let (n, k) = degree("exterior blocks")?;
                    KeyGeometry::ExteriorBlocks { n, k, fiber_dim }
                }
                GeometryArg::Interior => {
                    let (n, k) = degree("interior blocks")?;
                    KeyGeometry::InteriorBlocks { n, k, fiber_dim }
                }
            })
        }
    })
}

fn fuzz_target_constant(target: &FuzzTarget, report: &FuzzReport) -> Result<Option<f64>, CliError> {
    Ok(match target {
        FuzzTarget::KeyLemma(g) => {
            let n = match *g {
                KeyGeometry::LineComponent { op } => op.n,
                KeyGeometry::ExteriorBlocks { n, .. } | KeyGeometry::InteriorBlocks { n, .. } => n,
            };
            let mut e1 = vec![0.0; n];
            e1[0] = 1.0;
            Some(1.0 / key_lemma_geometry(g, &e1)?.a())
        }
        _ => report.refined.as_ref().map(|r| r.constant),
    })
}

pub fn verdict_table(report: &FuzzReport) -> Table {
    Table {
        columns: vec!["theorem", "branch", "c", "c_star", "lhs", "rhs", "margin", "seed"],
        rows: report
            .verdicts
            .iter()
            .map(|v| {
                vec![
                    v.theorem.as_str().to_string(),
                    v.branch_label(),
                    num(v.c),
                    v.c_star.map_or(String::new(), num),
                    num(v.lhs),
                    num(v.rhs),
                    num(v.margin),
                    v.seed.map_or(String::new(), |s| s.to_string()),
                ]
            })
            .collect(),
    }
}

pub fn kato_fuzz(args: &FuzzArgs, common: &Common, cfg: &Config, csv: bool) -> Result<Outcome, CliError> {
    let target = fuzz_target(args, cfg)?;
    let seed = cfg.pick(common.seed, "seed", 0)?;
    let tolerance = positive_tolerance(cfg.pick(common.tolerance, "tolerance", FUZZ_TOL)?)?;
    let defaults = FuzzConfig::default();
    let fuzz = FuzzConfig {
        samples: cfg.pick(args.samples, "samples", defaults.samples)?,
        seed,
        c: coupling_ok(cfg.pick_opt(args.c, "c")?, "c")?,
        c_star: coupling_ok(cfg.pick_opt(args.c_star, "c-star")?, "c-star")?,
        c_max: coupling_ok(Some(cfg.pick(args.c_max, "c-max", defaults.c_max)?), "c-max")?.unwrap_or(defaults.c_max),
        tolerance,
        execution: common.execution,
        keep_verdicts: csv || args.verdicts_csv.is_some() || args.verdicts_jsonl.is_some(),
        ..defaults
    };
    let report = run_fuzz(&target, &fuzz)?;
    let target_constant = fuzz_target_constant(&target, &report)?;
    let table = verdict_table(&report);
    let mut sides = Vec::new();
    if let Some(p) = &args.verdicts_csv {
        sides.push(SideFile::Csv(p.clone(), verdict_table(&report)));
    }
    if let Some(p) = &args.verdicts_jsonl {
        sides.push(SideFile::JsonLines(p.clone(), report.verdicts.iter().map(to_value).collect::<Result<_, _>>()?));
    }
    let mut result = to_value(&report)?;
    if let Some(obj) = result.as_object_mut() {
        obj.remove("verdicts");
    }
    let failure = report.checks.iter().find(|c| c.violations > 0).map(|c| {
        format!("{} {}: {} violations, min margin {:e}", report.target, c.theorem.as_str(), c.violations, c.min_margin)
    });
    Ok(Outcome {
        header: Header::new("kato fuzz", Some(seed), tolerance, target_constant, report.passed()),
        result,
        table,
        sides,
        failure,
    })
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    #[arg(long)]
    pub scenario: Option<ScenarioName>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Grid points per torus axis.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Random Fourier modes in the generated field.
    #[arg(long)]
    pub modes: Option<usize>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub c_star: Option<f64>,
    /// Write per-point records to this CSV file.
    #[arg(long)]
    pub points_csv: Option<PathBuf>,
}

fn default_degree(name: ScenarioName) -> usize {
    match name {
        ScenarioName::YangMillsF | ScenarioName::InstantonFplus => 2,
        ScenarioName::DiracSpinor | ScenarioName::TwistorSpinor => 0,
        _ => 1,
    }
}

fn check_table(report: &ScenarioReport) -> Table {
    Table {
        columns: vec!["scenario", "theorem", "samples", "violations", "min_margin"],
        rows: report
            .checks
            .iter()
            .map(|c| {
                vec![
                    report.scenario.clone(),
                    c.theorem.as_str().to_string(),
                    c.samples.to_string(),
                    c.violations.to_string(),
                    num(c.min_margin),
                ]
            })
            .collect(),
    }
}

fn points_table(report: &ScenarioReport) -> Table {
    const AXES: [&str; 8] = ["x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8"];
    let mut columns: Vec<&'static str> = AXES.iter().take(report.n.min(AXES.len())).copied().collect();
    columns.extend(["lhs", "rhs", "margin"]);
    Table {
        columns,
        rows: report
            .points
            .iter()
            .map(|p| {
                let mut row: Vec<String> = p.x.iter().take(AXES.len()).map(|&x| num(x)).collect();
                row.extend([num(p.lhs), num(p.rhs), num(p.margin)]);
                row
            })
            .collect(),
    }
}

pub fn field_run(args: &FieldArgs, common: &Common, cfg: &Config) -> Result<Outcome, CliError> {
    let name: ScenarioName = require(cfg.pick_opt(args.scenario, "scenario")?, "--scenario")?;
    let n: usize = require(cfg.pick_opt(args.n, "n")?, "--n")?;
    let k = cfg.pick(args.k, "k", default_degree(name))?;
    let seed = cfg.pick(common.seed, "seed", 0)?;
    let grid = cfg.pick(args.grid, "grid", RunOptions::default().grid)?;
    if grid == 0 {
        return Err(CliError::Config("grid must be at least 1".into()));
    }
    let modes = cfg.pick(args.modes, "modes", DEFAULT_MODES)?;
    let tolerance = positive_tolerance(cfg.pick(common.tolerance, "tolerance", FIELD_TOL)?)?;
    let opts = RunOptions {
        c: coupling_ok(Some(cfg.pick(args.c, "c", 1.0)?), "c")?.unwrap_or(1.0),
        c_star: coupling_ok(Some(cfg.pick(args.c_star, "c-star", 1.0)?), "c-star")?.unwrap_or(1.0),
        grid,
        tolerance,
        record_points: args.points_csv.is_some(),
        execution: common.execution,
    };
    let scenario = make_scenario(name, n, k, seed, modes)?;
    let report = run_scenario(&scenario, &opts)?;
    let sides = args.points_csv.iter().map(|p| SideFile::Csv(p.clone(), points_table(&report))).collect();
    let failure = report.checks.iter().find(|c| c.violations > 0).map(|c| {
        format!(
            "{} {}: {} violations, min margin {:e}",
            report.scenario,
            c.theorem.as_str(),
            c.violations,
            c.min_margin
        )
    });
    let mut result = to_value(&report)?;
    if let Some(obj) = result.as_object_mut() {
        obj.remove("points");
    }
    Ok(Outcome {
        header: Header::new(
            "field run",
            Some(seed),
            tolerance,
            Some(report.constants_used.target_constant),
            report.violations == 0,
        ),
        result,
        table: check_table(&report),
        sides,
        failure,
    })
}

#[derive(Debug, Clone, Args)]
pub struct SuiteArgs {
    /// Largest dimension for the projection and ellipticity sections (2..=7).
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub max_n: Option<u64>,
    /// Fuzz samples per target.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Grid points per axis for the field section.
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
struct SuiteEntry {
    section: &'static str,
    target: String,
    passed: bool,
    violations: usize,
    min_margin: Option<f64>,
}

fn catalog_refs(max_n: usize) -> Vec<OperatorRef> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        let mut push = |name, k| out.push(OperatorRef { name, n, k });
        push(OperatorName::Connection, 0);
        push(OperatorName::Dirac, 0);
        push(OperatorName::Twistor, 0);
        for k in 1..n {
            push(OperatorName::Hodge, k);
            push(OperatorName::ExteriorOnly, k);
            push(OperatorName::InteriorOnly, k);
        }
    }
    out
}

pub fn suite_all(args: &SuiteArgs, common: &Common, cfg: &Config) -> Result<Outcome, CliError> {
    let max_n = cfg.pick(args.max_n, "max-n", 6)? as usize;
    if !(2..=MAX_TABLE_N).contains(&max_n) {
        return Err(CliError::Config(format!("max-n must lie in 2..={MAX_TABLE_N}")));
    }
    let seed = cfg.pick(common.seed, "seed", 0)?;
    let samples = cfg.pick(args.samples, "samples", 2000)?;
    let grid = cfg.pick(args.grid, "grid", 6)?;
    if grid == 0 {
        return Err(CliError::Config("grid must be at least 1".into()));
    }
    let override_tol = cfg.pick_opt(common.tolerance, "tolerance")?.map(positive_tolerance).transpose()?;
    let tol_or = |d: f64| override_tol.unwrap_or(d);
    let mut entries = Vec::new();

    let table_tol = tol_or(DEFAULT_CONFORMITY_TOL);
    for r in conformity_table(max_n, table_tol, seed)? {
        let k = r.k.map_or(String::new(), |k| format!(":{k}"));
        entries.push(SuiteEntry {
            section: "projections",
            target: format!("{}:{}{k}", r.constructor.as_str(), r.n),
            passed: r.passes(table_tol),
            violations: usize::from(!r.passes(table_tol)),
            min_margin: None,
        });
    }

    let eps_tol = tol_or(ELLIPTICITY_TOL);
    for op in catalog_refs(max_n) {
        let spec = op.build()?;
        let r = ellipticity_constant_with(&spec, Sampling::default(), common.execution)?;
        let ok = spec.declared_epsilon.is_none_or(|d| (r.epsilon - d).abs() <= eps_tol * d.max(1.0));
        entries.push(SuiteEntry {
            section: "ellipticity",
            target: op.to_string(),
            passed: ok,
            violations: usize::from(!ok),
            min_margin: None,
        });
    }

    let fuzz_n = max_n.min(5);
    let mut targets = Vec::new();
    for n in 2..=fuzz_n.min(4) {
        targets.push(FuzzTarget::Foldo { op: OperatorRef { name: OperatorName::Dirac, n, k: 0 }, twist: 1 });
        targets.push(FuzzTarget::Foldo { op: OperatorRef { name: OperatorName::Twistor, n, k: 0 }, twist: 1 });
        targets.push(FuzzTarget::KeyLemma(KeyGeometry::LineComponent {
            op: OperatorRef { name: OperatorName::Dirac, n, k: 0 },
        }));
    }
    for n in 2..=fuzz_n {
        for k in 1..n {
            targets.push(FuzzTarget::Hodge { n, k, fiber_dim: 2 });
            targets.push(FuzzTarget::KeyLemma(KeyGeometry::ExteriorBlocks { n, k, fiber_dim: 2 }));
            targets.push(FuzzTarget::KeyLemma(KeyGeometry::InteriorBlocks { n, k, fiber_dim: 2 }));
        }
    }
    let fuzz_tol = tol_or(FUZZ_TOL);
    for (i, target) in targets.iter().enumerate() {
        let fuzz = FuzzConfig {
            samples,
            seed: seed.wrapping_add(i as u64),
            tolerance: fuzz_tol,
            execution: common.execution,
            ..FuzzConfig::default()
        };
        let r = run_fuzz(target, &fuzz)?;
        entries.push(SuiteEntry {
            section: "kato",
            target: target.to_string(),
            passed: r.passed(),
            violations: r.violations(),
            min_margin: Some(r.min_margin()),
        });
    }

    let field_tol = tol_or(FIELD_TOL);
    let mut run_index = 0u64;
    for n in 2..=max_n.min(4) {
        for name in ScenarioName::ALL {
            let degrees: Vec<usize> = if name.takes_degree() { (1..n).collect() } else { vec![0] };
            for k in degrees.into_iter().filter(|&k| name.admits(n, k)) {
                let scenario = make_scenario(name, n, k, seed.wrapping_add(run_index), DEFAULT_MODES)?;
                run_index += 1;
                let opts =
                    RunOptions { grid, tolerance: field_tol, execution: common.execution, ..RunOptions::default() };
                let r = run_scenario(&scenario, &opts)?;
                let label =
                    if name.takes_degree() || k > 0 { format!("{name}:{n}:{k}") } else { format!("{name}:{n}") };
                entries.push(SuiteEntry {
                    section: "field",
                    target: label,
                    passed: r.violations == 0,
                    violations: r.violations,
                    min_margin: Some(r.min_margin),
                });
            }
        }
    }

    let passed = entries.iter().all(|e| e.passed);
    let failed = entries.iter().filter(|e| !e.passed).count();
    let table = Table {
        columns: vec!["section", "target", "passed", "violations", "min_margin"],
        rows: entries
            .iter()
            .map(|e| {
                vec![
                    e.section.to_string(),
                    e.target.clone(),
                    e.passed.to_string(),
                    e.violations.to_string(),
                    e.min_margin.map_or(String::new(), num),
                ]
            })
            .collect(),
    };
    let result = json!({
        "max_n": max_n,
        "samples": samples,
        "grid": grid,
        "tolerances": {
            "projections": table_tol,
            "ellipticity": eps_tol,
            "kato": fuzz_tol,
            "field": field_tol,
        },
        "entries": to_value(&entries)?,
        "failed": failed,
    });
    let failure = entries.iter().find(|e| !e.passed).map(|e| format!("{} {}", e.section, e.target));
    Ok(Outcome {
        header: Header::new("suite all", Some(seed), fuzz_tol, None, passed),
        result,
        table,
        sides: Vec::new(),
        failure,
    })
}
