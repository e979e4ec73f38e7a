//! Seeded randomized checks of the lemmas and theorems.
//!
//! Samples are drawn in fixed-size batches, each from its own ChaCha stream
//! of the master seed, and summaries are merged in batch order, so a report
//! depends only on the configuration and not on the schedule.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use super::checks::{check_theorem_hodge, kato_ratio, BranchRule, FoldoOperator, KeyLemma};
use super::split::{check_unit, Block, FormGeometry};
use super::verdict::{KatoVerdict, Theorem};
use crate::conformal::Subspace;
use crate::error::{Error, Result};
use crate::exec::{batches, Execution};
use crate::rng::{batch_rng, complex_normal_vector, coupling, unit_covector, LabRng};
use crate::symbols::{twist, OperatorRef};
use crate::tensor::index::binomial;
use crate::tensor::{hermitian_eigen, CMatrix, CVector, Space, C64};

/// Maps and subspaces the key lemma is exercised on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum KeyGeometry {
    /// `C = P₁`, the component of a catalog symbol onto `P(L ⊗ E)`, with `U₂ = W ⊗ E`.
    LineComponent { op: OperatorRef },
    /// `C = ε^E` on `V₁₂ ⊕ V₂₁` with `U₂ = V₂₁`.
    ExteriorBlocks { n: usize, k: usize, fiber_dim: usize },
    /// `C = ι^E` on `V₁₁ ⊕ V₂₂` with `U₂ = V₂₂`.
    InteriorBlocks { n: usize, k: usize, fiber_dim: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "theorem")]
pub enum FuzzTarget {
    KeyLemma(KeyGeometry),
    /// Catalog operator, optionally twisted by a trivial fiber of dimension `twist > 1`.
    Foldo {
        op: OperatorRef,
        twist: usize,
    },
    Hodge {
        n: usize,
        k: usize,
        fiber_dim: usize,
    },
}

impl fmt::Display for FuzzTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuzzTarget::KeyLemma(KeyGeometry::LineComponent { op }) => write!(f, "key-lemma:line:{op}"),
            FuzzTarget::KeyLemma(KeyGeometry::ExteriorBlocks { n, k, fiber_dim }) => {
                write!(f, "key-lemma:exterior:{n}:{k}:E{fiber_dim}")
            }
            FuzzTarget::KeyLemma(KeyGeometry::InteriorBlocks { n, k, fiber_dim }) => {
                write!(f, "key-lemma:interior:{n}:{k}:E{fiber_dim}")
            }
            FuzzTarget::Foldo { op, twist } if *twist > 1 => write!(f, "foldo:{op}:E{twist}"),
            FuzzTarget::Foldo { op, .. } => write!(f, "foldo:{op}"),
            FuzzTarget::Hodge { n, k, fiber_dim } => write!(f, "hodge:{n}:{k}:E{fiber_dim}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzConfig {
    pub samples: usize,
    pub seed: u64,
    /// Fixed coupling; when absent each sample draws one from `[0, c_max]`.
    pub c: Option<f64>,
    pub c_star: Option<f64>,
    pub c_max: f64,
    /// Share of samples drawn from the vanishing branch.
    pub vanishing_fraction: f64,
    /// Margins below `-tolerance · scale` count as violations.
    pub tolerance: f64,
    pub batch_size: usize,
    #[serde(skip)]
    pub execution: Execution,
    /// Keep every verdict in the report.
    #[serde(skip)]
    pub keep_verdicts: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            samples: 10_000,
            seed: 0,
            c: None,
            c_star: None,
            c_max: 1e3,
            vanishing_fraction: 0.3,
            tolerance: 1e-9,
            batch_size: 1000,
            execution: Execution::default(),
            keep_verdicts: false,
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::BadSampleCount("samples must be at least 1".into()));
        }
        let bad = |x: f64| !x.is_finite() || x < 0.0;
        if self.c.is_some_and(bad) || self.c_star.is_some_and(bad) || bad(self.c_max) {
            return Err(Error::BadConstants("couplings must be finite and nonnegative".into()));
        }
        if !(0.0..=1.0).contains(&self.vanishing_fraction) {
            return Err(Error::BadConstants("vanishing fraction must lie in [0, 1]".into()));
        }
        if bad(self.tolerance) {
            return Err(Error::BadConstants("tolerance must be finite and nonnegative".into()));
        }
        Ok(())
    }
}

/// Aggregate over the verdicts of one inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub theorem: Theorem,
    pub samples: usize,
    pub violations: usize,
    /// Smallest `margin / scale`.
    pub min_margin: f64,
    pub branches: BTreeMap<String, usize>,
}

impl CheckSummary {
    pub(crate) fn new(theorem: Theorem) -> Self {
        Self { theorem, samples: 0, violations: 0, min_margin: f64::INFINITY, branches: BTreeMap::new() }
    }

    pub(crate) fn record(&mut self, v: &KatoVerdict, tolerance: f64) {
        self.samples += 1;
        if !v.passes(tolerance) {
            self.violations += 1;
        }
        self.min_margin = self.min_margin.min(v.relative_margin());
        *self.branches.entry(v.branch_label()).or_default() += 1;
    }

    fn merge(&mut self, other: &CheckSummary) {
        self.samples += other.samples;
        self.violations += other.violations;
        self.min_margin = self.min_margin.min(other.min_margin);
        for (b, c) in &other.branches {
            *self.branches.entry(b.clone()).or_default() += c;
        }
    }
}

/// Observed ratio `lhs / |d|φ||²` on exactly constrained samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinedSummary {
    /// The constant `1 + c̃` of the vanishing branch.
    pub constant: f64,
    pub samples: usize,
    pub min_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzReport {
    pub target: String,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    pub checks: Vec<CheckSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refined: Option<RefinedSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<KatoVerdict>,
}

impl FuzzReport {
    pub fn violations(&self) -> usize {
        self.checks.iter().map(|c| c.violations).sum()
    }

    pub fn min_margin(&self) -> f64 {
        self.checks.iter().map(|c| c.min_margin).fold(f64::INFINITY, f64::min)
    }

    pub fn check(&self, theorem: Theorem) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.theorem == theorem)
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }
}

#[derive(Default)]
struct BatchOutcome {
    summaries: BTreeMap<Theorem, CheckSummary>,
    refined_min: Option<f64>,
    refined_samples: usize,
    verdicts: Vec<KatoVerdict>,
}

impl BatchOutcome {
    fn record(&mut self, v: KatoVerdict, cfg: &FuzzConfig, sample: usize) {
        self.summaries.entry(v.theorem).or_insert_with(|| CheckSummary::new(v.theorem)).record(&v, cfg.tolerance);
        if cfg.keep_verdicts {
            self.verdicts.push(v.with_origin(cfg.seed, sample as u64));
        }
    }

    fn refine(&mut self, ratio: f64) {
        if ratio.is_finite() {
            self.refined_samples += 1;
            self.refined_min = Some(self.refined_min.map_or(ratio, |m| m.min(ratio)));
        }
    }
}

fn draw_coupling(rng: &mut LabRng, fixed: Option<f64>, max: f64) -> f64 {
    fixed.unwrap_or_else(|| coupling(rng, max))
}

/// Random magnitude in `[10^-2, 10^2]`, so samples probe unbalanced splits.
fn magnitude(rng: &mut LabRng) -> C64 {
    C64::new(10f64.powf(rng.random_range(-2.0..=2.0)), 0.0)
}

fn kernel_in(c_map: &CMatrix, u: &CMatrix) -> Result<CMatrix> {
    let m = c_map * u;
    let (spectrum, vectors) = hermitian_eigen(&(m.adjoint() * &m))?;
    let top = spectrum.max().unwrap_or(0.0).max(1.0);
    let keep: Vec<usize> =
        (0..spectrum.eigenvalues.len()).filter(|&i| spectrum.eigenvalues[i] <= 1e-10 * top).collect();
    let mut basis = CMatrix::zeros(u.ncols(), keep.len());
    for (j, &i) in keep.iter().enumerate() {
        basis.set_column(j, &vectors.column(i));
    }
    Ok(u * basis)
}

struct KeySetup {
    lemma: KeyLemma,
    u_basis: CMatrix,
    kernel: CMatrix,
}

fn key_setup(geometry: &KeyGeometry, xi0: &[f64]) -> Result<KeySetup> {
    let (c_map, u_basis, u2) = match *geometry {
        KeyGeometry::LineComponent { op } => {
            let spec = op.build()?;
            let f1 = Subspace::span(&spec.symbol_matrix(xi0)?);
            let c_map = f1.basis().adjoint() * spec.full_symbol.entries();
            let d = spec.fiber_dim();
            let dim = spec.n * d;
            let w = CMatrix::from_fn(dim, dim, |r, c| {
                let (i, e) = (r / d, r % d);
                let (j, f) = (c / d, c % d);
                let delta = if i == j { 1.0 } else { 0.0 };
                C64::new(if e == f { delta - xi0[i] * xi0[j] } else { 0.0 }, 0.0)
            });
            (c_map, CMatrix::identity(dim, dim), Subspace::span(&w))
        }
        KeyGeometry::ExteriorBlocks { n, k, fiber_dim } | KeyGeometry::InteriorBlocks { n, k, fiber_dim } => {
            let g = FormGeometry::new(n, k, fiber_dim)?;
            let exterior = matches!(geometry, KeyGeometry::ExteriorBlocks { .. });
            let (first, second) = if exterior { (Block::V12, Block::V21) } else { (Block::V11, Block::V22) };
            let p1 = g.block_projector(first, xi0)?;
            let p2 = g.block_projector(second, xi0)?;
            let dim = g.total_dim();
            let degree = if exterior { k + 1 } else { k - 1 };
            let mut c_map = CMatrix::zeros(binomial(n, degree) * fiber_dim, dim);
            for col in 0..dim {
                let mut unit = CVector::zeros(dim);
                unit[col] = C64::new(1.0, 0.0);
                let image = if exterior { g.exterior(&unit) } else { g.interior(&unit) };
                c_map.set_column(col, &image);
            }
            let u = Subspace::span(&(&p1 + &p2));
            (c_map, u.basis().clone(), Subspace::span(&p2))
        }
    };
    let kernel = kernel_in(&c_map, &u_basis)?;
    let lemma = KeyLemma::new(&c_map, &u2)?;
    Ok(KeySetup { lemma, u_basis, kernel })
}

/// The map, `U₂` and constant `a` of a key-lemma geometry along the unit covector `xi0`.
pub fn key_lemma_geometry(geometry: &KeyGeometry, xi0: &[f64]) -> Result<KeyLemma> {
    check_unit(xi0)?;
    Ok(key_setup(geometry, xi0)?.lemma)
}

impl KeySetup {
    fn sample(&self, rng: &mut LabRng, vanishing: bool) -> (CVector, CVector) {
        let b2 = self.lemma.u2_basis();
        let u2 = b2 * complex_normal_vector(rng, b2.ncols()) * magnitude(rng);
        let u1 = if vanishing {
            let z = complex_normal_vector(rng, self.kernel.ncols());
            &self.kernel * z * magnitude(rng) - &u2
        } else {
            &self.u_basis * complex_normal_vector(rng, self.u_basis.ncols()) * magnitude(rng)
        };
        (u1, u2)
    }
}

fn run_key_lemma(
    geometry: &KeyGeometry,
    cfg: &FuzzConfig,
    batch: usize,
    start: usize,
    len: usize,
) -> Result<BatchOutcome> {
    let mut rng = batch_rng(cfg.seed, batch as u64);
    let n = match *geometry {
        KeyGeometry::LineComponent { op } => op.n,
        KeyGeometry::ExteriorBlocks { n, .. } | KeyGeometry::InteriorBlocks { n, .. } => n,
    };
    let xi0 = unit_covector(&mut rng, n);
    let setup = key_setup(geometry, &xi0)?;
    let mut out = BatchOutcome::default();
    for s in start..start + len {
        let vanishing = rng.random_bool(cfg.vanishing_fraction);
        let (u1, u2) = setup.sample(&mut rng, vanishing);
        let c = draw_coupling(&mut rng, cfg.c, cfg.c_max);
        out.record(setup.lemma.check(&u1, &u2, c), cfg, s);
    }
    Ok(out)
}

fn foldo_operator(op: OperatorRef, twist_dim: usize) -> Result<FoldoOperator> {
    let spec = op.build()?;
    let spec = if twist_dim > 1 { twist(&spec, &Space::fiber("E2", twist_dim))? } else { spec };
    FoldoOperator::new(spec)
}

fn run_foldo(
    op: &FoldoOperator,
    kernel: &CMatrix,
    cfg: &FuzzConfig,
    batch: usize,
    start: usize,
    len: usize,
) -> Result<BatchOutcome> {
    let mut rng = batch_rng(cfg.seed, batch as u64);
    let d = op.op.fiber_dim();
    let dim = op.op.n * d;
    let mut out = BatchOutcome::default();
    for s in start..start + len {
        let vanishing = rng.random_bool(cfg.vanishing_fraction);
        let phi = complex_normal_vector(&mut rng, d) * magnitude(&mut rng);
        let raw = complex_normal_vector(&mut rng, dim) * magnitude(&mut rng);
        let u = if vanishing { kernel * raw } else { raw };
        let c = draw_coupling(&mut rng, cfg.c, cfg.c_max);
        let rule = if vanishing { BranchRule::Known(true) } else { BranchRule::Detect };
        let verdict = op.check(&u, &phi, c, rule)?;
        if vanishing {
            out.refine(kato_ratio(op, &u, &phi, c));
        }
        out.record(verdict, cfg, s);
        let xi0 = unit_covector(&mut rng, op.op.n);
        out.record(op.check_line_corollary(&u, &xi0, c)?, cfg, s);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
enum FormKind {
    Generic,
    Closed,
    Coclosed,
    Harmonic,
}

fn run_hodge(g: &FormGeometry, cfg: &FuzzConfig, batch: usize, start: usize, len: usize) -> Result<BatchOutcome> {
    let mut rng = batch_rng(cfg.seed, batch as u64);
    let mut out = BatchOutcome::default();
    for s in start..start + len {
        let kind = if rng.random_bool(cfg.vanishing_fraction) {
            [FormKind::Closed, FormKind::Coclosed, FormKind::Harmonic][rng.random_range(0..3)]
        } else {
            FormKind::Generic
        };
        let phi = complex_normal_vector(&mut rng, g.section_dim()) * magnitude(&mut rng);
        let raw = complex_normal_vector(&mut rng, g.total_dim()) * magnitude(&mut rng);
        let (v, rules) = match kind {
            FormKind::Generic => (raw, (BranchRule::Detect, BranchRule::Detect)),
            FormKind::Closed => (g.project_closed(&raw), (BranchRule::Known(true), BranchRule::Detect)),
            FormKind::Coclosed => (g.project_coclosed(&raw), (BranchRule::Detect, BranchRule::Known(true))),
            FormKind::Harmonic => (g.project_harmonic(&raw), (BranchRule::Known(true), BranchRule::Known(true))),
        };
        let c = draw_coupling(&mut rng, cfg.c, cfg.c_max);
        let c_star = draw_coupling(&mut rng, cfg.c_star, cfg.c_max);
        let check = check_theorem_hodge(g, &v, &phi, c, c_star, rules)?;
        if matches!(kind, FormKind::Harmonic) && check.theorem.rhs > 0.0 {
            let grad2 = check.theorem.rhs / (1.0 + check.theorem.ctilde_used.to_f64());
            out.refine(v.norm_squared() / grad2);
        }
        for verdict in check.verdicts() {
            out.record(verdict.clone(), cfg, s);
        }
    }
    Ok(out)
}

const CHECK_ORDER: [Theorem; 8] = [
    Theorem::KeyLemma,
    Theorem::Foldo,
    Theorem::LineCorollary,
    Theorem::Hodge,
    Theorem::HodgeCorollary,
    Theorem::ExteriorDomination,
    Theorem::InteriorDomination,
    Theorem::DirectionalKato,
];

pub fn run_fuzz(target: &FuzzTarget, cfg: &FuzzConfig) -> Result<FuzzReport> {
    cfg.validate()?;
    let plan = batches(cfg.samples, cfg.batch_size);
    let (outcomes, refined_constant): (Vec<Result<BatchOutcome>>, Option<f64>) = match *target {
        FuzzTarget::KeyLemma(geometry) => {
            let mut e1 = vec![
                0.0;
                match geometry {
                    KeyGeometry::LineComponent { op } => op.n,
                    KeyGeometry::ExteriorBlocks { n, .. } | KeyGeometry::InteriorBlocks { n, .. } => n,
                }
            ];
            e1[0] = 1.0;
            // Fails early on geometries without a nonzero restriction.
            key_setup(&geometry, &e1)?;
            let runs = cfg.execution.map(plan.len(), |b| {
                let (idx, start, len) = plan[b];
                run_key_lemma(&geometry, cfg, idx, start, len)
            });
            (runs, None)
        }
        FuzzTarget::Foldo { op, twist } => {
            let op = foldo_operator(op, twist)?;
            let kernel = op.kernel_projector();
            let constant = op.refined_constant();
            let runs = cfg.execution.map(plan.len(), |b| {
                let (idx, start, len) = plan[b];
                run_foldo(&op, &kernel, cfg, idx, start, len)
            });
            (runs, Some(constant))
        }
        FuzzTarget::Hodge { n, k, fiber_dim } => {
            let g = FormGeometry::new(n, k, fiber_dim)?;
            let runs = cfg.execution.map(plan.len(), |b| {
                let (idx, start, len) = plan[b];
                run_hodge(&g, cfg, idx, start, len)
            });
            let pair = super::ctilde::hodge_ctilde_pair(0.0, 0.0, k, n, true, true)?;
            (runs, Some(1.0 + pair.min))
        }
    };
    let mut summaries: BTreeMap<Theorem, CheckSummary> = BTreeMap::new();
    let mut refined_min: Option<f64> = None;
    let mut refined_samples = 0;
    let mut verdicts = Vec::new();
    for outcome in outcomes {
        let outcome = outcome?;
        for (t, s) in &outcome.summaries {
            summaries.entry(*t).or_insert_with(|| CheckSummary::new(*t)).merge(s);
        }
        if let Some(m) = outcome.refined_min {
            refined_min = Some(refined_min.map_or(m, |r: f64| r.min(m)));
        }
        refined_samples += outcome.refined_samples;
        verdicts.extend(outcome.verdicts);
    }
    let checks = CHECK_ORDER.iter().filter_map(|t| summaries.remove(t)).collect();
    let refined = refined_constant.map(|constant| RefinedSummary {
        constant,
        samples: refined_samples,
        min_ratio: refined_min.unwrap_or(f64::INFINITY),
    });
    Ok(FuzzReport {
        target: target.to_string(),
        seed: cfg.seed,
        samples: cfg.samples,
        tolerance: cfg.tolerance,
        checks,
        refined,
        verdicts,
    })
}
