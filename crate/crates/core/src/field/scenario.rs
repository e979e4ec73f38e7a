//! Preset fields and gridwise Kato checks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::trig::{apply_operator, TrigField};
use crate::conformal::hodge_star;
use crate::error::{Error, Result};
use crate::exec::{batches, Execution};
use crate::kato::{
    check_theorem_hodge, ctilde_operator, hodge_ctilde_pair, BranchRule, CheckSummary, FoldoOperator, FormGeometry,
    KatoVerdict, Theorem,
};
use crate::rng::master_rng;
use crate::symbols::{catalog, twist, OperatorName, OperatorSpec};
use crate::tensor::{LinearMap, Space};

pub const DEFAULT_MODES: usize = 8;
pub const DEFAULT_MAX_FREQ: i32 = 3;
pub const FIELD_TOL: f64 = 1e-8;
/// Points with `|φ| <= SKIP_TOL · coefficient norm` are skipped.
pub const SKIP_TOL: f64 = 1e-8;
/// Fiber dimension used for matrix-valued fields (`gl(2)`).
pub const MATRIX_FIBER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioName {
    GenericForm,
    ClosedForm,
    CoclosedForm,
    YangMillsF,
    HiggsDPhi,
    InstantonFplus,
    MonopoleOmega,
    DiracSpinor,
    TwistorSpinor,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 9] = [
        ScenarioName::GenericForm,
        ScenarioName::ClosedForm,
        ScenarioName::CoclosedForm,
        ScenarioName::YangMillsF,
        ScenarioName::HiggsDPhi,
        ScenarioName::InstantonFplus,
        ScenarioName::MonopoleOmega,
        ScenarioName::DiracSpinor,
        ScenarioName::TwistorSpinor,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioName::GenericForm => "generic-form",
            ScenarioName::ClosedForm => "closed-form",
            ScenarioName::CoclosedForm => "coclosed-form",
            ScenarioName::YangMillsF => "yang-mills-F",
            ScenarioName::HiggsDPhi => "higgs-dPhi",
            ScenarioName::InstantonFplus => "instanton-Fplus",
            ScenarioName::MonopoleOmega => "monopole-omega",
            ScenarioName::DiracSpinor => "dirac-spinor",
            ScenarioName::TwistorSpinor => "twistor-spinor",
        }
    }

    /// Whether the scenario takes a form degree from the caller.
    pub fn takes_degree(self) -> bool {
        matches!(self, ScenarioName::GenericForm | ScenarioName::ClosedForm | ScenarioName::CoclosedForm)
    }

    /// Whether `(n, k)` is admissible; `k` is ignored when fixed by the scenario.
    pub fn admits(self, n: usize, k: usize) -> bool {
        match self {
            ScenarioName::GenericForm | ScenarioName::ClosedForm | ScenarioName::CoclosedForm => k >= 1 && k < n,
            ScenarioName::YangMillsF => n >= 3,
            ScenarioName::HiggsDPhi => n >= 2,
            ScenarioName::InstantonFplus => n == 4,
            ScenarioName::MonopoleOmega => n == 3,
            ScenarioName::DiracSpinor => n >= 1,
            ScenarioName::TwistorSpinor => n >= 2,
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioName::ALL.into_iter().find(|n| n.as_str() == s).ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

/// Exact differential identities of a preset field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Constraints {
    /// `dφ = 0` (or `Dφ = 0` for spinor scenarios).
    pub d_vanishing: bool,
    /// `d*φ = 0`.
    pub dstar_vanishing: bool,
}

/// Which inequality a scenario is checked against.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum ScenarioCheck {
    Hodge { geometry: FormGeometry, exterior: OperatorSpec, interior: OperatorSpec },
    Foldo(FoldoOperator),
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub n: usize,
    pub k: Option<usize>,
    pub seed: u64,
    pub field: TrigField,
    pub constraints: Constraints,
    pub check: ScenarioCheck,
    /// Largest coefficient norm of the constrained differentials divided by `‖∇φ‖`.
    pub constraint_residual: Option<f64>,
}

impl Scenario {
    pub fn operator_label(&self) -> String {
        match &self.check {
            ScenarioCheck::Hodge { geometry, .. } => {
                format!("hodge:{}:{}:E{}", geometry.n, geometry.k, geometry.fiber_dim)
            }
            ScenarioCheck::Foldo(op) => op.op.name.clone(),
        }
    }
}

/// Fiber `Λ^k ⊗ E`, plain `Λ^k` when `E` is a line.
pub fn form_fiber(n: usize, k: usize, fiber_dim: usize) -> Result<Space> {
    let forms = Space::exterior(n, k)?;
    Ok(if fiber_dim == 1 { forms } else { Space::tensor(&[forms, Space::fiber("E", fiber_dim)]) })
}

fn with_fiber(op: OperatorSpec, fiber_dim: usize) -> Result<OperatorSpec> {
    if fiber_dim == 1 {
        Ok(op)
    } else {
        twist(&op, &Space::fiber("E", fiber_dim))
    }
}

/// `d = ε ∘ ∇` on `E`-valued `k`-forms.
pub fn exterior_derivative(n: usize, k: usize, fiber_dim: usize) -> Result<OperatorSpec> {
    with_fiber(catalog(OperatorName::ExteriorOnly, n, k, None)?, fiber_dim)
}

/// `d* = -ι ∘ ∇` on `E`-valued `k`-forms.
pub fn codifferential(n: usize, k: usize, fiber_dim: usize) -> Result<OperatorSpec> {
    with_fiber(catalog(OperatorName::InteriorOnly, n, k, None)?, fiber_dim)
}

fn random_form(rng: &mut crate::rng::LabRng, n: usize, k: usize, fiber_dim: usize, modes: usize) -> Result<TrigField> {
    Ok(TrigField::random(rng, n, form_fiber(n, k, fiber_dim)?, modes, DEFAULT_MAX_FREQ))
}

fn star_on_forms(n: usize, k: usize, fiber_dim: usize) -> Result<LinearMap> {
    let star = hodge_star(n, k)?;
    let star = if fiber_dim == 1 { star } else { star.kron(&LinearMap::identity(Space::fiber("E", fiber_dim))) };
    star.relabel(form_fiber(n, k, fiber_dim)?, form_fiber(n, n - k, fiber_dim)?)
}

fn relative(residual: &TrigField, reference: &TrigField) -> f64 {
    let r = reference.coefficient_norm();
    if r == 0.0 {
        residual.coefficient_norm()
    } else {
        residual.coefficient_norm() / r
    }
}

fn hodge_scenario(
    name: ScenarioName,
    n: usize,
    k: usize,
    fiber_dim: usize,
    seed: u64,
    field: TrigField,
    constraints: Constraints,
) -> Result<Scenario> {
    let exterior = exterior_derivative(n, k, fiber_dim)?;
    let interior = codifferential(n, k, fiber_dim)?;
    let grad = field.nabla();
    let mut residual: Option<f64> = None;
    if constraints.d_vanishing {
        residual = Some(relative(&apply_operator(&exterior, &field)?, &grad));
    }
    if constraints.dstar_vanishing {
        let r = relative(&apply_operator(&interior, &field)?, &grad);
        residual = Some(residual.map_or(r, |x: f64| x.max(r)));
    }
    Ok(Scenario {
        name: name.to_string(),
        n,
        k: Some(k),
        seed,
        field,
        constraints,
        check: ScenarioCheck::Hodge { geometry: FormGeometry::new(n, k, fiber_dim)?, exterior, interior },
        constraint_residual: residual,
    })
}

/// Build a preset field with its exact constraints.
///
/// Form scenarios use `k` (`1 <= k <= n-1`); the others fix their own degree:
/// `yang-mills-F` is `F = dA` on `gl(2)`-valued 2-forms, `higgs-dPhi` is
/// `dΦ` for a `gl(2)`-valued function, `instanton-Fplus` is the self-dual part
/// of `dA` on the 4-torus and `monopole-omega` is `*dA` on the 3-torus.
pub fn make_scenario(name: ScenarioName, n: usize, k: usize, seed: u64, mode_count: usize) -> Result<Scenario> {
    if !name.admits(n, k) {
        return Err(Error::BadDegree { n, k, reason: "scenario not defined for this dimension or degree" });
    }
    let mut rng = master_rng(seed);
    let modes = mode_count;
    match name {
        ScenarioName::GenericForm => {
            let field = random_form(&mut rng, n, k, 1, modes)?;
            hodge_scenario(name, n, k, 1, seed, field, Constraints::default())
        }
        ScenarioName::ClosedForm => {
            let psi = random_form(&mut rng, n, k - 1, 1, modes)?;
            let field = apply_operator(&exterior_derivative(n, k - 1, 1)?, &psi)?;
            hodge_scenario(name, n, k, 1, seed, field, Constraints { d_vanishing: true, dstar_vanishing: false })
        }
        ScenarioName::CoclosedForm => {
            let psi = random_form(&mut rng, n, k + 1, 1, modes)?;
            let field = apply_operator(&codifferential(n, k + 1, 1)?, &psi)?;
            hodge_scenario(name, n, k, 1, seed, field, Constraints { d_vanishing: false, dstar_vanishing: true })
        }
        ScenarioName::YangMillsF => {
            let a = random_form(&mut rng, n, 1, MATRIX_FIBER, modes)?;
            let field = apply_operator(&exterior_derivative(n, 1, MATRIX_FIBER)?, &a)?;
            hodge_scenario(
                name,
                n,
                2,
                MATRIX_FIBER,
                seed,
                field,
                Constraints { d_vanishing: true, dstar_vanishing: false },
            )
        }
        ScenarioName::HiggsDPhi => {
            let higgs = random_form(&mut rng, n, 0, MATRIX_FIBER, modes)?;
            let field = apply_operator(&exterior_derivative(n, 0, MATRIX_FIBER)?, &higgs)?;
            hodge_scenario(
                name,
                n,
                1,
                MATRIX_FIBER,
                seed,
                field,
                Constraints { d_vanishing: true, dstar_vanishing: false },
            )
        }
        ScenarioName::InstantonFplus => {
            let a = random_form(&mut rng, n, 1, MATRIX_FIBER, modes)?;
            let f = apply_operator(&exterior_derivative(n, 1, MATRIX_FIBER)?, &a)?;
            let starred = f.map(&star_on_forms(n, 2, MATRIX_FIBER)?)?;
            let field = f.add(&starred)?.scale(0.5);
            hodge_scenario(name, n, 2, MATRIX_FIBER, seed, field, Constraints::default())
        }
        ScenarioName::MonopoleOmega => {
            let a = random_form(&mut rng, n, 1, MATRIX_FIBER, modes)?;
            let f = apply_operator(&exterior_derivative(n, 1, MATRIX_FIBER)?, &a)?;
            let field = f.map(&star_on_forms(n, 2, MATRIX_FIBER)?)?;
            hodge_scenario(
                name,
                n,
                1,
                MATRIX_FIBER,
                seed,
                field,
                Constraints { d_vanishing: false, dstar_vanishing: true },
            )
        }
        ScenarioName::DiracSpinor | ScenarioName::TwistorSpinor => {
            let op_name = if name == ScenarioName::DiracSpinor { OperatorName::Dirac } else { OperatorName::Twistor };
            let op = FoldoOperator::new(catalog(op_name, n, 0, None)?)?;
            let field = TrigField::random(&mut rng, n, op.op.fiber.clone(), modes, DEFAULT_MAX_FREQ);
            Ok(Scenario {
                name: name.to_string(),
                n,
                k: None,
                seed,
                field,
                constraints: Constraints::default(),
                check: ScenarioCheck::Foldo(op),
                constraint_residual: None,
            })
        }
    }
}

/// Constants of a run: couplings, `c̃` per branch seen, and the target constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsUsed {
    pub c: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_star: Option<f64>,
    pub ctilde: BTreeMap<String, f64>,
    /// Hodge runs: `c̃` of the `d` side and `c̃*` of the `d*` side under the constraints.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ctilde_d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ctilde_dstar: Option<f64>,
    /// `1 + c̃` for the branches fixed by the constraints, other differentials nonvanishing.
    pub target_constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointRecord {
    pub x: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub operator: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub seed: u64,
    pub grid: usize,
    pub sample_points: usize,
    pub skipped: usize,
    /// Smallest `margin / scale` over every check.
    pub min_margin: f64,
    pub violations: usize,
    pub tolerance: f64,
    pub constants_used: ConstantsUsed,
    pub constraints: Constraints,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constraint_residual: Option<f64>,
    pub checks: Vec<CheckSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub c: f64,
    pub c_star: f64,
    /// Points per axis.
    pub grid: usize,
    pub tolerance: f64,
    pub record_points: bool,
    pub execution: Execution,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            c: 1.0,
            c_star: 1.0,
            grid: 8,
            tolerance: FIELD_TOL,
            record_points: false,
            execution: Execution::default(),
        }
    }
}

/// Uniform grid with a golden-ratio offset per axis.
pub fn grid_points(n: usize, grid: usize) -> Vec<Vec<f64>> {
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let shift: Vec<f64> = (1..=n).map(|j| (j as f64 * golden).fract()).collect();
    let h = std::f64::consts::TAU / grid as f64;
    let total = grid.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            (0..n)
                .map(|j| {
                    let i = idx % grid;
                    idx /= grid;
                    (i as f64 + shift[j]) * h
                })
                .collect()
        })
        .collect()
}

struct PointOutcome {
    verdicts: Vec<KatoVerdict>,
    x: Vec<f64>,
}

fn evaluate_point(s: &Scenario, opts: &RunOptions, x: &[f64], floor: f64) -> Result<Option<PointOutcome>> {
    let (phi, grad) = s.field.jet(x);
    if phi.norm() <= floor {
        return Ok(None);
    }
    let verdicts = match &s.check {
        ScenarioCheck::Hodge { geometry, .. } => {
            let rule = |known: bool| if known { BranchRule::Known(true) } else { BranchRule::Detect };
            let rules = (rule(s.constraints.d_vanishing), rule(s.constraints.dstar_vanishing));
            let check = check_theorem_hodge(geometry, &grad, &phi, opts.c, opts.c_star, rules)?;
            check.verdicts().into_iter().cloned().collect()
        }
        ScenarioCheck::Foldo(op) => {
            let rule = if s.constraints.d_vanishing { BranchRule::Known(true) } else { BranchRule::Detect };
            vec![op.check(&grad, &phi, opts.c, rule)?]
        }
    };
    Ok(Some(PointOutcome { verdicts, x: x.to_vec() }))
}

/// Target constant and, for Hodge checks, the two side constants.
fn target_constant(s: &Scenario, c: f64, c_star: f64) -> Result<(f64, Option<(f64, f64)>)> {
    Ok(match &s.check {
        ScenarioCheck::Hodge { geometry, .. } => {
            let p = hodge_ctilde_pair(
                c,
                c_star,
                geometry.k,
                geometry.n,
                s.constraints.d_vanishing,
                s.constraints.dstar_vanishing,
            )?;
            (1.0 + p.min, Some((p.ctilde, p.ctilde_star)))
        }
        ScenarioCheck::Foldo(op) => {
            (1.0 + ctilde_operator(c, op.rho_squared, op.epsilon, s.constraints.d_vanishing)?.to_f64(), None)
        }
    })
}

/// Evaluate the scenario's inequality at every grid point.
pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> Result<ScenarioReport> {
    if opts.grid == 0 {
        return Err(Error::BadSampleCount("grid must have at least one point per axis".into()));
    }
    let bad = |x: f64| !x.is_finite() || x < 0.0;
    if bad(opts.c) || bad(opts.c_star) || bad(opts.tolerance) {
        return Err(Error::BadConstants("couplings and tolerance must be finite and nonnegative".into()));
    }
    let points = grid_points(s.n, opts.grid);
    let floor = SKIP_TOL * s.field.coefficient_norm();
    let plan = batches(points.len(), 256);
    let chunks = opts.execution.map(plan.len(), |b| {
        let (_, start, len) = plan[b];
        points[start..start + len].iter().map(|x| evaluate_point(s, opts, x, floor)).collect::<Result<Vec<_>>>()
    });
    let mut summaries: BTreeMap<Theorem, CheckSummary> = BTreeMap::new();
    let mut ctilde: BTreeMap<String, f64> = BTreeMap::new();
    let mut records = Vec::new();
    let (mut kept, mut skipped) = (0, 0);
    for chunk in chunks {
        for outcome in chunk? {
            let Some(outcome) = outcome else {
                skipped += 1;
                continue;
            };
            kept += 1;
            for v in &outcome.verdicts {
                summaries.entry(v.theorem).or_insert_with(|| CheckSummary::new(v.theorem)).record(v, opts.tolerance);
            }
            let primary = &outcome.verdicts[if matches!(s.check, ScenarioCheck::Hodge { .. }) { 1 } else { 0 }];
            ctilde.entry(primary.branch_label()).or_insert(primary.ctilde_used.to_f64());
            if opts.record_points {
                records.push(PointRecord { x: outcome.x, lhs: primary.lhs, rhs: primary.rhs, margin: primary.margin });
            }
        }
    }
    let checks: Vec<CheckSummary> = summaries.into_values().collect();
    let violations = checks.iter().map(|c| c.violations).sum();
    let min_margin = checks.iter().map(|c| c.min_margin).fold(f64::INFINITY, f64::min);
    let is_hodge = matches!(s.check, ScenarioCheck::Hodge { .. });
    let (target, sides) = target_constant(s, opts.c, opts.c_star)?;
    Ok(ScenarioReport {
        scenario: s.name.clone(),
        operator: s.operator_label(),
        n: s.n,
        k: s.k,
        seed: s.seed,
        grid: opts.grid,
        sample_points: kept,
        skipped,
        min_margin,
        violations,
        tolerance: opts.tolerance,
        constants_used: ConstantsUsed {
            c: opts.c,
            c_star: is_hodge.then_some(opts.c_star),
            ctilde,
            ctilde_d: sides.map(|p| p.0),
            ctilde_dstar: sides.map(|p| p.1),
            target_constant: target,
        },
        constraints: s.constraints,
        constraint_residual: s.constraint_residual,
        checks,
        points: records,
    })
}
