//! Genuine sections on flat tori: trigonometric fields, catalog operators
//! applied at coefficient level, and gridwise checks of the Kato inequalities.

mod scenario;
mod trig;

pub use scenario::{
    codifferential, exterior_derivative, form_fiber, grid_points, make_scenario, run_scenario, ConstantsUsed,
    Constraints, PointRecord, RunOptions, Scenario, ScenarioCheck, ScenarioName, ScenarioReport, DEFAULT_MAX_FREQ,
    DEFAULT_MODES, FIELD_TOL, MATRIX_FIBER, SKIP_TOL,
};
pub use trig::{apply_operator, grad_norm_at, Mode, TrigField};
