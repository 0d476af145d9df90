//! Numerical verification of the genus-two period transformation theory on
//! randomized integral symplectic elements, Siegel points and seeded
//! polynomial model geometries.

pub mod checks;
pub mod geometry;
pub mod linalg;
pub mod siegel;
pub mod symplectic;

pub use checks::{
    evaluate_psi, run_all_checks, run_check, CheckConfig, CheckKind, CheckReport, TrialRecord,
};
pub use geometry::ModelGeometry;
pub use linalg::{CMat2, C64};
pub use siegel::{
    grad3, nabla, nabla_weights, omega_derivative, transform_period, PeriodTransform, SiegelPoint,
    DET_M_FLOOR, FD_STEP,
};
pub use symplectic::{random_symplectic, SymplecticElement, MAX_WORD_LENGTH};
