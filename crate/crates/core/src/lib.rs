pub mod curve;
pub mod error;
pub mod exec;
pub mod puiseux;
pub mod quotient;
pub mod rational;
pub mod reduction;
pub mod real;
pub mod sample;
pub mod suites;

pub use curve::{legendre_to_minimal, points_agree, CurvePoint, LegendreMap, MinimalCurve, YBranch};
pub use error::{Error, Result};
pub use exec::{map_trials, ExecMode};
pub use puiseux::{ExtRat, PrecisionConfig, PuiseuxNumber};
pub use quotient::{
    CaseLabel, Classification, ClassificationReport, Internality, MultTruncation,
    QuotientSetting, TruncationContext, WitnessMap, WitnessValue,
};
pub use reduction::{reduce_curve, reduce_point, reduced_points_agree, reduces_to_identity, reduces_to_smooth_point, reduction_type, ReducedCurve, ReducedPoint, ReductionType};
pub use rational::{rat, rat_int, Rat};
pub use real::Real;
pub use suites::{run_all, run_suite, SuiteConfig, SuiteId, SuiteOutcome};
