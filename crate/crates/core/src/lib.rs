//! Numeric certifiers for normal holomorphic functions and normal families
//! on the unit disc and the unit ball of ℂⁿ.
//!
//! The crate is organised bottom-up:
//!
//! * [`expr`] parses a small expression language and evaluates first-order
//!   complex jets by forward propagation.
//! * [`series`] holds sparse multivariate power series, their restrictions to
//!   complex lines and a root-test radius estimator.
//! * [`metric`] has the chordal, Poincaré, Bergman and Kobayashi metrics and
//!   the automorphisms of the disc and the ball.
//! * [`normality`] has the spherical derivative, the Levi form of
//!   `log(1 + |f|²)` and every sup-based certifier built on them.
//! * [`linescan`] restricts functions, families and series to complex lines
//!   through the origin.
//!
//! Every certifier returns numbers (sup estimates and trend verdicts), never
//! proofs: normality is an asymptotic property and a finite sample can only
//! support or contradict it.

pub mod error;
pub mod expr;
pub mod linescan;
pub mod metric;
pub mod normality;
pub mod point;
pub mod sampling;
pub mod series;

pub use error::{Error, EvalError, ParseError, Result};
pub use expr::{HoloExpr, Jet};
pub use linescan::{
    alexander_family_test, alexander_function_test, hartogs_test, restrict_function, Convergence,
    FamilyLineReport, HartogsLine, HartogsReport, LineReport, LineScanReport,
};
pub use metric::{
    ball_automorphism, bergman_kernel_ball, bergman_norm_sq, bergman_tensor_ball, chordal_distance,
    disc_automorphism, kobayashi_closed_form_ball, kobayashi_upper, poincare_distance,
    poincare_tensor, BallAutomorphism, BallDomain, DiscAutomorphism, DiscMap, ExtCNum,
    KobayashiSearch, MetricSample,
};
pub use normality::{
    ball_normal_ratio, ball_orbit, disc_family_probe, kobayashi_normality_check,
    lehto_virtanen_check, levi_form, lipschitz_ratio, marty_sup, mu, mu_local_boundedness, sharp,
    translate_orbit, yosida_bound, Classification, LadderConfig, LeviEval, SupEstimate,
    VectorSamples, Verdict,
};
pub use point::{CNum, CPoint};
pub use sampling::DirectionSet;
pub use series::{MultiIndex, PowerSeries, UniSeries};
