//! Invariant metrics and automorphisms of the disc and the unit ball.

mod ball;
mod disc;
mod kobayashi;

pub use ball::{
    ball_automorphism, bergman_kernel_ball, bergman_norm_sq, bergman_tensor_ball,
    kobayashi_closed_form_ball, BallAutomorphism, BallDomain, MetricSample,
};
pub use disc::{
    chordal_distance, disc_automorphism, poincare_distance, poincare_tensor, DiscAutomorphism,
    ExtCNum,
};
pub use kobayashi::{
    kobayashi_upper, AnalyticDisc, DiscFamily, DiscMap, KobayashiBound, KobayashiSearch,
    CONTAINMENT_MARGIN, CONTAINMENT_RADIUS, CONTAINMENT_SAMPLES,
};
