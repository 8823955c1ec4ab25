//! Nonlinear lifting line over spanwise stations, finite or periodic.

pub mod downwash;
pub mod problem;

pub use downwash::{cosine_stations, downwash_finite, downwash_periodic, periodic_wavelengths, MIN_FINITE_STATIONS};
pub use problem::{
    solve_nonlinear_llt, wing_polar, wing_polar_csv, CirculationDistribution, LiftingLineProblem, LltSettings,
    LltStation, PolarSet, SectionModel, SpanMode, WingPolarPoint, WING_POLAR_HEADER,
};
