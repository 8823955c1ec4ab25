//! Two-dimensional section aerodynamics: panel discretisation, inviscid
//! solution, integral boundary layer and viscous polars.

pub mod boundary_layer;
pub mod cache;
pub mod inviscid;
pub mod loads;
pub mod panels;
pub mod polar;
pub mod viterna;

pub use boundary_layer::{
    boundary_layer_march, march_surface, BoundaryLayerState, ClosureConfig, LaminarSeparationPolicy, LiftCorrection,
    MarchStation, SurfaceBoundaryLayer, TransitionModel,
};
pub use cache::{polar_cache_key, PolarCache};
pub use inviscid::{solve_inviscid, CpDistribution, CpSample, InviscidSolution, InviscidSolver, Surface};
pub use loads::integrate_cp_loads;
pub use panels::{discretize_panels, PanelDiscretization, MIN_PANELS};
pub use polar::{
    alpha_grid, viscous_polar, PointFlag, PolarSettings, Provenance, SectionPolar, ViscousPoint, ViscousSection,
    RE_MAX, RE_MIN,
};
pub use viterna::{cd_max_for_aspect_ratio, viterna_extend, viterna_extend_with, DEFAULT_CD_MAX};
