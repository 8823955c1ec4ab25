//! Baseline NACA sections and PAR-parameterised tubercled blades.

mod case;
mod export;
mod naca;
mod wing;

pub use case::{
    make_case_spec, CaseOverrides, CaseSpec, DEFAULT_MU, DEFAULT_RE, DEFAULT_RHO, DEFAULT_U_INF, RE_CONSISTENCY_TOL,
};
pub use export::{
    export_surface, triangle_area, triangle_normal, triangulate, write_sections_csv, write_stl_ascii, write_stl_binary,
    SurfaceFormat, Triangle,
};
pub use naca::{naca4_coordinates, naca4_half_thickness, AirfoilProfile, Naca4};
pub use wing::{
    build_tubercled_wing, extract_section, par_to_amplitude, truncate_decimals, ProtuberanceSpec, SectionKind,
    SpanSection, WingGeometry, DEFAULT_PITCH, PRINTED_AMPLITUDES, STUDY_PARS,
};
