//! Post-processing of computed results and ingested field slices.

pub mod blt;
pub mod field;
pub mod metrics;
pub mod vorticity;

pub use blt::{
    blt_along_chord, blt_extract, BltMode, BltOutcome, BltReport, BltRow, BltSettings, BLT_WINDOW_CHORDS,
    DEFAULT_BLT_THRESHOLD,
};
pub use field::{ingest_field_slice, parse_field_slice, trapezoid_weights, FieldSlice, Plane, FIELD_HEADER};
pub use metrics::{best_par_select, chord_weighted_average, percent_change};
pub use vorticity::{omega_x, vorticity_slice, VortexCore, VortexPairReport, VortexSettings, DEFAULT_CORE_FRACTION};
