//! Placeholder, implemented later in this build.
pub mod radial;
pub mod metric;
