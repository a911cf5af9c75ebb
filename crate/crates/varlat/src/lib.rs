//! File formats, bundled fixtures and batch commands on top of
//! [`varlat_core`].

pub mod commands;
pub mod fixtures;
pub mod formats;
pub mod random;
pub mod suites;
