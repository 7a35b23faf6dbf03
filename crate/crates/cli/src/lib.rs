//! Library surface of the `distmorse` command-line tool: CSV ingestion,
//! analysis orchestration, JSON reports, and SVG level-set plots.

pub mod commands;
pub mod io;
pub mod plot;
pub mod report;
