//! Command-line front end for `pmi-core`: model loading, the measure
//! commands, the structure-quantity table and CSV/JSON output.

pub mod commands;
pub mod model;
pub mod output;
pub mod table1;
