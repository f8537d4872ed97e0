//! Datum files, reports and the command-line front end for
//! `rootsigma-core`.

pub mod cli;
pub mod datum_file;
