//! Command-line front end, report formats and the multi-threaded search
//! driver for [`planelab_core`].

pub mod cli;
pub mod exec;
pub mod formats;
pub mod verify;
