//! Library half of the `lkweld` command-line harness: expression and
//! config parsing, pipeline runners, CSV/SVG emission. The binary in
//! `main.rs` is a thin clap wrapper over [`runner`].

pub mod config;
pub mod error;
pub mod expr;
pub mod output;
pub mod plot;
pub mod runner;

pub use config::Scenario;
pub use error::CliError;
pub use expr::{format_delta, format_driving, parse_delta, parse_driving};
