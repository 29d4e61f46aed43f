//! Configuration-driven experiment runner for derivative root distributions.

pub mod config;
mod error;
pub mod oracle;
pub mod render;
pub mod run;

pub use config::ExperimentConfig;
pub use error::{CliError, EXIT_PARTIAL};
pub use render::{render_svg, Bounds, GreenGrid, RenderStyle};
pub use run::{run, ExperimentReport, RunOptions};
