//! Command-line surface: `balance`, `stream`, `oracle`, `gen` and `verify`.
//!
//! Exit codes are shared by every subcommand: `0` when all bounds hold, `1`
//! on a bound or verification failure, `2` on usage or input errors.

pub mod commands;
pub mod format;
pub mod generate;
mod verify;

pub use commands::{run, Cli, ExitCode};
pub use format::{CertificateBody, CertificateFile, InstanceFile, Mode, NormSpec, OracleFile};
pub use generate::{generate, DirectionSource, GenParams, NormKind};
pub use verify::verify_certificate;
