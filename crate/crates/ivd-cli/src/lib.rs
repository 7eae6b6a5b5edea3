//! Command implementations for the `ivd` experiment driver.
//!
//! Every command is driven by a [`RunConfig`] resolved from flags, an
//! optional JSON config file, and defaults (flags win, then the file).
//! All file outputs are byte-deterministic given (command, flags, seed):
//! numbers are serialized with 17 significant digits, rows and fields are
//! emitted in fixed order, and timing information goes to the console
//! only, never into an output file.

pub mod commands;
pub mod config;

pub use commands::{cmd_fm, cmd_mub, cmd_report, cmd_scan, cmd_verify};
pub use config::{CliError, Command, OutFormat, PartialConfig, RunConfig};

/// Formats a float with 17 significant digits, enough for exact f64
/// round-trips through text.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Exit code convention: 0 success, 1 verification failure, 2 usage or
/// configuration error.
pub fn exit_code(result: &Result<(), CliError>) -> i32 {
    match result {
        Ok(()) => 0,
        Err(CliError::Config(_)) => 2,
        Err(_) => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::fmt17;

    #[test]
    fn fmt17_round_trips_exactly() {
        for x in [
            0.5,
            1.0 / 3.0,
            std::f64::consts::SQRT_2,
            2.0 * std::f64::consts::PI,
            1.792481250360578,
            6.02e23,
            -1.23456789e-12,
            0.0,
        ] {
            let s = fmt17(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x} -> {s} -> {back}");
        }
    }
}
