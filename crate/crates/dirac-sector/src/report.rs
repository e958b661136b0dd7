//! Machine-readable report envelope emitted by the command-line tools.

use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1";

/// Envelope wrapping every command's JSON output: the command name, an echo
/// of the parsed inputs, the command-specific results, and any warnings.
/// Field order is fixed, so output is byte-stable for fixed inputs.
#[derive(Debug, Clone, Serialize)]
pub struct ReportEnvelope<P: Serialize, R: Serialize> {
    pub command: String,
    pub parameters: P,
    pub results: R,
    pub diagnostics: Vec<String>,
    pub schema_version: String,
}

impl<P: Serialize, R: Serialize> ReportEnvelope<P, R> {
    pub fn new(command: &str, parameters: P, results: R, diagnostics: Vec<String>) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            results,
            diagnostics,
            schema_version: SCHEMA_VERSION.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report types serialise infallibly")
    }
}
