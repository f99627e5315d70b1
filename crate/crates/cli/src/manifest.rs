//! Run manifests: enough to re-run a command and check its output.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use clap::Parser;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{execute, Cli, Command};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    /// argv as invoked, program name included.
    pub command_line: Vec<String>,
    /// The parsed invocation.
    pub parameters: serde_json::Value,
    pub version: String,
    pub wall_time_seconds: f64,
    /// SHA-256 of the primary output, lowercase hex.
    pub output_sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl RunManifest {
    pub fn new(
        command_line: Vec<String>,
        cli: &Cli,
        wall_time_seconds: f64,
        output: &str,
    ) -> anyhow::Result<Self> {
        Ok(RunManifest {
            command_line,
            parameters: serde_json::to_value(cli)?,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_seconds,
            output_sha256: sha256_hex(output.as_bytes()),
        })
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)? + "\n")
            .with_context(|| format!("writing manifest {}", path.display()))
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading manifest {}", path.display()))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Re-runs the manifest's command line and returns the reproduced output,
/// failing if its digest differs from the recorded one.
pub fn replay(path: &Path) -> anyhow::Result<String> {
    let m = RunManifest::read(path)?;
    let mut cli =
        Cli::try_parse_from(&m.command_line).context("manifest command line no longer parses")?;
    if matches!(cli.command, Command::Replay { .. }) {
        bail!("refusing to replay a replay");
    }
    cli.global.out = None;
    cli.global.manifest = None;
    let output = execute(&cli)?;
    let digest = sha256_hex(output.as_bytes());
    if digest != m.output_sha256 {
        bail!(
            "output digest {digest} differs from recorded {}",
            m.output_sha256
        );
    }
    Ok(output)
}
