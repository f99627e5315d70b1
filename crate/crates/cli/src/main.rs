use std::process::ExitCode;
use std::time::Instant;

use aliquot_cli::manifest::RunManifest;
use aliquot_cli::{deliver, execute, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let start = Instant::now();
    let result = execute(&cli).and_then(|text| {
        let elapsed = start.elapsed().as_secs_f64();
        deliver(cli.global.out.as_deref(), &text)?;
        if let Some(path) = &cli.global.manifest {
            RunManifest::new(argv, &cli, elapsed, &text)?.write(path)?;
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
