use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use pmi_cli::commands::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.output.output {
        Some(path) => File::create(path)
            .map_err(anyhow::Error::from)
            .and_then(|f| {
                let mut w = BufWriter::new(f);
                report.write(cli.output.format, &mut w)?;
                Ok(w.flush()?)
            }),
        None => {
            let mut out = io::stdout().lock();
            report.write(cli.output.format, &mut out)
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    for f in &report.failures {
        eprintln!("check failed: {f}");
    }
    if report.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
