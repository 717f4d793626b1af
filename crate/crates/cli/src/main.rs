use std::process::ExitCode;

use clap::Parser;
use entropy_cli::commands::{run, Command};

#[derive(Parser)]
#[command(name = "cvxent", version, about = "Metric entropy experiments for convex function classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cmd = cli.command;
    let result = cmd.settings().clone().resolve().and_then(|s| {
        let mut report = run(&cmd, &s)?;
        report.write(&s.out_dir(), s.format())?;
        Ok(report)
    });
    match result {
        Ok(report) => {
            for a in &report.assertions {
                println!("{} {}: {}", if a.passed { "PASS" } else { "FAIL" }, a.name, a.detail);
            }
            for n in &report.notes {
                println!("note: {n}");
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
