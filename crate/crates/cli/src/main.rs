use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use dtorus_cli::args::Cli;
use dtorus_cli::report::Status;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dtorus_cli::run(&cli.command) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(report.render(cli.format).as_bytes()).is_err() {
                return ExitCode::FAILURE;
            }
            match report.summary.status {
                Status::Pass => ExitCode::SUCCESS,
                Status::Fail => ExitCode::from(dtorus_cli::EXIT_FAILURE),
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(dtorus_cli::exit_code(&err))
        }
    }
}
