use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use polardec_cli::args::Cli;
use polardec_cli::commands::run;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("polardec: {failure}");
            failure.exit_code()
        }
    }
}
