use std::process::ExitCode;

use clap::Parser;
use fixtrace_cli::commands::{run, Cli};
use fixtrace_cli::CliError;

fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("FIXTRACE_THREADS") else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Invalid(format!("FIXTRACE_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(CliError::EXIT_INVALID) } else { ExitCode::SUCCESS };
        }
    };
    let result = init_threads().and_then(|()| run(cli, &mut std::io::stdout().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fixtrace: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
