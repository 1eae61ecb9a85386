use std::io;
use std::process::ExitCode;

use clap::Parser;
use qcc_cli::{commands, exit, threads_from_env, Cli, CliError};

fn configure_threads() -> Result<(), CliError> {
    if let Some(t) = threads_from_env()? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {t} worker threads: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads()
        .and_then(|()| commands::run(&cli, &mut io::stdout().lock(), &mut io::stderr().lock()));
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Core(qcc_core::Error::FeasibilityExceeded { .. }) = e {
                eprintln!("hint: estimate large instances with `qcc sample --n <n> --d <d>`");
            }
            e.exit_code()
        }
    };
    debug_assert!(code == exit::OK || code > 0);
    ExitCode::from(code as u8)
}
