use std::process::ExitCode;

use dirac_tunneling_cli::error::CliError;

fn main() -> ExitCode {
    let mut stdout = std::io::stdout().lock();
    match dirac_tunneling_cli::run(std::env::args_os(), &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Clap(e)) => {
            let _ = e.print();
            ExitCode::from(e.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
