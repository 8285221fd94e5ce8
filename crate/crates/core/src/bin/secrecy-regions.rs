use std::io::Write;
use std::process::ExitCode;

use secrecy_regions::cli::{run, EXIT_ERROR};

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match run(std::env::args_os(), &mut out) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
