use std::io;
use std::panic;
use std::process::ExitCode;

use e2ecov::cli::{run, EXIT_INTERNAL};

fn main() -> ExitCode {
    let code = panic::catch_unwind(|| {
        let mut stdout = io::stdout().lock();
        let mut stderr = io::stderr().lock();
        run(std::env::args_os(), &mut stdout, &mut stderr)
    })
    .unwrap_or(EXIT_INTERNAL);
    ExitCode::from(code as u8)
}
