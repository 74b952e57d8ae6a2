use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    match cufl::cli::run_cli(std::env::args_os()) {
        Ok((out, code)) => {
            print!("{out}");
            let _ = std::io::stdout().flush();
            ExitCode::from(code as u8)
        }
        Err(e) => e.exit(),
    }
}
