use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    std::panic::set_hook(Box::new(|info| eprintln!("gframe: internal error: {info}")));
    let out = std::panic::catch_unwind(|| gframe::cli::run_command(std::env::args_os())).unwrap_or_else(|_| {
        gframe::cli::CommandOutput {
            exit_code: 3,
            stdout: String::new(),
            stderr: String::new(),
        }
    });
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.exit_code as u8)
}
