use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(capbound::cli::run() as u8)
}
