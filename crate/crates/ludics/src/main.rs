use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(ludics::cli::run())
}
