use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(auxetic_cli::run(std::env::args_os()))
}
