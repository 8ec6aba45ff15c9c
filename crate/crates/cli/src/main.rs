use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(qmeasure_cli::run(std::env::args_os()))
}
