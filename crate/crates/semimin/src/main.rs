use std::process::ExitCode;

fn main() -> ExitCode {
    semimin::cli::run(std::env::args_os())
}
