use std::process::ExitCode;

fn main() -> ExitCode {
    hsr_power::cli::main_with_args(std::env::args_os())
}
