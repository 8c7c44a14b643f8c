use std::process::ExitCode;

fn main() -> ExitCode {
    fsaweno::cli::main_with_args(std::env::args_os())
}
