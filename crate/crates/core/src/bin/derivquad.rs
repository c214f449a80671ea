use std::process::ExitCode;

fn main() -> ExitCode {
    derivquad::cli::main()
}
