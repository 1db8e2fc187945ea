use std::process::ExitCode;

fn main() -> ExitCode {
    circfam::cli::main()
}
