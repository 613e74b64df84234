use std::process::ExitCode;

fn main() -> ExitCode {
    dirac_toa::cli::main_exit()
}
