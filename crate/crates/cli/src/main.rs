use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(fbn_probe_cli::run(std::env::args_os()))
}
