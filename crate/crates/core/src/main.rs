use std::fs;
use std::process::ExitCode;

use cohen_lab::cli::run_args;

fn main() -> ExitCode {
    let outcome = match run_args(std::env::args_os()) {
        Ok(outcome) => outcome,
        Err(help) => {
            print!("{help}");
            return ExitCode::SUCCESS;
        }
    };
    let text = outcome.render();
    match &outcome.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(outcome.code as u8)
}
