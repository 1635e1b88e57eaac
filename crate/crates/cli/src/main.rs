use std::process::ExitCode;

use rational_ortho_cli::{parse_args, run, EXIT_USAGE};

fn main() -> ExitCode {
    let req = parse_args(std::env::args_os()).unwrap_or_else(|e| e.exit());
    let report = run(&req);
    for note in &report.diagnostics {
        eprintln!("note: {note}");
    }
    let out = report.render(req.format);
    match &req.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, out) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE as u8);
            }
        }
        None => print!("{out}"),
    }
    ExitCode::from(report.exit_code as u8)
}
