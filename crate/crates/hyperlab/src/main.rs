use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    match hyperlab::cli::run(std::env::args_os().collect()) {
        Ok(paths) => {
            let mut out = std::io::stdout().lock();
            for p in paths {
                if writeln!(out, "{}", p.display()).is_err() {
                    break;
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("hyperlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
