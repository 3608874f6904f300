use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lapgen::cli::{run, Cli};

fn main() -> ExitCode {
    // usage errors exit 1; code 2 is reserved for graph file parse errors
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("{w}");
            }
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
