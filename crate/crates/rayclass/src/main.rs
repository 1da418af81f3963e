use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use rayclass::runner::EXIT_BAD_INPUT;
use rayclass::{run, Cli, Emit};

fn main() -> ExitCode {
    let cfg = match Cli::parse().into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_BAD_INPUT as u8);
        }
    };
    let out = run(&cfg);
    if let Some(r) = &out.report {
        let text = match cfg.emit {
            Emit::Json => r.to_json() + "\n",
            Emit::Text => format!("{}wall time    {:.3} s\n", r.to_text(), out.elapsed.as_secs_f64()),
        };
        // a closed pipe is not an error worth reporting
        let _ = std::io::stdout().lock().write_all(text.as_bytes());
    }
    if let Some(e) = &out.error {
        eprintln!("error: {e}");
    }
    ExitCode::from(out.code as u8)
}
