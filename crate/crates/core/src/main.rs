use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use cut_choose::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.into_config().and_then(|config| run(&config));
    match result {
        Ok(output) => {
            for warning in &output.warnings {
                eprintln!("warning: {warning}");
            }
            match &output.written_to {
                Some(path) => eprintln!("wrote {}", path.display()),
                None => {
                    let mut stdout = std::io::stdout().lock();
                    let _ = writeln!(stdout, "{}", output.text.trim_end());
                }
            }
            if output.check_failed {
                eprintln!("check failed");
            }
            ExitCode::from(output.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
