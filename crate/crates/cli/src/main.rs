mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.global, &cli.command) {
        Ok(out) => {
            for note in &out.notes {
                eprintln!("{note}");
            }
            let mut stdout = std::io::stdout().lock();
            let printed = match cli.global.format {
                Format::Text => stdout.write_all(out.text.as_bytes()),
                Format::Json => serde_json::to_string_pretty(&out.json)
                    .map_err(std::io::Error::other)
                    .and_then(|s| writeln!(stdout, "{s}")),
            };
            if let Err(e) = printed.and_then(|()| stdout.flush()) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
