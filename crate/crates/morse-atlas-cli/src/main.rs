use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use morse_atlas_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(&cli.command);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.output.as_bytes());
    let _ = stdout.flush();
    ExitCode::from(out.code as u8)
}
