use std::process::ExitCode;

use clap::Parser;
use dphase::cli::{execute, Args};

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(summary) => {
            for v in &summary.verdicts {
                let tag = if v.pass { "PASS" } else { "FAIL" };
                println!("{tag}  {:<18} {:<22} {}", v.experiment, v.check, v.detail);
            }
            if let Some(dir) = summary.files.last().and_then(|p| p.parent()) {
                println!("wrote {} files to {}", summary.files.len(), dir.display());
            }
            if summary.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("dphase: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
