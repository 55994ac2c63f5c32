use clap::Parser;
use dqm_cli::{run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    if let Err(e) = run(cli) {
        eprintln!("dqm: {e}");
        std::process::exit(e.exit_code() as i32);
    }
}
