use clap::Parser;
use torus_holonomy_cli::{run, Cli};

fn main() {
    // clap exits with code 2 on usage errors, matching the config-error
    // convention used below
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
