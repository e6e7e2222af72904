use clap::Parser;
use nonss_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let out = run(&cli.command);
    println!("{}", serde_json::to_string_pretty(&out.json).expect("results serialize"));
    eprintln!("{}", out.summary);
    std::process::exit(out.code);
}
