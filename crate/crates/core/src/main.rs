use clap::Parser;

fn main() {
    let cli = sqprod::cli::Cli::parse();
    if let Err(e) = sqprod::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
