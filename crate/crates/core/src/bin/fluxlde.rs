use clap::Parser;

fn main() {
    let cli = fluxlde::cli::Cli::parse();
    if let Err(e) = fluxlde::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
