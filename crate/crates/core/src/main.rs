use clap::Parser;

fn main() {
    let cli = sdma_capacity::cli::Cli::parse();
    std::process::exit(sdma_capacity::cli::run(cli));
}
