use clap::Parser;

fn main() {
    let cli = higgsmorse::cli::Cli::parse();
    std::process::exit(higgsmorse::cli::run(cli));
}
