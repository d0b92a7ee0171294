use clap::Parser;

fn main() {
    let cli = nacent_cli::Cli::parse();
    std::process::exit(nacent_cli::run(cli));
}
