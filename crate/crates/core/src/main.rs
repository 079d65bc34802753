use clap::Parser;

fn main() {
    let cli = shiftpd::cli::Cli::parse();
    let code = shiftpd::cli::run(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
