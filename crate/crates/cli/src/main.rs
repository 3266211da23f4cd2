use clap::Parser;

fn main() {
    let args = galpt_cli::Args::parse();
    let (text, code) = galpt_cli::execute(&args);
    print!("{text}");
    std::process::exit(code);
}
