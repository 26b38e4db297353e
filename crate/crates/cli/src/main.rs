fn main() {
    std::process::exit(csl_cli::run(std::env::args_os()));
}
