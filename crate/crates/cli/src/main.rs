fn main() {
    std::process::exit(relqi_cli::run(std::env::args().collect()));
}
