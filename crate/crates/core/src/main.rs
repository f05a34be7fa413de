fn main() {
    std::process::exit(arswarm::app::cli::run(std::env::args_os()));
}
