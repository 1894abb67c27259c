fn main() {
    std::process::exit(bottlab::cli::run_from_args(std::env::args_os()));
}
