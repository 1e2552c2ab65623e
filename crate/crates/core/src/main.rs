fn main() {
    std::process::exit(cbe_core::cli::run_cli(std::env::args_os()));
}
