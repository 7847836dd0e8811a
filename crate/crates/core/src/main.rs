fn main() {
    std::process::exit(convexflow::cli::run_cli(std::env::args_os()));
}
