fn main() {
    std::process::exit(reachmap::cli::main_with_args(std::env::args_os()));
}
