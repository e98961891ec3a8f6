fn main() {
    std::process::exit(eigenbound_cli::cli::main_with_args(std::env::args_os()));
}
