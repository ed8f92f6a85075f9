fn main() {
    std::process::exit(detboot::cli::main_with_args(std::env::args_os()));
}
