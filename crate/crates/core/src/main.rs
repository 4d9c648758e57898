fn main() {
    std::process::exit(abcong::cli::main_with_args(std::env::args_os()));
}
