fn main() {
    std::process::exit(polar_lac::cli::main_with_args(std::env::args_os()));
}
