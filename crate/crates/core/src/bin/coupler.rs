fn main() {
    std::process::exit(coupler::cli::main_with_args(std::env::args_os()));
}
