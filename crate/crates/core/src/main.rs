fn main() {
    std::process::exit(insertion::cli::run(std::env::args_os()));
}
