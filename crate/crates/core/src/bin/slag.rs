fn main() {
    std::process::exit(slag::cli::run(std::env::args_os()));
}
