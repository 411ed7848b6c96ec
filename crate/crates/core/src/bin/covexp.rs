fn main() {
    std::process::exit(covexp::cli::run(std::env::args_os()));
}
