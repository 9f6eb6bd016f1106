fn main() {
    std::process::exit(spinkink::cli::run(std::env::args_os()));
}
