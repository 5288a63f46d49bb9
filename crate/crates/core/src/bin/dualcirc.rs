fn main() {
    std::process::exit(dualcirc::cli::run(std::env::args_os()));
}
