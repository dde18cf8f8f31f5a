fn main() {
    std::process::exit(spliceguard::cli::run(std::env::args_os()));
}
