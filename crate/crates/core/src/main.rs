fn main() {
    std::process::exit(covtrans::cli::run(std::env::args_os()));
}
