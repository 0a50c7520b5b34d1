fn main() {
    std::process::exit(zhalf::cli::run(std::env::args_os()));
}
