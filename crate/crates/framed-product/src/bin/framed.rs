fn main() {
    std::process::exit(framed_product::cli::run(std::env::args_os()));
}
