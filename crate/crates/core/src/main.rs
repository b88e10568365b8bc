fn main() {
    std::process::exit(tanfree::cli::run(std::env::args_os()));
}
