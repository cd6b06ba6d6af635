fn main() {
    std::process::exit(sqsl::cli::run(std::env::args_os()));
}
