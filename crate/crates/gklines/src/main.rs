fn main() {
    std::process::exit(gklines::cli::run());
}
