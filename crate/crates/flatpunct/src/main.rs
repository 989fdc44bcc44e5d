fn main() {
    std::process::exit(flatpunct::cli::run());
}
