fn main() {
    std::process::exit(jetframe::cli::run());
}
