fn main() {
    std::process::exit(rieszkit::cli::run());
}
