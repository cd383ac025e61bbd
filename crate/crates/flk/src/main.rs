fn main() {
    std::process::exit(flk::cli::run());
}
