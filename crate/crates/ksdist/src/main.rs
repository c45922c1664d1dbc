fn main() {
    std::process::exit(ksdist::cli::run());
}
