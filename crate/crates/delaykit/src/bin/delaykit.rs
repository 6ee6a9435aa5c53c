fn main() {
    std::process::exit(delaykit::cli::run());
}
