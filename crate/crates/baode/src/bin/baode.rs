fn main() {
    std::process::exit(baode::cli::run());
}
