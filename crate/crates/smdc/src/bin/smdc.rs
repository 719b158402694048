fn main() {
    std::process::exit(smdc::cli::run());
}
