fn main() {
    std::process::exit(roommates::cli::run());
}
