fn main() {
    std::process::exit(atch::cli::run());
}
