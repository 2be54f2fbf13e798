fn main() {
    std::process::exit(gncs::cli::main());
}
