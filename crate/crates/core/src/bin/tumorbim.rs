fn main() {
    std::process::exit(tumorbim::cli::main());
}
