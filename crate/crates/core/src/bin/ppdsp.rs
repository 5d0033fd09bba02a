fn main() {
    std::process::exit(ppdsp::cli::main());
}
