fn main() {
    std::process::exit(lookahead_colouring::cli::main());
}
