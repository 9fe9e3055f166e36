fn main() {
    std::process::exit(infodisp::cli::main());
}
