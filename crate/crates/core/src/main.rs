fn main() {
    std::process::exit(siegel_lab::cli::main());
}
