fn main() {
    std::process::exit(mapcone::cli::main());
}
