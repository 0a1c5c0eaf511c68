fn main() {
    std::process::exit(avmac::cli::main());
}
