fn main() {
    std::process::exit(lorentz_karamata::cli::main());
}
