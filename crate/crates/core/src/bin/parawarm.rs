fn main() {
    std::process::exit(parawarm::cli::run());
}
