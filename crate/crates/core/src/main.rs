fn main() {
    std::process::exit(thetakit::cli::main());
}
