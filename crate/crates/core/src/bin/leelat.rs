fn main() {
    std::process::exit(lee_lattice::cli::run(std::env::args_os()));
}
