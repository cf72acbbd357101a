fn main() {
    std::process::exit(orbital_radial::cli::run(std::env::args_os()));
}
