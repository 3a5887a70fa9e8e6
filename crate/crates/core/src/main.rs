fn main() {
    std::process::exit(schottky_spectral::cli::run(std::env::args_os()));
}
