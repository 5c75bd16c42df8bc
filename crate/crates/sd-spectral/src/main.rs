fn main() {
    std::process::exit(sd_spectral::cli::run(std::env::args_os()));
}
