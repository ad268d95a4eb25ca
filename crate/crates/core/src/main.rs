fn main() {
    std::process::exit(shotnoise_lab::cli::run(std::env::args_os()));
}
