fn main() {
    std::process::exit(ecoindex::cli::run(std::env::args_os()));
}
