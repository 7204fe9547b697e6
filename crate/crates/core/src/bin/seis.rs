fn main() {
    std::process::exit(seis::cli::run(std::env::args_os()));
}
