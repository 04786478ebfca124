fn main() {
    std::process::exit(tesselogic_cli::run(std::env::args_os()));
}
