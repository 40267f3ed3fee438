fn main() {
    std::process::exit(qosc::cli::run(std::env::args_os()));
}
