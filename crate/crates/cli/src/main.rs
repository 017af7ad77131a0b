fn main() {
    std::process::exit(utaylor_cli::run(std::env::args_os()));
}
