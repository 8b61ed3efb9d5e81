fn main() {
    std::process::exit(heesch::cli::run(std::env::args_os()));
}
