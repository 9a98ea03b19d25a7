fn main() {
    std::process::exit(tctr::cli::run(std::env::args_os()));
}
