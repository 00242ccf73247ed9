fn main() {
    std::process::exit(vslab::cli::run(std::env::args_os()));
}
