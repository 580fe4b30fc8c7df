fn main() {
    std::process::exit(k3lab::cli::run(std::env::args_os()));
}
