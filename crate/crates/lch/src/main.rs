fn main() {
    std::process::exit(lch::cli::run(std::env::args_os()));
}
