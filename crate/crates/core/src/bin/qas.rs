fn main() {
    std::process::exit(qas::cli::run(std::env::args_os()));
}
