fn main() {
    std::process::exit(annoproj::cli::run(std::env::args_os()));
}
