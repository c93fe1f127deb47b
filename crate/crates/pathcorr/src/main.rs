fn main() {
    std::process::exit(pathcorr::cli::run(std::env::args_os()));
}
