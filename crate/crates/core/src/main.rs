fn main() {
    std::process::exit(degnn::cli::run(std::env::args_os()));
}
