fn main() {
    std::process::exit(hypolab_core::cli::run(std::env::args_os()));
}
