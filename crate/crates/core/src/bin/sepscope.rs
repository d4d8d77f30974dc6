fn main() {
    std::process::exit(sepscope::cli::run(std::env::args_os()));
}
