fn main() {
    std::process::exit(hcplace::bench::cli::run(std::env::args_os()));
}
