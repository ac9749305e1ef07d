fn main() {
    std::process::exit(hcb_entropy::cli::run_from(std::env::args_os()));
}
