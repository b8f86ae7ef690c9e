fn main() {
    std::process::exit(cdsproxy::cli::run(std::env::args_os()));
}
