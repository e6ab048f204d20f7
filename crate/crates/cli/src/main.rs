fn main() {
    std::process::exit(lspk_cli::run(std::env::args_os()));
}
