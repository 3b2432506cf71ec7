fn main() {
    std::process::exit(cosetcx_cli::run(std::env::args_os()));
}
