fn main() {
    std::process::exit(binoseq_cli::run(std::env::args_os()));
}
