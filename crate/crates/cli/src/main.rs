fn main() {
    std::process::exit(modnuc_cli::run(std::env::args_os()));
}
