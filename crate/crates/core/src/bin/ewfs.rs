fn main() {
    std::process::exit(ewfs::harness::cli::main_with_args(std::env::args_os()));
}
