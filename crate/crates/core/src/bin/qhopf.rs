fn main() {
    std::process::exit(qhopf::cli::main_with_args(std::env::args_os()));
}
