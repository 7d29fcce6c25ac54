fn main() {
    std::process::exit(julia_sym_cli::main_with_args(std::env::args_os()));
}
