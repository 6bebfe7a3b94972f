fn main() {
    std::process::exit(liesys_cli::main_with_args(std::env::args_os()));
}
