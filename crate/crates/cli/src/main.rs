fn main() {
    std::process::exit(shellconf_cli::main_with_args(std::env::args_os()));
}
