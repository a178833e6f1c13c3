fn main() {
    std::process::exit(regen_stable::cli::main_with_args(std::env::args_os()));
}
