fn main() {
    std::process::exit(longmem_cli::main_with(std::env::args_os()));
}
