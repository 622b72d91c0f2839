fn main() {
    std::process::exit(dessins::cli::main_with(std::env::args_os()));
}
