fn main() {
    std::process::exit(frameforge::cli::main_with(std::env::args_os()));
}
