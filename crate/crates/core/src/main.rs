fn main() {
    std::process::exit(cable_curves::appio::cli::main_with(std::env::args_os()));
}
