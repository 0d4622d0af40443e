fn main() {
    std::process::exit(rotwalk::cli::main_with_args(std::env::args().collect()));
}
