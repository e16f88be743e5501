fn main() {
    std::process::exit(cutchoose::cli::main());
}
