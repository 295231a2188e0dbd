fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(solvable::cli::run(&argv));
}
