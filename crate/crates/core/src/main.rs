fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(sqrtwell::cli::run(args));
}
