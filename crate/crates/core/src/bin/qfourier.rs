fn main() {
    std::process::exit(qfourier::cli::main_from_env());
}
