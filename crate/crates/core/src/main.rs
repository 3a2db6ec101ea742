fn main() {
    std::process::exit(trisbf::cli::main_with_env());
}
