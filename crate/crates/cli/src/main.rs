fn main() {
    std::process::exit(galois_scope::main_with_args(std::env::args_os()));
}
