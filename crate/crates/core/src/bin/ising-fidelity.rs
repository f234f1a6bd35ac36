fn main() {
    std::process::exit(ising_fidelity::cli::run(std::env::args_os()));
}
