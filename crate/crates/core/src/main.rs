fn main() {
    std::process::exit(nrep_core::cli::run(std::env::args_os()));
}
