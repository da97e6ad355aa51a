fn main() {
    std::process::exit(nonhom::cli::run(std::env::args_os()));
}
