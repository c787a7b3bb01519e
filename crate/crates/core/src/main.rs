fn main() {
    std::process::exit(slabgreen::cli::run(std::env::args_os()));
}
