fn main() {
    std::process::exit(maxloc::cli::run(std::env::args_os()));
}
