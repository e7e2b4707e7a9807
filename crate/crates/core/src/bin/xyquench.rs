fn main() {
    std::process::exit(xyquench::cli::run(std::env::args_os()));
}
