fn main() {
    std::process::exit(voxdecode::cli::run(std::env::args_os()));
}
