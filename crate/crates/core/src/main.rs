fn main() -> std::process::ExitCode {
    krylovium::cli::run(std::env::args_os())
}
