fn main() -> std::process::ExitCode {
    lfmo_repair::cli::run(std::env::args_os())
}
