fn main() -> std::process::ExitCode {
    malmsten::cli::run(std::env::args_os())
}
