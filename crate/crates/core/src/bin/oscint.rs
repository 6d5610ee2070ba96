fn main() -> std::process::ExitCode {
    oscint::cli::main_with_env()
}
