fn main() -> std::process::ExitCode {
    phan_core::cli::main()
}
