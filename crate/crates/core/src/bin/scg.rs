fn main() -> std::process::ExitCode {
    scg::cli::main()
}
