fn main() -> std::process::ExitCode {
    girylab::cli::main()
}
