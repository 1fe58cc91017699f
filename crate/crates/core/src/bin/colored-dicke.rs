fn main() -> std::process::ExitCode {
    colored_dicke::cli::main()
}
