fn main() -> std::process::ExitCode {
    ermakov_susy::cli::main()
}
