fn main() -> std::process::ExitCode {
    colltherm::cli::main_entry()
}
