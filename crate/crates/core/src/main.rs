fn main() -> std::process::ExitCode {
    cyclic_ktheory::cli::run()
}
