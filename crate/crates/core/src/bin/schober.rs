fn main() {
    std::process::exit(schober_core::cli::main_entry());
}
