fn main() {
    std::process::exit(twistlab::cli::main_entry());
}
