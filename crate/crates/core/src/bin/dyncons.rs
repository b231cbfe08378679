fn main() {
    std::process::exit(dyncons::cli::main_entry());
}
