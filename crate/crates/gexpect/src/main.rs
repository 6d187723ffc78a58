fn main() {
    std::process::exit(gexpect::cli::main_entry());
}
