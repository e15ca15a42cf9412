fn main() {
    std::process::exit(gpdcentre::cli::main_entry());
}
