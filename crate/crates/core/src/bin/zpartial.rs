fn main() {
    std::process::exit(zpartial_core::cli::main());
}
