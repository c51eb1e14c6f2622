fn main() {
    std::process::exit(rotrep::workbench::cli::main());
}
