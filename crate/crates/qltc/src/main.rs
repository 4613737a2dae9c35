fn main() {
    std::process::exit(qltc::run_cli());
}
