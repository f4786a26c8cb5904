fn main() {
    if let Err(err) = lexent::cli::run() {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
