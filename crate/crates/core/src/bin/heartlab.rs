fn main() { std::process::exit(heartlab::cli::main()); }
