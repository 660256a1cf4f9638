fn main() { std::process::exit(chansim::cli::main()) }
