fn main() { std::process::exit(bjortho::cli::main()) }
