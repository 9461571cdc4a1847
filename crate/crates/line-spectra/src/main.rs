fn main() { std::process::exit(line_spectra::cli::run()); }
