fn main() {
    std::process::exit(boostlets::cli::run(std::env::args_os()));
}
