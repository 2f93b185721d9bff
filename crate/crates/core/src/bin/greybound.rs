fn main() {
    std::process::exit(greybound::cli::run(std::env::args_os()));
}
