fn main() {
    std::process::exit(hadal_sim::harness::cli::run_cli(std::env::args_os()));
}
