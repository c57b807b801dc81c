use cavity_crossing::cli;

fn main() {
    std::process::exit(cli::run());
}
