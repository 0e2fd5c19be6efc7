use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = boardkit_cli::Cli::parse();
    // unlocked handles: server worker threads log to stderr while this runs
    let code = boardkit_cli::run(cli, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
