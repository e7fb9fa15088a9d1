use env_logger::Env;

fn main() {
    env_logger::Builder::from_env(Env::new().filter_or("CONECTL_LOG", "warn"))
        .format_timestamp(None)
        .init();
    std::process::exit(dikin_cone::cli::main_with_args(std::env::args_os()));
}
