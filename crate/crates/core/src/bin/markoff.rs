fn main() {
    markoff_lab::cli::init_threads();
    let code = markoff_lab::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
