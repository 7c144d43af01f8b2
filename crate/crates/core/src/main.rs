fn main() {
    let code = binodiv_core::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
