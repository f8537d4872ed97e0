fn main() {
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    std::process::exit(rootsigma::cli::run(std::env::args_os(), &mut out, &mut err));
}
