fn main() {
    std::process::exit(bayes_cvxclust::cli::run(std::env::args_os()));
}
