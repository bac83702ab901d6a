use std::io::Write;

fn main() {
    let r = eqalg::cli::run_args(std::env::args_os());
    print!("{}", r.stdout);
    eprint!("{}", r.stderr);
    std::io::stdout().flush().ok();
    std::process::exit(r.status);
}
