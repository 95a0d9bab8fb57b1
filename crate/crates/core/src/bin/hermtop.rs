use std::io::Write;

fn main() {
    let (code, out) = hermtop::cli::run(std::env::args_os());
    if code == 0 {
        print!("{out}");
        let _ = std::io::stdout().flush();
    } else {
        eprint!("{out}");
    }
    std::process::exit(code);
}
