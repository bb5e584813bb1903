use std::io::Write;

fn main() {
    let out = qdisk_core::cli::run(std::env::args_os());
    if out.code == qdisk_core::cli::EXIT_USAGE {
        eprint!("{}", out.text);
        if !out.text.ends_with('\n') {
            eprintln!();
        }
    } else {
        let mut so = std::io::stdout().lock();
        let _ = so.write_all(out.text.as_bytes());
    }
    std::process::exit(out.code);
}
