use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let code = gccp::cli::run(&args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    let _ = std::io::stdout().flush();
    std::process::exit(code);
}
