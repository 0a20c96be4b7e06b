use std::io::Write;

fn main() {
    let env = std::env::var("HMF_PREC").ok();
    let out = hmf_cli::run(std::env::args_os(), env.as_deref());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.code);
}
