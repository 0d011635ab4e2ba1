// Deeply nested `||` chains recurse once per node, so the CLI runs on a
// thread with a large stack.
const STACK: usize = 1 << 30;

fn main() {
    let worker = std::thread::Builder::new().stack_size(STACK).spawn(|| {
        klaimdb::cli::main_with_args(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
    });
    let code = match worker.map(|h| h.join()) {
        Ok(Ok(code)) => code,
        _ => 101,
    };
    std::process::exit(code);
}
