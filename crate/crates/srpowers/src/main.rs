use std::io::{stderr, stdout};

fn main() {
    if let Ok(threads) = std::env::var("SRPOWERS_THREADS") {
        if let Ok(t) = threads.parse::<usize>() {
            if t >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
            }
        }
    }
    let argv: Vec<String> = std::env::args().collect();
    let code = srpowers::cli::run(&argv, &mut stdout(), &mut stderr());
    std::process::exit(code);
}
