//! Times the exact computation of one moment.
//!
//! `cargo run --release --example timing -- adjacency 16`

use std::time::Instant;

use sbrm_core::{averager, Model};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.len() != 3 {
        eprintln!("usage: timing <adjacency|laplacian> <order>");
        std::process::exit(2);
    }
    let model: Model = args[1].parse().expect("model");
    let n: usize = args[2].parse().expect("order");
    let start = Instant::now();
    let r = averager::moment_report(model, n).expect("moment");
    println!("{model} {n}: {} walks, {} reduced words, {:.2?}", r.walks, r.reduced_words, start.elapsed());
    println!("{}", r.moment.display());
}
