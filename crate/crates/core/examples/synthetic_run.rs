//! End-to-end run on a generated corpus: mine, build signatures, attribute.
//!
//! `cargo run --release -p skipsig-core --example synthetic_run -- [seed]`

use std::io;
use std::time::Instant;

use skipsig::attribution::{evaluate_mined, EvaluationConfig};
use skipsig::signature::{build_signatures, mine_corpus, report};
use skipsig::synthetic::{generate, SyntheticConfig};
use skipsig::MiningParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map_or(Ok(1), |s| s.parse())?;
    let corpus = generate(&SyntheticConfig::default().with_seed(seed));
    let params = MiningParams::default();

    let start = Instant::now();
    let mined = mine_corpus(&corpus.classes, &params)?;
    eprintln!("mined {} tokens in {:.2?}", corpus.n_tokens(), start.elapsed());

    let built = build_signatures(&mined.classes, &mined.dictionary, 1.0)?;
    report(&built, &mined.dictionary, io::stdout().lock())?;

    for (plant, sig) in corpus.planted.iter().zip(&built) {
        let key = plant.key(&mined.dictionary).expect("planted tags are coded");
        println!("# {}: planted {} {} in revised signature: {}", plant.class_id, plant.first, plant.second, sig.revised.contains(&key));
    }

    let eval = evaluate_mined(&mined.classes, &mined.dictionary, &EvaluationConfig::default())?;
    println!();
    eval.write_table(io::stdout().lock())?;
    Ok(())
}
