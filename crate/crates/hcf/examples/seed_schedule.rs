//! Seed-set shells, random seed words, and insertion-schedule search.

use hcf::seedset;

fn main() {
    for n in 1..=4 {
        println!("#I^({n}) = {}", seedset::shell_cardinality(n).unwrap());
    }

    let word = seedset::sample_seed_word(6, 42);
    println!("seed word: {:?}", word.digits());
    println!("ln mu([w]) = {:.3}", seedset::word_weight(&word).unwrap());

    // smallest feasible schedule for each epsilon
    for eps in [0.1, 0.5, 1.0] {
        let schedule = seedset::make_schedule(eps, 6, None).unwrap();
        println!("epsilon {eps}: levels {:?}", schedule.levels);
        schedule.verify().unwrap();
        for k in 1..=schedule.levels.len() {
            let w = seedset::square(k, &schedule).unwrap();
            println!("  W_{k}: {} points, side {}, anchor {}", w.points.len(), w.side, w.anchor);
        }
    }
}
