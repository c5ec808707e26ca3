//! Find homothetic copies v + nA of a lattice pattern.

use hcf::gaussian::GaussianInt;
use hcf::patterns::{self, LatticePattern};
use hcf::seedset;

fn main() {
    let g = |a, b| GaussianInt::new(a, b);
    let pattern = LatticePattern::new(vec![g(0, 0), g(1, 0), g(0, 1)]).unwrap();
    let set = vec![g(5, 5), g(7, 5), g(5, 7), g(9, 9)];

    for copy in patterns::find_copies(&pattern, &set, 3).unwrap() {
        println!("copy at v = {}, scale n = {}", copy.v, copy.n);
    }

    // every large-enough square W_k of a schedule contains copies
    let schedule = seedset::make_schedule(1.0, 8, None).unwrap();
    for k in 1..=schedule.levels.len() {
        let copies = patterns::copies_in_square(&pattern, k, &schedule).unwrap();
        println!("W_{k} (level {}): {} copies", schedule.levels[k - 1], copies.len());
    }
}
