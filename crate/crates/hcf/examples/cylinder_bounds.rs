//! Log-domain diameter bounds for deep cylinders.
//!
//! Diameters of depth-n seed cylinders shrink like 3^(-n^2); the log
//! bounds stay finite long after f64 magnitudes would underflow.

use hcf::ifs;
use hcf::seedset;

fn main() {
    let constants = ifs::derived_constants();
    println!("xi    = {} + {}i", constants.xi_re, constants.xi_im);
    println!("gamma = {}", constants.gamma);

    for depth in [1, 5, 10, 20, 40] {
        let word = seedset::sample_seed_word(depth, 7);
        let info = ifs::cylinder(&word).unwrap();
        println!(
            "depth {depth:>2}: ln diam in ({:>12.3}, {:>12.3}]",
            info.log_diam_lo, info.log_diam_hi
        );
        assert!(info.log_diam_lo < info.log_diam_hi);
    }
}
