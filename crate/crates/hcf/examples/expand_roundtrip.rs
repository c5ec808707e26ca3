//! Expand a Gaussian rational into Hurwitz digits and reconstruct it.

use hcf::gaussian::{parse_fraction, GaussianRational};
use hcf::hurwitz;

fn main() {
    let z = GaussianRational::from_coords(
        parse_fraction("18/61").unwrap(),
        parse_fraction("-15/61").unwrap(),
    );
    let word = hurwitz::expand(&z, 32).unwrap();
    println!("digits of {z}:");
    for (n, d) in word.digits().iter().enumerate() {
        println!("  c_{} = {d}", n + 1);
    }
    println!("exhausted: {}", word.exhausted);

    let back = hurwitz::reconstruct(&word).unwrap();
    println!("reconstructed: {back}");
    assert_eq!(back, z);

    for c in hurwitz::convergents(&word).unwrap() {
        println!("convergent {}: p = {}, q = {}", c.index, c.p, c.q);
    }
}
