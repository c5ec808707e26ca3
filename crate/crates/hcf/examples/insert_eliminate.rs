//! Splice the schedule's integer squares into a seed word and strip
//! them back out.

use hcf::seedset;

fn main() {
    let schedule = seedset::make_schedule(1.0, 3, None).unwrap();
    println!("levels: {:?}", schedule.levels);

    let y = seedset::sample_seed_word(8, 3);
    println!("y  ({} digits): {:?}", y.len(), y.digits());

    let x = seedset::insert(&y, &schedule).unwrap();
    println!("x(y) ({} digits): {:?}", x.len(), x.digits());

    let back = seedset::eliminate(&x, &schedule).unwrap();
    assert_eq!(back, y);
    println!("eliminate(insert(y)) == y");
}
