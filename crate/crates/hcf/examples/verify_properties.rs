//! Run the sampled IFS property checks and the lemma battery.

use hcf::analysis;
use hcf::ifs;

fn main() {
    let report = ifs::verify_ifs_properties(2000, 7);
    for p in &report.properties {
        println!("{:<28} {:<12} {}", p.name, p.status, p.worst_witness);
    }
    assert!(report.all_pass());

    let lemmas = analysis::verify_lemmas(500, 7);
    for c in &lemmas.checks {
        println!("{:<28} {:<12} {}", c.name, c.status, c.worst_witness);
    }
    assert!(lemmas.all_pass());
}
