//! Hölder-exponent diagnostic for the elimination map: sample pairs of
//! seed words sharing a prefix and exhibit a witness constant for
//! |f(x1) - f(x2)| <= C |x1 - x2|^(1/(1+5 eps)).

use hcf::analysis;
use hcf::seedset;

fn main() {
    let epsilon = 0.1;
    let schedule = seedset::make_schedule(epsilon, 4, None).unwrap();
    let fit = analysis::holder_diagnostic(epsilon, &schedule, 2000, 17).unwrap();

    println!("exponent bound 1/(1+5e): {:.4}", fit.exponent);
    println!("fitted exponent:         {:.4}", fit.fitted_exponent);
    println!("witness ln C:            {:.4}", fit.witness_log_c);
    println!("resample stability:      {:.1}%", 100.0 * fit.stability_fraction);
    if let Some(floor) = fit.floor_branch_min_log {
        println!("shallow-split distance floor (ln): {floor:.4}");
    }
}
