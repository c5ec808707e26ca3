//! Box-count dimension estimation, calibrated on a set of known
//! dimension 1 and then applied to seed-set convergents.

use hcf::analysis;

fn main() {
    // four-corner similarity IFS with ratio 1/4: dimension exactly 1
    let calibration = analysis::calibration_ifs_points(8);
    let scan = analysis::dimension_scan(&calibration, 4f64.powi(-7), 4f64.powi(-3), 6).unwrap();
    println!("calibration slope: {:.4} (R^2 {:.4})", scan.slope, scan.r_squared);

    let seed_points = analysis::seed_set_points(4, 50_000, 7);
    let scan = analysis::dimension_scan(&seed_points, 1e-4, 1e-2, 6).unwrap();
    println!("seed-set slope:    {:.4} (R^2 {:.4})", scan.slope, scan.r_squared);
    for (r, n) in scan.scales.iter().zip(&scan.counts) {
        println!("  r = {r:.6}  N(r) = {n}");
    }

    let radii: Vec<f64> = (0..6).map(|i| 0.1 * 0.5f64.powi(i)).collect();
    let mass = analysis::mass_distribution_check(0.2, 4, 50_000, &radii, 7).unwrap();
    println!("mass-distribution alpha: {:.4} (target >= {:.2})", mass.alpha, 1.0 - 0.2 - mass.tolerance);
}
