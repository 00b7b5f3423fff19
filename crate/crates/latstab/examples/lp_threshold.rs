//! L_p deformation of a box: the coarse and exact thresholds, and hull
//! verification across a grid of exponents.
//!
//! ```bash
//! cargo run --release -p latstab --example lp_threshold
//! ```

use latstab::lp::lp_threshold_report;
use latstab::{verify_lp_hull_stability, HullVerdict, Result};

fn main() -> Result<()> {
    let tau = 1e-9;
    let alphas = [1.5, 2.5];

    let report = lp_threshold_report(&alphas)?;
    println!("semi-axes (descending): {:?}", report.alphas);
    println!("betas:                  {:?}", report.betas);
    println!("coarse threshold:       {}", report.p0_paper);
    println!(
        "exact threshold:        {} (bracket {:?})",
        report.p0_exact, report.exact_bracket
    );
    println!("worst-case point:       {:?}", report.witness.coords);

    println!("\n  p        lattice set vs box");
    for p in [1.0, 2.0, 2.2, 2.4, 3.2, 8.0, f64::INFINITY] {
        match verify_lp_hull_stability(&alphas, p, tau) {
            Ok(v) => match v.verdict {
                HullVerdict::Equal => println!("  {p:<8} equal"),
                HullVerdict::Unequal { witness } => {
                    println!("  {p:<8} differs at {:?}", witness.coords)
                }
                HullVerdict::SkippedIntegralAlpha => println!("  {p:<8} skipped"),
            },
            Err(e) => println!("  {p:<8} {e}"),
        }
    }
    Ok(())
}
