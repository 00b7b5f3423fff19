//! Rotation stability around a box: the explicit radius, a guarantee
//! audit below it, and an amplitude sweep with the discrete-drop summary.
//!
//! ```bash
//! cargo run --release -p latstab --example rotation_stability
//! ```

use latstab::stability::{audit_radius_guarantee, summarize_drop_audit};
use latstab::{rotation_sweep, stability_radius, BoxBody, Result, DEFAULT_BUDGET};

fn main() -> Result<()> {
    let tau = 1e-9;
    let bx = BoxBody::new(vec![2.0, 1.0])?;

    let radius = stability_radius(&bx)?;
    println!(
        "box 2 x 1: boundary gap = {}, stability radius = {}",
        radius.delta, radius.radius
    );

    let audit = audit_radius_guarantee(&bx, 200, 7, tau, DEFAULT_BUDGET)?;
    println!(
        "audit below the radius: {} samples, {} audited, {} in the margin band, \
         {} violations, max entered = {}",
        audit.samples, audit.audited, audit.margin_excluded, audit.violations, audit.max_entered
    );

    let grid = [1e-4, 1e-3, 1e-2, 0.1];
    let records = rotation_sweep(&bx, &grid, 10, 42, tau, DEFAULT_BUDGET, true)?;
    println!("\n  eps_target   achieved eps   G(K_R)  rhs(K_R)  strict  drop  entered");
    for r in records.iter().step_by(10) {
        println!(
            "  {:<12} {:<14.6} {:<7} {:<9} {:<7} {:<5} {}",
            r.eps_target, r.epsilon, r.count_rotated, r.rhs_rotated, r.strict, r.drop, r.entered
        );
    }
    let summary = summarize_drop_audit(&records);
    println!(
        "\ndrop audit over {} rotated records: {} reached the 2^d - 1 drop, range [{}, {}]",
        summary.rotated_records, summary.claim_held, summary.min_drop, summary.max_drop
    );
    Ok(())
}
