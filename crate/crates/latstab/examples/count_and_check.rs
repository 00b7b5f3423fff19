//! Count lattice points of a few bodies and check the bound
//! `G <= prod floor(2/lambda_i + 1)` on each.
//!
//! ```bash
//! cargo run --release -p latstab --example count_and_check
//! ```

use latstab::{check_bhw, count_lattice_points, ConvexBody, Result};

fn main() -> Result<()> {
    let tau = 1e-9;
    let bodies = vec![
        ("box 1.5 x 0.5", ConvexBody::box_body(vec![1.5, 0.5])?),
        ("integer box 1 x 1", ConvexBody::box_body(vec![1.0, 1.0])?),
        ("unit disc", ConvexBody::lp_ball(2.0, vec![1.0, 1.0])?),
        (
            "L_1 ball 2.5 x 1.5",
            ConvexBody::lp_ball(1.0, vec![2.5, 1.5])?,
        ),
        (
            "L_8 ball 2.2 x 1.7 x 0.8",
            ConvexBody::lp_ball(8.0, vec![2.2, 1.7, 0.8])?,
        ),
    ];

    for (name, body) in &bodies {
        let count = count_lattice_points(body, tau)?;
        let report = check_bhw(body, tau)?;
        println!(
            "{name:>26}: G = {:>3} (ambiguous {}), rhs = {:>3}, phi = {:8.3}, slack = {:>2}, holds = {}",
            count.count, count.ambiguous, report.rhs, report.phi, report.slack, report.holds
        );
    }
    Ok(())
}
