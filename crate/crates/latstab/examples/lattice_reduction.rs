//! Counting against a general lattice `A Z^d` by reducing the body to the
//! standard lattice.
//!
//! ```bash
//! cargo run --release -p latstab --example lattice_reduction
//! ```

use latstab::geometry::SquareMatrix;
use latstab::{count_lattice_points, reduce_to_standard_lattice, ConvexBody, Result};

fn main() -> Result<()> {
    let tau = 1e-9;

    // Points of 2 Z^2 inside the box 2 x 2 = points of Z^2 inside the
    // reduced body.
    let body = ConvexBody::box_body(vec![2.0, 2.0])?;
    let basis = SquareMatrix::identity(2).scale(2.0);
    let reduced = reduce_to_standard_lattice(&body, &basis)?;
    let r = count_lattice_points(&reduced, tau)?;
    println!("box 2 x 2 against the lattice 2 Z^2: {} points", r.count);

    // A skew lattice basis.
    let skew_basis = SquareMatrix::new(2, vec![1.0, 0.5, 0.0, 1.0])?;
    let body = ConvexBody::box_body(vec![2.7, 1.8])?;
    let reduced = reduce_to_standard_lattice(&body, &skew_basis)?;
    let r = count_lattice_points(&reduced, tau)?;
    println!(
        "box 2.7 x 1.8 against the lattice spanned by (1,0) and (0.5,1): {} points ({} ambiguous)",
        r.count, r.ambiguous
    );
    Ok(())
}
