//! Sandwich bounds on the minima of a perturbed body, including a case
//! where the operator-norm form of the bounds genuinely fails.
//!
//! ```bash
//! cargo run --release -p latstab --example lipschitz_sandwich
//! ```

use latstab::geometry::{rotation_2d, SquareMatrix};
use latstab::{check_lipschitz_sandwich, ConvexBody, Result};

fn show(name: &str, body: &ConvexBody, t: &SquareMatrix) -> Result<()> {
    let r = check_lipschitz_sandwich(body, t)?;
    println!("{name}: eps = {:.6}, eps' = {:.6}", r.eps, r.eps_prime);
    for (i, c) in r.per_index.iter().enumerate() {
        println!(
            "  lambda_{}: base {:.9}, transformed {:.9} in [{:.9}, {:.9}] -> {}",
            i + 1,
            c.lambda_base,
            c.lambda_transformed,
            c.lower,
            c.upper,
            if c.ok { "ok" } else { "VIOLATED" }
        );
    }
    println!(
        "  exact bounds: {}; first-order bounds: {}\n",
        r.all_ok, r.all_first_order_ok
    );
    Ok(())
}

fn main() -> Result<()> {
    let square = ConvexBody::box_body(vec![1.0, 1.0])?;
    show(
        "unit square under 1.1 * I",
        &square,
        &SquareMatrix::identity(2).scale(1.1),
    )?;
    show("unit square under R(0.05)", &square, &rotation_2d(0.05))?;

    // Rotating an elongated box moves a diagonal lattice vector inside
    // faster than the operator norm allows: the bounds fail at the second
    // index, and the report says so.
    let elongated = ConvexBody::box_body(vec![2.0, 1.0])?;
    show("box 2 x 1 under R(0.05)", &elongated, &rotation_2d(0.05))?;
    Ok(())
}
