//! Successive minima with integer witness vectors, on a box, a rotated box,
//! and a Euclidean ball.
//!
//! ```bash
//! cargo run --release -p latstab --example successive_minima
//! ```

use latstab::geometry::rotation_2d;
use latstab::{successive_minima, transform_body, ConvexBody, Result};

fn show(name: &str, body: &ConvexBody) -> Result<()> {
    let m = successive_minima(body)?;
    println!("{name}:");
    for (i, (lambda, witness)) in m.lambdas.iter().zip(&m.witnesses).enumerate() {
        println!(
            "  lambda_{} = {:<20} witness {:?}",
            i + 1,
            lambda,
            witness.coords
        );
    }
    println!(
        "  certified up to Euclidean radius {:.3}",
        m.certificate_radius
    );
    Ok(())
}

fn main() -> Result<()> {
    show("box 2 x 1", &ConvexBody::box_body(vec![2.0, 1.0])?)?;

    let rotated = transform_body(&rotation_2d(0.01), &ConvexBody::box_body(vec![1.0, 1.0])?)?;
    show("unit square rotated by 0.01", &rotated)?;
    println!("  (both minima equal cos 0.01 = {})", 0.01f64.cos());

    show(
        "unit ball in dimension 3",
        &ConvexBody::lp_ball(2.0, vec![1.0, 1.0, 1.0])?,
    )?;
    Ok(())
}
