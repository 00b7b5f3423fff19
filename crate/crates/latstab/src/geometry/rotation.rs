//! Seeded rotation sampling with a calibrated distance to the identity.
//!
//! A random skew-symmetric direction `A` is drawn once per seed; the Cayley
//! transform `R(s) = (I - sA)(I + sA)^{-1}` is orthogonal with det +1 for
//! every scale `s`, and `||R(s) - I||` grows monotonically from 0 towards 2,
//! so a scalar bisection on `s` hits any target amplitude in [0, 2).

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::geometry::matrix::{operator_norm, SquareMatrix};

/// Relative accuracy contract on the achieved `||R - I||`.
pub const EPS_TARGET_RELATIVE_TOL: f64 = 0.05;

const BISECTION_ITERS: usize = 40;

/// Skew-symmetric matrix with off-diagonal entries uniform in (-1, 1),
/// deterministic in `(d, seed)`.
pub fn random_skew(d: usize, seed: u64) -> SquareMatrix {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut a = SquareMatrix::zero(d);
    for i in 0..d {
        for j in i + 1..d {
            let v: f64 = rng.gen_range(-1.0..1.0);
            a[(i, j)] = v;
            a[(j, i)] = -v;
        }
    }
    a
}

/// Cayley transform `(I - A)(I + A)^{-1}` of a skew-symmetric matrix.
///
/// `I + A` has all singular values >= 1 for skew `A`, so the solve is
/// well-conditioned at every scale.
pub fn cayley_rotation(skew: &SquareMatrix) -> Result<SquareMatrix> {
    let id = SquareMatrix::identity(skew.dim());
    let plus = id.add(skew);
    let minus = id.sub(skew);
    Ok(minus.mul(&plus.inverse()?))
}

/// Samples `R` in SO(d) with `||R - I||` within 5% relative of `eps_target`.
/// Deterministic for fixed `(d, eps_target, seed)`; `eps_target = 0` returns
/// the exact identity.
pub fn sample_rotation(d: usize, eps_target: f64, seed: u64) -> Result<SquareMatrix> {
    if !(0.0..2.0).contains(&eps_target) || !eps_target.is_finite() {
        return Err(Error::EpsilonOutOfRange { eps: eps_target });
    }
    if eps_target == 0.0 {
        return Ok(SquareMatrix::identity(d));
    }
    if d < 2 {
        return Err(Error::InvalidInput(
            "a nonzero rotation amplitude needs dimension >= 2".into(),
        ));
    }
    let direction = random_skew(d, seed);
    let amplitude = |scale: f64| -> Result<f64> {
        let r = cayley_rotation(&direction.scale(scale))?;
        operator_norm(&r.sub(&SquareMatrix::identity(d)))
    };

    let mut hi = 1.0;
    let mut doublings = 0;
    while amplitude(hi)? < eps_target {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::InvalidInput(format!(
                "rotation amplitude {eps_target} not reachable along the sampled direction"
            )));
        }
    }
    let mut lo = 0.0;
    for _ in 0..BISECTION_ITERS {
        let mid = 0.5 * (lo + hi);
        if amplitude(mid)? < eps_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let scale = 0.5 * (lo + hi);
    let rotation = cayley_rotation(&direction.scale(scale))?;
    debug_assert!({
        let achieved = operator_norm(&rotation.sub(&SquareMatrix::identity(d)))?;
        (achieved - eps_target).abs() <= EPS_TARGET_RELATIVE_TOL * eps_target
    });
    Ok(rotation)
}
