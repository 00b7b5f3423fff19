//! Successive minima with integer witness vectors, plus the perturbation
//! sandwich check.
//!
//! The search is a certified brute force: all integer points in a Euclidean
//! ball are examined, and the ball radius `t` is chosen so that any point
//! outside it has gauge at least `t / circumradius`, which exceeds every
//! reported minimum. Independence of witnesses is decided exactly over the
//! integers, never in floating point.

use serde::{Deserialize, Serialize};

use crate::enumeration::{check_ball_budget, for_each_ball_point, LatticePoint, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::geometry::{operator_norm, transform_body, ConvexBody, SquareMatrix};

/// Ascending successive minima with witnesses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimaResult {
    /// `lambda_1 <= ... <= lambda_d`.
    pub lambdas: Vec<f64>,
    /// Integer vectors achieving the minima; exactly rank d over the
    /// rationals, `gauge(witness_i) = lambda_i`.
    pub witnesses: Vec<LatticePoint>,
    /// Every nonzero integer point with Euclidean norm up to this radius
    /// was examined.
    pub certificate_radius: f64,
}

/// Per-index outcome of the sandwich check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzIndexCheck {
    pub lambda_base: f64,
    pub lambda_transformed: f64,
    /// Exact inclusion-derived bounds: `lambda/(1+eps)` and
    /// `lambda/(1-eps')`.
    pub lower: f64,
    pub upper: f64,
    pub ok: bool,
    /// First-order bounds `(1-eps')*lambda` and `(1+eps)*lambda`, recorded
    /// but not asserted; they can fail for moderate perturbations.
    pub first_order_lower: f64,
    pub first_order_upper: f64,
    pub first_order_ok: bool,
}

/// Sandwich comparison of the minima of `K` and `TK`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    /// `||T - I||`.
    pub eps: f64,
    /// `||T^{-1} - I||`.
    pub eps_prime: f64,
    pub per_index: Vec<LipschitzIndexCheck>,
    pub all_ok: bool,
    pub all_first_order_ok: bool,
}

const SANDWICH_SLACK: f64 = 1e-9;

/// Exact rank over the rationals of a family of integer vectors, by
/// fraction-free (Bareiss) elimination. No floating point is involved.
pub fn integer_rank(vectors: &[LatticePoint]) -> usize {
    let n = vectors.len();
    if n == 0 {
        return 0;
    }
    let d = vectors[0].dim();
    let mut m: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.coords.iter().map(|&c| c as i128).collect())
        .collect();
    let mut rank = 0usize;
    let mut prev: i128 = 1;
    for col in 0..d {
        let Some(p) = (rank..n).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col];
        let pivot_row = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            let factor = row[col];
            for (cell, pv) in row[col + 1..].iter_mut().zip(&pivot_row[col + 1..]) {
                *cell = (*cell * pivot - *pv * factor) / prev;
            }
            row[col] = 0;
        }
        prev = pivot;
        rank += 1;
        if rank == n {
            break;
        }
    }
    rank
}

/// Sign-canonical representative of `{z, -z}`: first nonzero coordinate
/// positive.
fn canonical(z: &[i64]) -> Vec<i64> {
    match z.iter().find(|&&c| c != 0) {
        Some(&c) if c < 0 => z.iter().map(|&v| -v).collect(),
        _ => z.to_vec(),
    }
}

/// Computes the successive minima of `body` against Z^d.
pub fn successive_minima(body: &ConvexBody) -> Result<MinimaResult> {
    successive_minima_with_budget(body, DEFAULT_BUDGET)
}

pub fn successive_minima_with_budget(body: &ConvexBody, budget: u64) -> Result<MinimaResult> {
    successive_minima_with_radius_floor(body, 0.0, budget)
}

/// Same search with a lower bound imposed on the certificate radius; lets
/// tests confirm that enlarging the examined ball never changes the result.
#[doc(hidden)]
pub fn successive_minima_with_radius_floor(
    body: &ConvexBody,
    radius_floor: f64,
    budget: u64,
) -> Result<MinimaResult> {
    let d = body.dim();
    let support = body.support_bounding_box();
    let circum = support.iter().map(|h| h * h).sum::<f64>().sqrt();

    // The standard basis vectors are d independent lattice vectors, so the
    // largest of their gauges bounds lambda_d from above.
    let mut unit = vec![0.0f64; d];
    let mut lambda_ub = 0.0f64;
    for i in 0..d {
        unit[i] = 1.0;
        lambda_ub = lambda_ub.max(body.gauge_unchecked(&unit));
        unit[i] = 0.0;
    }

    // Any z with ||z||_2 > t has gauge(z) > t / circum >= lambda_ub, hence
    // cannot participate in the selection; the +1 keeps ties strict.
    let t = (lambda_ub * circum + 1.0).max(radius_floor);
    // Points with |z_i| > lambda_ub * h_i have gauge(z) >= |z_i| / h_i >
    // lambda_ub as well (strictly, so not even ties are lost), which caps
    // each axis of the scan without weakening the certificate.
    let caps: Vec<i64> = support
        .iter()
        .map(|h| (lambda_ub * h * (1.0 + 1e-12) + 1e-9).floor() as i64)
        .collect();
    check_ball_budget(d, t, &caps, budget)?;

    let mut candidates: Vec<(f64, Vec<i64>)> = Vec::new();
    for_each_ball_point(d, t, &caps, &mut |z, xf| {
        if z.iter().all(|&c| c == 0) {
            return;
        }
        let g = body.gauge_unchecked(xf);
        if g <= lambda_ub {
            candidates.push((g, canonical(z)));
        }
    });
    candidates.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    candidates.dedup_by(|a, b| a.1 == b.1);

    let mut lambdas = Vec::with_capacity(d);
    let mut witnesses: Vec<LatticePoint> = Vec::with_capacity(d);
    for (g, z) in candidates {
        let mut attempt = witnesses.clone();
        attempt.push(LatticePoint::new(z));
        if integer_rank(&attempt) == attempt.len() {
            lambdas.push(g);
            witnesses = attempt;
            if witnesses.len() == d {
                break;
            }
        }
    }
    assert_eq!(
        witnesses.len(),
        d,
        "selection must reach full rank: the standard basis is always examined"
    );
    Ok(MinimaResult {
        lambdas,
        witnesses,
        certificate_radius: t,
    })
}

/// Checks the inclusion-derived sandwich
/// `lambda_i(K)/(1+eps) <= lambda_i(TK) <= lambda_i(K)/(1-eps')` for a
/// perturbation `T`, and records whether the first-order form holds too.
pub fn check_lipschitz_sandwich(body: &ConvexBody, t: &SquareMatrix) -> Result<LipschitzReport> {
    check_lipschitz_sandwich_with_budget(body, t, DEFAULT_BUDGET)
}

pub fn check_lipschitz_sandwich_with_budget(
    body: &ConvexBody,
    t: &SquareMatrix,
    budget: u64,
) -> Result<LipschitzReport> {
    if t.dim() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: t.dim(),
        });
    }
    let identity = SquareMatrix::identity(t.dim());
    let eps = operator_norm(&t.sub(&identity))?;
    let t_inv = t.inverse()?;
    let eps_prime = operator_norm(&t_inv.sub(&identity))?;
    if eps >= 1.0 || eps_prime >= 1.0 {
        return Err(Error::PerturbationTooLarge { eps, eps_prime });
    }

    let base = successive_minima_with_budget(body, budget)?;
    let transformed_body = transform_body(t, body)?;
    let transformed = successive_minima_with_budget(&transformed_body, budget)?;

    let mut per_index = Vec::with_capacity(base.lambdas.len());
    for (lb, lt) in base.lambdas.iter().zip(&transformed.lambdas) {
        let lower = lb / (1.0 + eps);
        let upper = lb / (1.0 - eps_prime);
        let ok = *lt >= lower - SANDWICH_SLACK && *lt <= upper + SANDWICH_SLACK;
        let first_order_lower = (1.0 - eps_prime) * lb;
        let first_order_upper = (1.0 + eps) * lb;
        let first_order_ok =
            *lt >= first_order_lower - SANDWICH_SLACK && *lt <= first_order_upper + SANDWICH_SLACK;
        per_index.push(LipschitzIndexCheck {
            lambda_base: *lb,
            lambda_transformed: *lt,
            lower,
            upper,
            ok,
            first_order_lower,
            first_order_upper,
            first_order_ok,
        });
    }
    let all_ok = per_index.iter().all(|c| c.ok);
    let all_first_order_ok = per_index.iter().all(|c| c.first_order_ok);
    Ok(LipschitzReport {
        eps,
        eps_prime,
        per_index,
        all_ok,
        all_first_order_ok,
    })
}
