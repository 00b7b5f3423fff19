//! Both sides of the lattice-point bound `G(K) <= prod floor(2/lambda_i + 1)`,
//! its continuous envelope, and the closed forms for boxes.
//!
//! The comparison is a discrete inequality, so `G` and the right side are
//! always held and compared as exact integers. The one genuinely dangerous
//! float operation is flooring `2/lambda_i + 1` when it sits at an integer;
//! such near-ties are flagged in the report, and the box route recomputes
//! the floor from `2*alpha_i + 1` directly.

use serde::{Deserialize, Serialize};

use crate::enumeration::{count_lattice_points_opts, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::geometry::{BoxBody, ConvexBody};
use crate::minima::successive_minima_with_budget;

/// Distance to an integer below which a floored factor is flagged.
pub const FLOOR_GUARD: f64 = 1e-9;

/// Verdict on one body: count, minima, floored product, envelope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BhwReport {
    /// `G = |K cap Z^d|` (boundary-ambiguous points included).
    pub count: u64,
    /// Ascending successive minima.
    pub lambdas: Vec<f64>,
    /// `prod floor(2/lambda_i + 1)`.
    pub rhs: u64,
    /// Continuous envelope `prod (2/lambda_i + 1)`, no flooring.
    pub phi: f64,
    /// `rhs - count`.
    pub slack: i64,
    /// `count <= rhs`, compared as integers.
    pub holds: bool,
    /// Boundary-ambiguous points swept into `count`.
    pub ambiguous: u64,
    /// Indices whose floored factor was within [`FLOOR_GUARD`] of an
    /// integer.
    pub floor_near_ties: Vec<usize>,
}

/// Floored product together with its near-tie diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloorProduct {
    pub value: u64,
    /// Factor indices where `2/lambda_i + 1` was within [`FLOOR_GUARD`] of
    /// an integer, i.e. where the float floor is not trustworthy on its own.
    pub near_ties: Vec<usize>,
}

/// Closed forms for a box: minima, count, and floored product straight from
/// the semi-axes, no enumeration. Serves as the oracle for the generic
/// pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxClosedForms {
    pub lambdas: Vec<f64>,
    pub count: u64,
    pub rhs: u64,
}

/// Outcome of the scalar floor comparison `2 floor(x) + 1 <= floor(2x + 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloorLemma {
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
    pub equality: bool,
}

fn validate_lambdas(lambdas: &[f64]) -> Result<()> {
    if lambdas.is_empty() {
        return Err(Error::InvalidInput("empty minima vector".into()));
    }
    if lambdas.iter().any(|l| !l.is_finite() || *l <= 0.0) {
        return Err(Error::InvalidInput(format!(
            "minima must be positive finite reals (got {lambdas:?})"
        )));
    }
    Ok(())
}

/// `prod floor(2/lambda_i + 1)` as an exact integer. Factors within
/// [`FLOOR_GUARD`] of an integer are floored as usual but reported as
/// near-ties.
pub fn rhs_floor_product(lambdas: &[f64]) -> Result<FloorProduct> {
    validate_lambdas(lambdas)?;
    let mut value = 1u64;
    let mut near_ties = Vec::new();
    for (i, l) in lambdas.iter().enumerate() {
        let x = 2.0 / l + 1.0;
        if (x - x.round()).abs() <= FLOOR_GUARD {
            near_ties.push(i);
        }
        value = value
            .checked_mul(x.floor() as u64)
            .ok_or_else(|| Error::InvalidInput("floored product overflows u64".into()))?;
    }
    Ok(FloorProduct { value, near_ties })
}

/// Continuous envelope `prod (2/lambda_i + 1)`.
pub fn phi_envelope(lambdas: &[f64]) -> Result<f64> {
    validate_lambdas(lambdas)?;
    Ok(lambdas.iter().map(|l| 2.0 / l + 1.0).product())
}

/// Runs the full generic pipeline on one body: enumeration for `G`,
/// certified search for the minima, then both sides of the inequality.
pub fn check_bhw(body: &ConvexBody, tau: f64) -> Result<BhwReport> {
    check_bhw_with_budget(body, tau, DEFAULT_BUDGET)
}

pub fn check_bhw_with_budget(body: &ConvexBody, tau: f64, budget: u64) -> Result<BhwReport> {
    let count_report = count_lattice_points_opts(body, tau, budget, 1)?;
    let minima = successive_minima_with_budget(body, budget)?;
    let floored = rhs_floor_product(&minima.lambdas)?;
    let phi = phi_envelope(&minima.lambdas)?;
    let count = count_report.count;
    let rhs = floored.value;
    Ok(BhwReport {
        count,
        lambdas: minima.lambdas,
        rhs,
        phi,
        slack: rhs as i64 - count as i64,
        holds: count <= rhs,
        ambiguous: count_report.ambiguous,
        floor_near_ties: floored.near_ties,
    })
}

/// Box closed forms: `lambda_i = 1/alpha_i`, `G = prod (2 floor(alpha_i) + 1)`,
/// `rhs = prod floor(2 alpha_i + 1)`.
pub fn box_closed_forms(bx: &BoxBody) -> BoxClosedForms {
    let lambdas: Vec<f64> = bx.alphas().iter().map(|a| 1.0 / a).collect();
    let count = bx
        .alphas()
        .iter()
        .map(|a| 2 * a.floor() as u64 + 1)
        .product();
    let rhs = bx
        .alphas()
        .iter()
        .map(|a| (2.0 * a + 1.0).floor() as u64)
        .product();
    BoxClosedForms {
        lambdas,
        count,
        rhs,
    }
}

/// Scalar comparison `2 floor(x) + 1 <= floor(2x + 1)` for `x >= 0`;
/// equality holds exactly when `frac(x) < 1/2`.
pub fn scalar_floor_lemma(x: f64) -> Result<FloorLemma> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidInput(format!(
            "the floor comparison needs a finite x >= 0 (got {x})"
        )));
    }
    let lhs = 2 * x.floor() as i64 + 1;
    let rhs = (2.0 * x + 1.0).floor() as i64;
    Ok(FloorLemma {
        lhs,
        rhs,
        holds: lhs <= rhs,
        equality: lhs == rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boxy(alphas: &[f64]) -> BoxBody {
        BoxBody::new(alphas.to_vec()).unwrap()
    }

    #[test]
    fn floored_product_examples() {
        assert_eq!(rhs_floor_product(&[0.5, 1.0]).unwrap().value, 15);
        assert_eq!(rhs_floor_product(&[1.0, 1.0, 1.0]).unwrap().value, 27);
        assert_eq!(rhs_floor_product(&[2.0 / 3.0, 2.0]).unwrap().value, 8);
    }

    #[test]
    fn floored_product_flags_integer_factors() {
        // 2/0.5 + 1 = 5 exactly: correct value, but flagged as a near-tie.
        let fp = rhs_floor_product(&[0.5]).unwrap();
        assert_eq!(fp.value, 5);
        assert_eq!(fp.near_ties, vec![0]);
        let fp = rhs_floor_product(&[0.7]).unwrap();
        assert_eq!(fp.value, 3);
        assert!(fp.near_ties.is_empty());
    }

    #[test]
    fn floored_product_rejects_bad_minima() {
        assert!(rhs_floor_product(&[]).is_err());
        assert!(rhs_floor_product(&[0.5, -1.0]).is_err());
        assert!(rhs_floor_product(&[0.0]).is_err());
    }

    #[test]
    fn envelope_examples() {
        assert_eq!(phi_envelope(&[1.0, 1.0]).unwrap(), 9.0);
        assert_eq!(phi_envelope(&[0.5, 1.0]).unwrap(), 15.0);
        assert!((phi_envelope(&[2.0 / 3.0, 2.0]).unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn check_is_tight_at_the_integer_box() {
        let r = check_bhw(&ConvexBody::Box(boxy(&[1.0, 1.0])), 1e-9).unwrap();
        assert_eq!((r.count, r.rhs, r.slack), (9, 9, 0));
        assert!(r.holds);
    }

    #[test]
    fn check_on_a_fractional_box() {
        let r = check_bhw(&ConvexBody::Box(boxy(&[1.5, 0.5])), 1e-9).unwrap();
        assert_eq!(r.count, 3);
        assert!((r.lambdas[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((r.lambdas[1] - 2.0).abs() < 1e-12);
        assert_eq!(r.rhs, 8);
        assert_eq!(r.slack, 5);
        assert!(r.holds);
    }

    #[test]
    fn check_on_the_unit_disc() {
        let ball = ConvexBody::lp_ball(2.0, vec![1.0, 1.0]).unwrap();
        let r = check_bhw(&ball, 1e-9).unwrap();
        assert_eq!((r.count, r.rhs, r.slack), (5, 9, 4));
        assert!(r.holds);
    }

    #[test]
    fn closed_forms_examples() {
        let f = box_closed_forms(&boxy(&[2.0, 1.0]));
        assert_eq!(f.lambdas, vec![0.5, 1.0]);
        assert_eq!((f.count, f.rhs), (15, 15));

        let f = box_closed_forms(&boxy(&[1.5, 0.5]));
        assert_eq!((f.count, f.rhs), (3, 8));

        let f = box_closed_forms(&boxy(&[2.5]));
        assert_eq!(f.lambdas, vec![0.4]);
        assert_eq!((f.count, f.rhs), (5, 6));
    }

    #[test]
    fn scalar_floor_lemma_examples() {
        let r = scalar_floor_lemma(1.5).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds, r.equality), (3, 4, true, false));
        let r = scalar_floor_lemma(2.0).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds, r.equality), (5, 5, true, true));
        let r = scalar_floor_lemma(0.4).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds, r.equality), (1, 1, true, true));
        assert!(scalar_floor_lemma(-1.0).is_err());
        assert!(scalar_floor_lemma(f64::NAN).is_err());
    }

    #[test]
    fn floor_lemma_equality_iff_fraction_below_half() {
        for i in 0..4 {
            for f in 0..100 {
                let x = i as f64 + f as f64 / 100.0;
                let r = scalar_floor_lemma(x).unwrap();
                assert!(r.holds);
                assert_eq!(r.equality, x.fract() < 0.5, "x = {x}");
            }
        }
    }

    #[test]
    fn floored_product_never_exceeds_envelope() {
        for lambdas in [
            vec![0.5, 1.0],
            vec![2.0 / 3.0, 2.0],
            vec![0.31, 0.77, 1.9],
            vec![3.3],
        ] {
            let fp = rhs_floor_product(&lambdas).unwrap().value as f64;
            let phi = phi_envelope(&lambdas).unwrap();
            assert!(fp <= phi + 1e-9);
        }
    }
}
