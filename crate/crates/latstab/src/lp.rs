//! L_p deformation study: for which exponents does the L_p ball keep the
//! box's lattice points?
//!
//! Two thresholds are computed side by side. The coarse one evaluates
//! `ln d / min ln(alpha_i / floor(alpha_i))`, which comes from bounding the
//! worst-case sum by `d * beta_max^p`; the exact one bisects the sum
//! `sum beta_i^p = 1` itself, where `beta_i = floor(alpha_i)/alpha_i` and
//! the worst case is the all-floors lattice point. For heterogeneous
//! semi-axes the exact threshold is strictly smaller; the discrepancy is
//! surfaced, not hidden. Any integral semi-axis (d >= 2) puts the witness
//! on the unit sphere of no finite L_p ball, so both thresholds degenerate
//! to infinity.

use serde::{Deserialize, Serialize};

use crate::bhw::{check_bhw_with_budget, BhwReport};
use crate::enumeration::{lattice_set_equal_with_budget, LatticePoint, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::geometry::{BoxBody, ConvexBody};

/// Relative exclusion window around the exact threshold inside which
/// hull verification refuses to run: boundary membership at the threshold
/// is float-ambiguous by construction.
pub const THRESHOLD_MARGIN_RELATIVE: f64 = 1e-6;

/// Absolute width of the bisection bracket.
pub const BRACKET_TOLERANCE: f64 = 1e-9;

/// Side-by-side threshold report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpThresholdReport {
    /// Semi-axes, descending.
    pub alphas: Vec<f64>,
    /// `beta_i = floor(alpha_i) / alpha_i` (0 when `alpha_i < 1`).
    pub betas: Vec<f64>,
    /// Coarse threshold from the `d * beta_max^p <= 1` bound.
    #[serde(with = "crate::report::maybe_inf")]
    pub p0_paper: f64,
    /// Exact threshold from `sum beta_i^p = 1` at the worst-case point.
    #[serde(with = "crate::report::maybe_inf")]
    pub p0_exact: f64,
    /// Final bisection bracket around the exact threshold.
    #[serde(with = "crate::report::maybe_inf_pair")]
    pub exact_bracket: (f64, f64),
    /// The all-floors lattice point, which dominates every lattice point of
    /// the box term by term.
    pub witness: LatticePoint,
}

/// Verdict of the hull comparison at one exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum HullVerdict {
    Equal,
    Unequal {
        witness: LatticePoint,
    },
    /// Some semi-axis is a positive integer (d >= 2): the all-floors point
    /// sits on the unit sphere of no finite-p ball, so the comparison is
    /// skipped.
    SkippedIntegralAlpha,
}

/// Hull comparison report for one `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullStability {
    #[serde(with = "crate::report::maybe_inf")]
    pub p: f64,
    pub verdict: HullVerdict,
}

/// Both-pipeline comparison of the L_p ball against its box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpBhwComparison {
    #[serde(with = "crate::report::maybe_inf")]
    pub p: f64,
    pub report_lp: BhwReport,
    pub report_box: BhwReport,
    /// `lambda_i(K_p) >= lambda_i(K_inf) - 1e-9` for every index.
    pub minima_monotone: bool,
    /// `rhs(K_p) <= rhs(K_inf)` as integers.
    pub rhs_monotone: bool,
}

fn sorted_alphas(alphas: &[f64]) -> Result<Vec<f64>> {
    Ok(BoxBody::new(alphas.to_vec())?.alphas().to_vec())
}

fn betas_of(alphas: &[f64]) -> Vec<f64> {
    alphas.iter().map(|a| a.floor() / a).collect()
}

fn is_integral(a: f64) -> bool {
    a == a.floor()
}

fn require_eligible(alphas: &[f64]) -> Result<()> {
    if alphas.iter().all(|a| *a < 1.0) {
        return Err(Error::InvalidInput(format!(
            "no semi-axis reaches 1; the box holds no nonzero lattice point and no \
             threshold is defined (alphas = {alphas:?})"
        )));
    }
    Ok(())
}

/// Coarse threshold `ln d / min_(alpha_i not integral) ln(alpha_i / floor(alpha_i))`.
/// Any integral semi-axis >= 1 with d >= 2 degenerates the threshold to
/// infinity; d = 1 with a non-integral semi-axis gives 0 (any p works).
pub fn p0_paper(alphas: &[f64]) -> Result<f64> {
    let alphas = sorted_alphas(alphas)?;
    require_eligible(&alphas)?;
    let d = alphas.len();
    let eligible: Vec<f64> = alphas.iter().copied().filter(|a| *a >= 1.0).collect();
    if d >= 2 && eligible.iter().any(|a| is_integral(*a)) {
        return Ok(f64::INFINITY);
    }
    let min_log = eligible
        .iter()
        .filter(|a| !is_integral(**a))
        .map(|a| (a / a.floor()).ln())
        .fold(f64::INFINITY, f64::min);
    if min_log.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok((d as f64).ln() / min_log)
}

/// Exact threshold: the root of `p -> sum beta_i^p - 1`, bisected to a
/// bracket of width [`BRACKET_TOLERANCE`]. Returns the threshold and the
/// final bracket. 0 means every p >= 1 preserves the lattice set; infinity
/// means no finite p does.
pub fn p0_exact(alphas: &[f64]) -> Result<(f64, (f64, f64))> {
    let alphas = sorted_alphas(alphas)?;
    require_eligible(&alphas)?;
    let d = alphas.len();
    let betas = betas_of(&alphas);
    let positive = betas.iter().filter(|b| **b > 0.0).count();
    let has_unit = betas.contains(&1.0);
    if has_unit && d >= 2 {
        return Ok((f64::INFINITY, (f64::INFINITY, f64::INFINITY)));
    }
    if positive == 1 {
        // A single positive term never exceeds 1: every exponent works.
        return Ok((0.0, (0.0, 0.0)));
    }
    let f = |p: f64| -> f64 { betas.iter().map(|b| b.powf(p)).sum::<f64>() - 1.0 };
    let mut lo = 1.0;
    if f(lo) <= 0.0 {
        // Root below 1; f(0) = (number of positive betas) - 1 > 0.
        lo = 0.0;
    }
    let mut hi = 128.0;
    let mut doublings = 0;
    while f(hi) > 0.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return Err(Error::InvalidInput(
                "threshold bisection failed to bracket a sign change".into(),
            ));
        }
    }
    while hi - lo > BRACKET_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi), (lo, hi)))
}

/// Assembles the full threshold report for a semi-axis vector.
pub fn lp_threshold_report(alphas: &[f64]) -> Result<LpThresholdReport> {
    let sorted = sorted_alphas(alphas)?;
    let betas = betas_of(&sorted);
    let paper = p0_paper(&sorted)?;
    let (exact, bracket) = p0_exact(&sorted)?;
    let witness = LatticePoint::new(sorted.iter().map(|a| a.floor() as i64).collect());
    Ok(LpThresholdReport {
        alphas: sorted,
        betas,
        p0_paper: paper,
        p0_exact: exact,
        exact_bracket: bracket,
        witness,
    })
}

/// Compares the lattice sets of `K_p` and the box at one exponent.
/// Exponents within the relative margin of the exact threshold are
/// rejected rather than decided.
pub fn verify_lp_hull_stability(alphas: &[f64], p: f64, tau: f64) -> Result<HullStability> {
    verify_lp_hull_stability_with_budget(alphas, p, tau, DEFAULT_BUDGET)
}

pub fn verify_lp_hull_stability_with_budget(
    alphas: &[f64],
    p: f64,
    tau: f64,
    budget: u64,
) -> Result<HullStability> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidInput(format!(
            "hull verification needs p >= 1 (got {p})"
        )));
    }
    let sorted = sorted_alphas(alphas)?;
    let d = sorted.len();
    if d >= 2 && sorted.iter().any(|a| *a >= 1.0 && is_integral(*a)) {
        return Ok(HullStability {
            p,
            verdict: HullVerdict::SkippedIntegralAlpha,
        });
    }
    if sorted.iter().any(|a| *a >= 1.0) {
        let (threshold, _) = p0_exact(&sorted)?;
        if threshold.is_finite()
            && p.is_finite()
            && (p - threshold).abs() <= THRESHOLD_MARGIN_RELATIVE * threshold
        {
            return Err(Error::ThresholdMargin {
                p,
                threshold,
                margin: THRESHOLD_MARGIN_RELATIVE,
            });
        }
    }
    let ball = ConvexBody::lp_ball(p, sorted.clone())?;
    let cube = ConvexBody::box_body(sorted.clone())?;
    let cmp = lattice_set_equal_with_budget(&ball, &cube, tau, budget)?;
    let verdict = if cmp.equal {
        HullVerdict::Equal
    } else {
        // The all-floors point maximizes the membership sum among the box's
        // lattice points, so whenever the sets differ it is itself a
        // difference point; report it rather than an arbitrary one.
        let floors = LatticePoint::new(sorted.iter().map(|a| a.floor() as i64).collect());
        let in_difference = ball.gauge(&floors.as_f64())? > 1.0 + tau;
        HullVerdict::Unequal {
            witness: if in_difference {
                floors
            } else {
                cmp.witness.expect("unequal sets carry a witness")
            },
        }
    };
    Ok(HullStability { p, verdict })
}

/// Runs the full pipeline on both `K_p` and the box and records the
/// monotonicity facts the inclusion `K_p subset K_inf` forces.
pub fn lp_bhw_comparison(alphas: &[f64], p: f64, tau: f64) -> Result<LpBhwComparison> {
    lp_bhw_comparison_with_budget(alphas, p, tau, DEFAULT_BUDGET)
}

pub fn lp_bhw_comparison_with_budget(
    alphas: &[f64],
    p: f64,
    tau: f64,
    budget: u64,
) -> Result<LpBhwComparison> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidInput(format!(
            "the comparison needs p >= 1 (got {p})"
        )));
    }
    let sorted = sorted_alphas(alphas)?;
    let ball = ConvexBody::lp_ball(p, sorted.clone())?;
    let cube = ConvexBody::box_body(sorted)?;
    let report_lp = check_bhw_with_budget(&ball, tau, budget)?;
    let report_box = check_bhw_with_budget(&cube, tau, budget)?;
    let minima_monotone = report_lp
        .lambdas
        .iter()
        .zip(&report_box.lambdas)
        .all(|(lp, linf)| *lp >= *linf - 1e-9);
    let rhs_monotone = report_lp.rhs <= report_box.rhs;
    Ok(LpBhwComparison {
        p,
        report_lp,
        report_box,
        minima_monotone,
        rhs_monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coarse_threshold_examples() {
        let p0 = p0_paper(&[1.5, 1.5]).unwrap();
        assert!((p0 - 2.0f64.ln() / 1.5f64.ln()).abs() < 1e-12);

        let p0 = p0_paper(&[1.5, 2.5]).unwrap();
        assert!((p0 - 2.0f64.ln() / 1.25f64.ln()).abs() < 1e-12);
        assert!((p0 - 3.10628372).abs() < 1e-6);

        assert!(p0_paper(&[2.0, 2.0]).unwrap().is_infinite());
        assert_eq!(p0_paper(&[1.5]).unwrap(), 0.0);
        assert!(p0_paper(&[0.5, 0.5]).is_err());
    }

    #[test]
    fn exact_threshold_matches_coarse_when_betas_agree() {
        let (exact, _) = p0_exact(&[1.5, 1.5]).unwrap();
        let coarse = p0_paper(&[1.5, 1.5]).unwrap();
        assert!((exact - coarse).abs() < 1e-6);
        assert!((exact - 1.7095112913514547).abs() < 1e-6);
    }

    #[test]
    fn exact_threshold_heterogeneous_bracket() {
        // Independent sign check of sum beta_i^p - 1 at the bracket ends.
        let f = |p: f64| (2.0f64 / 3.0).powf(p) + (4.0f64 / 5.0).powf(p) - 1.0;
        assert!(f(2.2) > 0.0 && f(2.3) < 0.0);

        let (exact, (lo, hi)) = p0_exact(&[1.5, 2.5]).unwrap();
        assert!(exact > 2.2 && exact < 2.3, "exact = {exact}");
        assert!(hi - lo <= BRACKET_TOLERANCE);
        assert!(exact < p0_paper(&[1.5, 2.5]).unwrap());
    }

    #[test]
    fn integral_semi_axis_degenerates_both_thresholds() {
        let (exact, _) = p0_exact(&[1.0, 1.5]).unwrap();
        assert!(exact.is_infinite());
        assert!(p0_paper(&[1.0, 1.5]).unwrap().is_infinite());
        // The witness (1, 1) sits outside every finite-p ball, though the
        // excess (2/3)^p dips below float resolution for large p.
        for p in [2.0, 10.0] {
            let ball = ConvexBody::lp_ball(p, vec![1.0, 1.5]).unwrap();
            assert!(ball.gauge(&[1.0, 1.0]).unwrap() > 1.0 + 1e-9);
        }
        let ball = ConvexBody::lp_ball(100.0, vec![1.0, 1.5]).unwrap();
        assert!(ball.gauge(&[1.0, 1.0]).unwrap() >= 1.0);
    }

    #[test]
    fn single_contributing_axis_means_every_exponent_works() {
        // Only one semi-axis reaches 1, so the worst-case sum is a single
        // beta^p < 1 at every exponent: the threshold degenerates to 0.
        let (exact, bracket) = p0_exact(&[2.7, 0.5]).unwrap();
        assert_eq!((exact, bracket), (0.0, (0.0, 0.0)));
        let coarse = p0_paper(&[2.7, 0.5]).unwrap();
        assert!((coarse - 2.0f64.ln() / 1.35f64.ln()).abs() < 1e-12);
        for p in [1.0, 2.0, 50.0] {
            let v = verify_lp_hull_stability(&[2.7, 0.5], p, 1e-9).unwrap();
            assert_eq!(v.verdict, HullVerdict::Equal, "p = {p}");
        }
    }

    #[test]
    fn threshold_report_carries_the_all_floors_witness() {
        let report = lp_threshold_report(&[1.5, 2.5]).unwrap();
        assert_eq!(report.alphas, vec![2.5, 1.5]);
        assert_eq!(report.witness, LatticePoint::new(vec![2, 1]));
        assert!((report.betas[0] - 0.8).abs() < 1e-12);
        assert!((report.betas[1] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn hull_verification_above_and_below_threshold() {
        let r = verify_lp_hull_stability(&[1.5, 1.5], 2.0, 1e-9).unwrap();
        assert_eq!(r.verdict, HullVerdict::Equal);

        let r = verify_lp_hull_stability(&[1.5, 1.5], 1.0, 1e-9).unwrap();
        assert_eq!(
            r.verdict,
            HullVerdict::Unequal {
                witness: LatticePoint::new(vec![1, 1])
            }
        );
    }

    #[test]
    fn tiny_box_is_stable_for_every_p() {
        for p in [1.0, 2.0, 7.5] {
            let r = verify_lp_hull_stability(&[0.5, 0.5], p, 1e-9).unwrap();
            assert_eq!(r.verdict, HullVerdict::Equal);
        }
    }

    #[test]
    fn margin_window_is_rejected() {
        let (threshold, _) = p0_exact(&[1.5, 1.5]).unwrap();
        assert!(matches!(
            verify_lp_hull_stability(&[1.5, 1.5], threshold, 1e-9),
            Err(Error::ThresholdMargin { .. })
        ));
    }

    #[test]
    fn integral_alpha_verification_is_skipped() {
        let r = verify_lp_hull_stability(&[1.0, 1.0], 2.0, 1e-9).unwrap();
        assert_eq!(r.verdict, HullVerdict::SkippedIntegralAlpha);
    }

    #[test]
    fn comparison_examples() {
        let c = lp_bhw_comparison(&[1.5, 1.5], 4.0, 1e-9).unwrap();
        assert!(c.minima_monotone && c.rhs_monotone);
        assert!(c.report_lp.holds && c.report_box.holds);

        let c = lp_bhw_comparison(&[1.0, 1.0], 2.0, 1e-9).unwrap();
        assert_eq!(c.report_lp.count, 5);
        assert_eq!(c.report_box.count, 9);
        assert!(c.report_lp.holds && c.report_box.holds);

        let c = lp_bhw_comparison(&[1.7, 0.9], f64::INFINITY, 1e-9).unwrap();
        assert_eq!(c.report_lp, c.report_box);
    }
}
