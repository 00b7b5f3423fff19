//! Exact lattice point counting and listing over Z^d.
//!
//! Everything is a brute-force scan of an integer bounding box with a hard
//! candidate budget: instances beyond desk scale fail loudly instead of
//! truncating. Boundary-ambiguous points count as members (the bodies are
//! closed) and are tallied separately so callers can demand that none
//! occurred.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{classify_gauge, validate_tau, BoxBody, ConvexBody, MembershipClass};

/// Default cap on scanned integer candidates per operation.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// A point of Z^d. Ordering is lexicographic on the coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint {
    pub coords: Vec<i64>,
}

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|&c| c as f64).collect()
    }
}

/// Result of a counting pass: `count` includes boundary-ambiguous points,
/// `ambiguous` tallies them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub count: u64,
    pub ambiguous: u64,
    pub tau: f64,
}

/// Outcome of comparing two bodies' lattice sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetComparison {
    pub equal: bool,
    /// Canonical witness in the symmetric difference when `equal` is false:
    /// smallest absolute-coordinate vector, preferring nonnegative signs.
    pub witness: Option<LatticePoint>,
}

/// Half-width bounds of the integer scan box, inflated by the membership
/// tolerance so every point with gauge <= 1 + tau is covered.
fn scan_bounds(body: &ConvexBody, tau: f64) -> Vec<i64> {
    body.support_bounding_box()
        .iter()
        .map(|h| ((1.0 + tau) * h + 1e-9).floor() as i64)
        .collect()
}

fn candidate_total(bounds: &[i64]) -> u128 {
    bounds
        .iter()
        .fold(1u128, |acc, b| acc * (2 * *b as u128 + 1))
}

fn check_budget(bounds: &[i64], budget: u64) -> Result<()> {
    let candidates = candidate_total(bounds);
    if candidates > budget as u128 {
        return Err(Error::BudgetExceeded { candidates, budget });
    }
    Ok(())
}

/// Visits every integer point of the box `first_range x prod [-b_i, b_i]`
/// in lexicographic order.
fn scan_slab<F: FnMut(&[i64], &[f64])>(
    bounds: &[i64],
    first_range: std::ops::RangeInclusive<i64>,
    f: &mut F,
) {
    let d = bounds.len();
    let mut coords = vec![0i64; d];
    let mut floats = vec![0.0f64; d];

    fn rec<F: FnMut(&[i64], &[f64])>(
        axis: usize,
        bounds: &[i64],
        coords: &mut [i64],
        floats: &mut [f64],
        f: &mut F,
    ) {
        if axis == bounds.len() {
            f(coords, floats);
            return;
        }
        let b = bounds[axis];
        for v in -b..=b {
            coords[axis] = v;
            floats[axis] = v as f64;
            rec(axis + 1, bounds, coords, floats, f);
        }
    }

    for v in first_range {
        coords[0] = v;
        floats[0] = v as f64;
        rec(1, bounds, &mut coords, &mut floats, f);
    }
}

/// Splits the first-axis range into at most `shards` contiguous slabs.
fn slab_ranges(first_bound: i64, shards: usize) -> Vec<std::ops::RangeInclusive<i64>> {
    let len = 2 * first_bound + 1;
    let shards = shards.max(1).min(len as usize) as i64;
    let base = len / shards;
    let extra = len % shards;
    let mut ranges = Vec::with_capacity(shards as usize);
    let mut lo = -first_bound;
    for k in 0..shards {
        let size = base + if k < extra { 1 } else { 0 };
        let hi = lo + size - 1;
        ranges.push(lo..=hi);
        lo = hi + 1;
    }
    ranges
}

fn count_slab(
    body: &ConvexBody,
    tau: f64,
    bounds: &[i64],
    range: std::ops::RangeInclusive<i64>,
) -> (u64, u64) {
    let mut members = 0u64;
    let mut ambiguous = 0u64;
    scan_slab(
        bounds,
        range,
        &mut |_, xf| match classify_gauge(body.gauge_unchecked(xf), tau) {
            MembershipClass::Inside => members += 1,
            MembershipClass::BoundaryAmbiguous => {
                members += 1;
                ambiguous += 1;
            }
            MembershipClass::Outside => {}
        },
    );
    (members, ambiguous)
}

fn list_slab(
    body: &ConvexBody,
    tau: f64,
    bounds: &[i64],
    range: std::ops::RangeInclusive<i64>,
) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    scan_slab(bounds, range, &mut |z, xf| {
        if classify_gauge(body.gauge_unchecked(xf), tau) != MembershipClass::Outside {
            out.push(LatticePoint::new(z.to_vec()));
        }
    });
    out
}

/// Counts `|K cap Z^d|` by scanning the bounding box. Deterministic and
/// independent of sharding: slab tallies merge by addition.
pub fn count_lattice_points(body: &ConvexBody, tau: f64) -> Result<CountReport> {
    count_lattice_points_opts(body, tau, DEFAULT_BUDGET, 1)
}

pub fn count_lattice_points_opts(
    body: &ConvexBody,
    tau: f64,
    budget: u64,
    shards: usize,
) -> Result<CountReport> {
    validate_tau(tau)?;
    let bounds = scan_bounds(body, tau);
    check_budget(&bounds, budget)?;
    let ranges = slab_ranges(bounds[0], shards);
    let tallies: Vec<(u64, u64)> = if ranges.len() > 1 {
        ranges
            .into_par_iter()
            .map(|r| count_slab(body, tau, &bounds, r))
            .collect()
    } else {
        ranges
            .into_iter()
            .map(|r| count_slab(body, tau, &bounds, r))
            .collect()
    };
    let (count, ambiguous) = tallies
        .into_iter()
        .fold((0, 0), |(c, a), (dc, da)| (c + dc, a + da));
    Ok(CountReport {
        count,
        ambiguous,
        tau,
    })
}

/// Lists `K cap Z^d` in lexicographic order; agrees exactly with
/// [`count_lattice_points`].
pub fn list_lattice_points(body: &ConvexBody, tau: f64) -> Result<Vec<LatticePoint>> {
    list_lattice_points_opts(body, tau, DEFAULT_BUDGET, 1)
}

pub fn list_lattice_points_opts(
    body: &ConvexBody,
    tau: f64,
    budget: u64,
    shards: usize,
) -> Result<Vec<LatticePoint>> {
    validate_tau(tau)?;
    let bounds = scan_bounds(body, tau);
    check_budget(&bounds, budget)?;
    let ranges = slab_ranges(bounds[0], shards);
    let slabs: Vec<Vec<LatticePoint>> = if ranges.len() > 1 {
        ranges
            .into_par_iter()
            .map(|r| list_slab(body, tau, &bounds, r))
            .collect()
    } else {
        ranges
            .into_iter()
            .map(|r| list_slab(body, tau, &bounds, r))
            .collect()
    };
    Ok(slabs.into_iter().flatten().collect())
}

/// Counting pass with the scan box enlarged by `extra` on every axis; used
/// by tests to confirm the default bounds never under-cover.
#[doc(hidden)]
pub fn count_with_extra_margin(
    body: &ConvexBody,
    tau: f64,
    budget: u64,
    extra: i64,
) -> Result<CountReport> {
    validate_tau(tau)?;
    let bounds: Vec<i64> = scan_bounds(body, tau).iter().map(|b| b + extra).collect();
    check_budget(&bounds, budget)?;
    let (count, ambiguous) = count_slab(body, tau, &bounds, -bounds[0]..=bounds[0]);
    Ok(CountReport {
        count,
        ambiguous,
        tau,
    })
}

/// Closed form for the boundary gap of a box: `min_i(floor(alpha_i) + 1 - alpha_i)`.
pub fn boundary_gap_closed_form(bx: &BoxBody) -> f64 {
    bx.alphas()
        .iter()
        .map(|a| a.floor() + 1.0 - a)
        .fold(f64::INFINITY, f64::min)
}

/// Euclidean distance from the box to the nearest external lattice point,
/// by brute force over the bounding box enlarged by 2 on every axis. The
/// result is asserted to agree with the closed form within 1e-12.
pub fn boundary_gap_box(bx: &BoxBody) -> Result<f64> {
    boundary_gap_box_with_budget(bx, DEFAULT_BUDGET)
}

pub fn boundary_gap_box_with_budget(bx: &BoxBody, budget: u64) -> Result<f64> {
    let alphas = bx.alphas();
    let floors: Vec<i64> = alphas.iter().map(|a| a.floor() as i64).collect();
    let bounds: Vec<i64> = floors.iter().map(|f| f + 2).collect();
    check_budget(&bounds, budget)?;
    let mut best = f64::INFINITY;
    scan_slab(&bounds, -bounds[0]..=bounds[0], &mut |z, _| {
        // Integer membership in the closed box is exact: |z_i| <= floor(alpha_i).
        if z.iter().zip(&floors).all(|(zi, fi)| zi.abs() <= *fi) {
            return;
        }
        let dist2: f64 = z
            .iter()
            .zip(alphas)
            .map(|(zi, a)| {
                let excess = (zi.abs() as f64 - a).max(0.0);
                excess * excess
            })
            .sum();
        if dist2 < best {
            best = dist2;
        }
    });
    let brute = best.sqrt();
    let closed = boundary_gap_closed_form(bx);
    assert!(
        (brute - closed).abs() <= 1e-12,
        "boundary gap mismatch: brute force {brute} vs closed form {closed}"
    );
    Ok(brute)
}

/// Canonical comparison key for witness points: smallest absolute-coordinate
/// vector first, then the most-positive sign pattern.
fn witness_key_cmp(a: &LatticePoint, b: &LatticePoint) -> std::cmp::Ordering {
    let abs_a: Vec<i64> = a.coords.iter().map(|c| c.abs()).collect();
    let abs_b: Vec<i64> = b.coords.iter().map(|c| c.abs()).collect();
    abs_a.cmp(&abs_b).then_with(|| b.coords.cmp(&a.coords))
}

/// Tests whether two bodies contain exactly the same lattice points. On
/// inequality the canonical witness from the symmetric difference is
/// returned. A boundary-ambiguous point in the symmetric difference is an
/// error rather than a verdict.
pub fn lattice_set_equal(a: &ConvexBody, b: &ConvexBody, tau: f64) -> Result<SetComparison> {
    lattice_set_equal_with_budget(a, b, tau, DEFAULT_BUDGET)
}

pub fn lattice_set_equal_with_budget(
    a: &ConvexBody,
    b: &ConvexBody,
    tau: f64,
    budget: u64,
) -> Result<SetComparison> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let list_a = list_lattice_points_opts(a, tau, budget, 1)?;
    let list_b = list_lattice_points_opts(b, tau, budget, 1)?;
    let set_a: std::collections::BTreeSet<_> = list_a.iter().cloned().collect();
    let set_b: std::collections::BTreeSet<_> = list_b.iter().cloned().collect();
    let mut diff: Vec<(LatticePoint, &ConvexBody)> = Vec::new();
    for p in set_a.difference(&set_b) {
        diff.push((p.clone(), a));
    }
    for p in set_b.difference(&set_a) {
        diff.push((p.clone(), b));
    }
    // A symmetric-difference point is a member of exactly one body; if its
    // membership there is only boundary-ambiguous, refuse a verdict.
    for (p, owner) in &diff {
        if owner.classify_membership(&p.as_f64(), tau)? == MembershipClass::BoundaryAmbiguous {
            return Err(Error::AmbiguousBoundary {
                point: p.coords.clone(),
                tau,
            });
        }
    }
    if diff.is_empty() {
        return Ok(SetComparison {
            equal: true,
            witness: None,
        });
    }
    let witness = diff
        .into_iter()
        .map(|(p, _)| p)
        .min_by(witness_key_cmp)
        .expect("nonempty difference");
    Ok(SetComparison {
        equal: false,
        witness: Some(witness),
    })
}

/// Visits every integer point with Euclidean norm <= `radius` whose
/// coordinates also satisfy `|z_i| <= caps[i]` (origin included), pruning
/// axis ranges by the remaining radius.
pub(crate) fn for_each_ball_point<F: FnMut(&[i64], &[f64])>(
    dim: usize,
    radius: f64,
    caps: &[i64],
    f: &mut F,
) {
    fn axis_bound(rem2: f64) -> i64 {
        if rem2 < 0.0 {
            return -1;
        }
        let mut b = rem2.sqrt().floor() as i64;
        // Correct sqrt rounding against the exact integer condition b^2 <= rem2.
        while ((b + 1) * (b + 1)) as f64 <= rem2 {
            b += 1;
        }
        while b >= 0 && (b * b) as f64 > rem2 {
            b -= 1;
        }
        b
    }

    fn rec<F: FnMut(&[i64], &[f64])>(
        axis: usize,
        dim: usize,
        rem2: f64,
        caps: &[i64],
        coords: &mut [i64],
        floats: &mut [f64],
        f: &mut F,
    ) {
        if axis == dim {
            f(coords, floats);
            return;
        }
        let b = axis_bound(rem2).min(caps[axis]);
        for v in -b..=b {
            coords[axis] = v;
            floats[axis] = v as f64;
            rec(
                axis + 1,
                dim,
                rem2 - (v * v) as f64,
                caps,
                coords,
                floats,
                f,
            );
        }
    }

    debug_assert_eq!(caps.len(), dim);
    let mut coords = vec![0i64; dim];
    let mut floats = vec![0.0f64; dim];
    rec(0, dim, radius * radius, caps, &mut coords, &mut floats, f);
}

/// Budget check for a capped ball scan.
pub(crate) fn check_ball_budget(dim: usize, radius: f64, caps: &[i64], budget: u64) -> Result<()> {
    let b = radius.floor().max(0.0) as i64;
    let bounds: Vec<i64> = (0..dim).map(|i| b.min(caps[i]).max(0)).collect();
    check_budget(&bounds, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rotation_2d;
    use crate::geometry::transform_body;

    fn boxy(alphas: &[f64]) -> ConvexBody {
        ConvexBody::box_body(alphas.to_vec()).unwrap()
    }

    fn pt(coords: &[i64]) -> LatticePoint {
        LatticePoint::new(coords.to_vec())
    }

    #[test]
    fn count_box_factorizes() {
        let r = count_lattice_points(&boxy(&[1.5, 0.5]), 1e-9).unwrap();
        assert_eq!(r.count, 3);
        assert_eq!(r.ambiguous, 0);
        let r = count_lattice_points(&boxy(&[2.0, 2.0]), 1e-9).unwrap();
        assert_eq!(r.count, 25);
    }

    #[test]
    fn count_euclidean_unit_ball() {
        let ball = ConvexBody::lp_ball(2.0, vec![1.0, 1.0]).unwrap();
        let r = count_lattice_points(&ball, 1e-9).unwrap();
        assert_eq!(r.count, 5);
        // The four unit vectors sit exactly on the boundary.
        assert_eq!(r.ambiguous, 4);
    }

    #[test]
    fn list_matches_expected_sets() {
        assert_eq!(
            list_lattice_points(&boxy(&[0.5, 0.5]), 1e-9).unwrap(),
            vec![pt(&[0, 0])]
        );
        assert_eq!(
            list_lattice_points(&boxy(&[1.0, 0.5]), 1e-9).unwrap(),
            vec![pt(&[-1, 0]), pt(&[0, 0]), pt(&[1, 0])]
        );
        let l1 = ConvexBody::lp_ball(1.0, vec![1.0, 1.0]).unwrap();
        assert_eq!(
            list_lattice_points(&l1, 1e-9).unwrap(),
            vec![
                pt(&[-1, 0]),
                pt(&[0, -1]),
                pt(&[0, 0]),
                pt(&[0, 1]),
                pt(&[1, 0])
            ]
        );
    }

    #[test]
    fn listing_and_counting_agree() {
        for alphas in [vec![1.5, 0.5], vec![2.0, 2.0], vec![2.5, 1.3, 0.7]] {
            let b = boxy(&alphas);
            let n = count_lattice_points(&b, 1e-9).unwrap().count;
            let l = list_lattice_points(&b, 1e-9).unwrap();
            assert_eq!(n as usize, l.len());
            let mut sorted = l.clone();
            sorted.sort();
            assert_eq!(l, sorted, "listing must be lexicographically sorted");
        }
    }

    #[test]
    fn members_come_in_symmetric_pairs() {
        let body = transform_body(&rotation_2d(0.37), &boxy(&[2.3, 1.1])).unwrap();
        let list = list_lattice_points(&body, 1e-9).unwrap();
        let set: std::collections::BTreeSet<_> = list.iter().cloned().collect();
        for p in &list {
            let neg = LatticePoint::new(p.coords.iter().map(|c| -c).collect());
            assert!(set.contains(&neg), "missing mirror of {p:?}");
        }
    }

    #[test]
    fn sharded_count_matches_serial() {
        let body = transform_body(&rotation_2d(0.2), &boxy(&[3.3, 2.1])).unwrap();
        let serial = count_lattice_points_opts(&body, 1e-9, DEFAULT_BUDGET, 1).unwrap();
        for shards in [2, 3, 8, 64] {
            let sharded = count_lattice_points_opts(&body, 1e-9, DEFAULT_BUDGET, shards).unwrap();
            assert_eq!(serial, sharded);
        }
        let list_serial = list_lattice_points_opts(&body, 1e-9, DEFAULT_BUDGET, 1).unwrap();
        let list_sharded = list_lattice_points_opts(&body, 1e-9, DEFAULT_BUDGET, 5).unwrap();
        assert_eq!(list_serial, list_sharded);
    }

    #[test]
    fn budget_is_enforced() {
        let b = boxy(&[50.0, 50.0, 50.0]);
        assert!(matches!(
            count_lattice_points_opts(&b, 1e-9, 1000, 1),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn scan_bounds_never_under_cover() {
        let bodies = vec![
            boxy(&[2.7, 1.2]),
            ConvexBody::lp_ball(1.5, vec![2.2, 1.9]).unwrap(),
            transform_body(&rotation_2d(0.61), &boxy(&[2.0, 1.0])).unwrap(),
        ];
        for body in &bodies {
            let normal = count_lattice_points(body, 1e-9).unwrap();
            let wide = count_with_extra_margin(body, 1e-9, DEFAULT_BUDGET, 3).unwrap();
            assert_eq!(normal, wide, "enlarged scan found extra members");
        }
    }

    #[test]
    fn reduction_by_a_scaled_lattice_matches_direct_counting() {
        // Counting box(2, 2) against the lattice 2 Z^2 via reduction: the
        // reduced body behaves like the unit box, 9 points.
        let body = boxy(&[2.0, 2.0]);
        let basis = crate::geometry::SquareMatrix::identity(2).scale(2.0);
        let reduced = crate::geometry::reduce_to_standard_lattice(&body, &basis).unwrap();
        let r = count_lattice_points(&reduced, 1e-9).unwrap();
        assert_eq!(r.count, 9);
    }

    #[test]
    fn boundary_gap_examples() {
        let gap = |a: &[f64]| boundary_gap_box(&BoxBody::new(a.to_vec()).unwrap()).unwrap();
        assert!((gap(&[1.5, 0.5]) - 0.5).abs() < 1e-12);
        assert!((gap(&[1.0, 1.0]) - 1.0).abs() < 1e-12);
        assert!((gap(&[2.25, 1.75]) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn set_equality_identity() {
        let a = boxy(&[1.0, 1.0]);
        let cmp = lattice_set_equal(&a, &a, 1e-9).unwrap();
        assert!(cmp.equal);
        assert!(cmp.witness.is_none());
    }

    #[test]
    fn set_inequality_witness_is_canonical() {
        let ball = ConvexBody::lp_ball(2.0, vec![1.2, 1.2]).unwrap();
        let square = boxy(&[1.2, 1.2]);
        let cmp = lattice_set_equal(&ball, &square, 1e-9).unwrap();
        assert!(!cmp.equal);
        // The symmetric difference is the four corners; the canonical
        // witness is the nonnegative one.
        assert_eq!(cmp.witness, Some(pt(&[1, 1])));
    }

    #[test]
    fn exact_boundary_members_in_the_difference_refuse_a_verdict() {
        // The corners of the unit box sit exactly on its boundary, so their
        // membership is only decided through the ambiguity window; a
        // comparison that hinges on them is refused.
        let ball = ConvexBody::lp_ball(2.0, vec![1.0, 1.0]).unwrap();
        let square = boxy(&[1.0, 1.0]);
        assert!(matches!(
            lattice_set_equal(&ball, &square, 1e-9),
            Err(Error::AmbiguousBoundary { .. })
        ));
    }

    #[test]
    fn l4_ball_retains_the_square_lattice_set() {
        let ball = ConvexBody::lp_ball(4.0, vec![1.5, 1.5]).unwrap();
        let square = boxy(&[1.5, 1.5]);
        let cmp = lattice_set_equal(&ball, &square, 1e-9).unwrap();
        assert!(cmp.equal);
    }

    #[test]
    fn ambiguous_symmetric_difference_is_an_error() {
        // Box alpha = 1 + tau/2 vs alpha = 0.5: the points (+-1, 0), ... are
        // members of the first body only through the ambiguity window.
        let tau = 1e-9;
        let a = boxy(&[1.0 + 4e-10, 1.0 + 4e-10]);
        let b = boxy(&[0.5, 0.5]);
        assert!(matches!(
            lattice_set_equal(&a, &b, tau),
            Err(Error::AmbiguousBoundary { .. })
        ));
    }

    #[test]
    fn ball_scan_matches_box_scan_filter() {
        let mut from_ball = Vec::new();
        for_each_ball_point(3, 2.5, &[5, 5, 5], &mut |z, _| from_ball.push(z.to_vec()));
        from_ball.sort();
        let mut from_box = Vec::new();
        scan_slab(&[2, 2, 2], -2..=2, &mut |z, _| {
            let n2: i64 = z.iter().map(|c| c * c).sum();
            if (n2 as f64) <= 2.5 * 2.5 {
                from_box.push(z.to_vec());
            }
        });
        from_box.sort();
        assert_eq!(from_ball, from_box);
    }

    #[test]
    fn ball_scan_respects_axis_caps() {
        let mut points = Vec::new();
        for_each_ball_point(2, 3.0, &[1, 3], &mut |z, _| points.push(z.to_vec()));
        assert!(points.iter().all(|z| z[0].abs() <= 1));
        assert!(points.iter().any(|z| z[1].abs() == 3));
    }
}
