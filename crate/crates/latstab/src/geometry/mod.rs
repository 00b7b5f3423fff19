//! Gauge-function representation of o-symmetric convex bodies.
//!
//! A body is a box, an L_p ball, or a non-singular linear image of one of
//! those. Membership, enumeration, and successive minima all reduce to
//! evaluating the gauge `||x||_K = inf { r > 0 : x in rK }`.

pub mod matrix;
pub mod rotation;

pub use matrix::{operator_norm, rotation_2d, SquareMatrix, SINGULAR_DET_TOL};
pub use rotation::{cayley_rotation, random_skew, sample_rotation};

use crate::error::{Error, Result};

/// Default classification tolerance around the unit gauge level set.
pub const DEFAULT_TAU: f64 = 1e-9;

/// Maximum ambient dimension the brute-force machinery is designed for.
/// Only used to size stack scratch buffers; enumeration budgets are the
/// real guard.
pub(crate) const MAX_DIM: usize = 16;

/// Axis-aligned box `{ |x_i| <= alpha_i }`. Semi-axes are stored in
/// descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxBody {
    alphas: Vec<f64>,
}

impl BoxBody {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        let alphas = validate_alphas(alphas)?;
        Ok(Self { alphas })
    }

    /// Semi-axes, descending.
    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn dim(&self) -> usize {
        self.alphas.len()
    }
}

/// L_p ball `{ sum |x_i/alpha_i|^p <= 1 }` with `p` in [1, inf]. `p = inf`
/// evaluates the max-form directly and coincides with [`BoxBody`].
#[derive(Debug, Clone, PartialEq)]
pub struct LpBallBody {
    p: f64,
    alphas: Vec<f64>,
}

impl LpBallBody {
    pub fn new(p: f64, alphas: Vec<f64>) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidInput(format!(
                "L_p exponent must satisfy p >= 1 (got {p}); p < 1 is not convex"
            )));
        }
        let alphas = validate_alphas(alphas)?;
        Ok(Self { p, alphas })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn dim(&self) -> usize {
        self.alphas.len()
    }
}

/// Non-singular linear image `T K` of an inner body. The inverse transform
/// is cached at construction because the gauge is the hot path of
/// enumeration. Nested images are flattened, so `inner` is never itself
/// transformed.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedBody {
    transform: SquareMatrix,
    inverse: SquareMatrix,
    inner: Box<ConvexBody>,
}

impl TransformedBody {
    pub fn new(transform: SquareMatrix, inner: ConvexBody) -> Result<Self> {
        if transform.dim() != inner.dim() {
            return Err(Error::DimensionMismatch {
                expected: inner.dim(),
                got: transform.dim(),
            });
        }
        let (transform, inner) = match inner {
            ConvexBody::Transformed(tb) => (transform.mul(&tb.transform), *tb.inner),
            other => (transform, other),
        };
        let inverse = transform.inverse()?;
        Ok(Self {
            transform,
            inverse,
            inner: Box::new(inner),
        })
    }

    pub fn transform(&self) -> &SquareMatrix {
        &self.transform
    }

    pub fn inner(&self) -> &ConvexBody {
        &self.inner
    }

    pub fn dim(&self) -> usize {
        self.transform.dim()
    }
}

/// Classification of a point against the unit gauge level set at
/// tolerance `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipClass {
    Inside,
    BoundaryAmbiguous,
    Outside,
}

/// An o-symmetric convex body in gauge representation.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexBody {
    Box(BoxBody),
    Lp(LpBallBody),
    Transformed(TransformedBody),
}

impl From<BoxBody> for ConvexBody {
    fn from(b: BoxBody) -> Self {
        ConvexBody::Box(b)
    }
}

impl From<LpBallBody> for ConvexBody {
    fn from(b: LpBallBody) -> Self {
        ConvexBody::Lp(b)
    }
}

impl From<TransformedBody> for ConvexBody {
    fn from(b: TransformedBody) -> Self {
        ConvexBody::Transformed(b)
    }
}

impl ConvexBody {
    pub fn box_body(alphas: Vec<f64>) -> Result<Self> {
        Ok(BoxBody::new(alphas)?.into())
    }

    pub fn lp_ball(p: f64, alphas: Vec<f64>) -> Result<Self> {
        Ok(LpBallBody::new(p, alphas)?.into())
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Box(b) => b.dim(),
            ConvexBody::Lp(b) => b.dim(),
            ConvexBody::Transformed(b) => b.dim(),
        }
    }

    /// Gauge function `||x||_K`. Homogeneous of degree 1, zero only at the
    /// origin.
    pub fn gauge(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "gauge argument",
            });
        }
        Ok(self.gauge_unchecked(x))
    }

    /// Gauge without argument validation; callers guarantee matching
    /// dimension and finite coordinates.
    pub(crate) fn gauge_unchecked(&self, x: &[f64]) -> f64 {
        match self {
            ConvexBody::Box(b) => max_form(x, &b.alphas),
            ConvexBody::Lp(b) => {
                if b.p.is_infinite() {
                    max_form(x, &b.alphas)
                } else if b.p == 1.0 {
                    x.iter()
                        .zip(&b.alphas)
                        .map(|(v, a)| (v / a).abs())
                        .sum::<f64>()
                } else if b.p == 2.0 {
                    x.iter()
                        .zip(&b.alphas)
                        .map(|(v, a)| {
                            let r = v / a;
                            r * r
                        })
                        .sum::<f64>()
                        .sqrt()
                } else {
                    let sum: f64 = x
                        .iter()
                        .zip(&b.alphas)
                        .map(|(v, a)| (v / a).abs().powf(b.p))
                        .sum();
                    sum.powf(1.0 / b.p)
                }
            }
            ConvexBody::Transformed(t) => {
                let d = t.dim();
                debug_assert!(d <= MAX_DIM);
                let mut buf = [0.0f64; MAX_DIM];
                t.inverse.matvec_into(x, &mut buf[..d]);
                t.inner.gauge_unchecked(&buf[..d])
            }
        }
    }

    /// Classifies `x` against the unit level set: gauge < 1 - tau is
    /// `Inside`, gauge > 1 + tau is `Outside`, anything else is
    /// `BoundaryAmbiguous`.
    pub fn classify_membership(&self, x: &[f64], tau: f64) -> Result<MembershipClass> {
        validate_tau(tau)?;
        let g = self.gauge(x)?;
        Ok(classify_gauge(g, tau))
    }

    /// Per-axis half-widths `h_i >= sup { |x_i| : x in K }`, from the exact
    /// support function evaluated at the coordinate directions.
    pub fn support_bounding_box(&self) -> Vec<f64> {
        let d = self.dim();
        let mut h = Vec::with_capacity(d);
        let mut e = vec![0.0; d];
        for i in 0..d {
            e[i] = 1.0;
            h.push(self.support(&e));
            e[i] = 0.0;
        }
        h
    }

    /// Support function `h_K(v) = sup { <x, v> : x in K }` (exact for every
    /// representable body via the Hoelder-dual norm).
    pub(crate) fn support(&self, v: &[f64]) -> f64 {
        match self {
            ConvexBody::Box(b) => v.iter().zip(&b.alphas).map(|(vi, a)| (vi * a).abs()).sum(),
            ConvexBody::Lp(b) => {
                if b.p.is_infinite() {
                    v.iter().zip(&b.alphas).map(|(vi, a)| (vi * a).abs()).sum()
                } else if b.p == 1.0 {
                    v.iter()
                        .zip(&b.alphas)
                        .map(|(vi, a)| (vi * a).abs())
                        .fold(0.0, f64::max)
                } else {
                    let q = b.p / (b.p - 1.0);
                    let sum: f64 = v
                        .iter()
                        .zip(&b.alphas)
                        .map(|(vi, a)| (vi * a).abs().powf(q))
                        .sum();
                    sum.powf(1.0 / q)
                }
            }
            ConvexBody::Transformed(t) => t.inner.support(&t.transform.transpose().matvec(v)),
        }
    }

    /// Upper bound on the Euclidean circumradius `sup { ||x||_2 : x in K }`,
    /// from the bounding box. Used as an enumeration certificate via
    /// `gauge(z) >= ||z||_2 / circumradius`.
    pub fn circumradius_bound(&self) -> f64 {
        self.support_bounding_box()
            .iter()
            .map(|h| h * h)
            .sum::<f64>()
            .sqrt()
    }
}

pub(crate) fn classify_gauge(g: f64, tau: f64) -> MembershipClass {
    if g < 1.0 - tau {
        MembershipClass::Inside
    } else if g > 1.0 + tau {
        MembershipClass::Outside
    } else {
        MembershipClass::BoundaryAmbiguous
    }
}

pub(crate) fn validate_tau(tau: f64) -> Result<()> {
    if !tau.is_finite() || tau <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "tolerance tau must be a positive real (got {tau})"
        )));
    }
    Ok(())
}

fn max_form(x: &[f64], alphas: &[f64]) -> f64 {
    x.iter()
        .zip(alphas)
        .map(|(v, a)| (v / a).abs())
        .fold(0.0, f64::max)
}

fn validate_alphas(mut alphas: Vec<f64>) -> Result<Vec<f64>> {
    if alphas.is_empty() {
        return Err(Error::InvalidInput("a body needs dimension >= 1".into()));
    }
    if alphas.len() > MAX_DIM {
        return Err(Error::InvalidInput(format!(
            "dimension {} beyond brute-force scale (max {MAX_DIM})",
            alphas.len()
        )));
    }
    if alphas.iter().any(|a| !a.is_finite() || *a <= 0.0) {
        return Err(Error::InvalidInput(format!(
            "semi-axes must be positive finite reals (got {alphas:?})"
        )));
    }
    // The descending convention is fixed at construction; the original
    // order is not retained.
    alphas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(alphas)
}

/// Linear image `T K` as a body: `gauge(TK, x) = gauge(K, T^{-1} x)`.
/// Transforming an already-transformed body multiplies the matrices.
pub fn transform_body(t: &SquareMatrix, body: &ConvexBody) -> Result<ConvexBody> {
    Ok(TransformedBody::new(t.clone(), body.clone())?.into())
}

/// Normalizes a body living against the lattice `A Z^d` to the standard
/// lattice: counts and minima of the result against `Z^d` equal those of
/// the original against `A Z^d`.
pub fn reduce_to_standard_lattice(body: &ConvexBody, basis: &SquareMatrix) -> Result<ConvexBody> {
    transform_body(&basis.inverse()?, body)
}
