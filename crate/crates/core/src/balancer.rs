//! Sign assignment along the boundary of `P = conv{±V}`.
//!
//! Every input vector is first flipped into the upper half-plane, then the
//! flipped vectors are sorted by direction. Read in that order, `v_1, …, v_n`
//! followed by `−v_1, …, −v_n` walk once around the boundary of `P`. For odd
//! `n`, the alternating sum `v_1 − v_2 + v_3 − ⋯ + v_n` has norm at most one,
//! and so does every odd prefix of it; every prefix is at most two.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{cross_sign, prefix_sums, Sign, Vec2};
use crate::norms::{hull_of_plus_minus, in_upper_half, polygon_norm, Norm};
use crate::tolerance::Tolerances;

/// Input vectors after canonical flipping, sorted along the boundary of `P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryOrdering {
    /// `perm[j]` is the input index of the `j`-th vector in boundary order.
    pub perm: Vec<usize>,
    /// Per input index: the sign that moved the input into the upper half-plane.
    pub flips: Vec<Sign>,
    /// `ordered[j] = flips[perm[j]] · V[perm[j]]`.
    pub ordered: Vec<Vec2>,
}

impl BoundaryOrdering {
    pub fn len(&self) -> usize {
        self.ordered.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordered.is_empty()
    }
}

/// Replaces `v` by `−v` when needed so that `y > 0`, or `y = 0` and `x > 0`.
pub fn canonical_flip(v: Vec2) -> Result<(Vec2, Sign)> {
    if v.is_zero() {
        return Err(Error::ZeroVector { index: 0 });
    }
    if in_upper_half(v) {
        Ok((v, Sign::Plus))
    } else {
        Ok((-v, Sign::Minus))
    }
}

/// Sorts the flipped vectors by direction angle in `[0, π)`.
///
/// Directions are compared with the exact sign of their cross product; equal
/// directions keep ascending input order.
pub fn boundary_order(vectors: &[Vec2]) -> Result<BoundaryOrdering> {
    let mut flipped = Vec::with_capacity(vectors.len());
    let mut flips = Vec::with_capacity(vectors.len());
    for (index, &v) in vectors.iter().enumerate() {
        let (f, s) = canonical_flip(v).map_err(|_| Error::ZeroVector { index })?;
        flipped.push(f);
        flips.push(s);
    }
    let mut perm: Vec<usize> = (0..vectors.len()).collect();
    perm.sort_by(|&a, &b| {
        let c = cross_sign(flipped[a], flipped[b]);
        if c > 0.0 {
            Ordering::Less
        } else if c < 0.0 {
            Ordering::Greater
        } else {
            a.cmp(&b)
        }
    });
    let ordered = perm.iter().map(|&i| flipped[i]).collect();
    Ok(BoundaryOrdering {
        perm,
        flips,
        ordered,
    })
}

/// Edges of `P` read from the ordering: `a_i = v_{i+1} − v_i` and the
/// closing edge `a_n = −v_1 − v_n`.
pub fn edge_vectors(ordering: &BoundaryOrdering) -> Vec<Vec2> {
    let v = &ordering.ordered;
    let n = v.len();
    if n == 0 {
        return Vec::new();
    }
    let mut a: Vec<Vec2> = v.windows(2).map(|w| w[1] - w[0]).collect();
    a.push(-v[0] - v[n - 1]);
    a
}

/// The pair `(u*, w*)` with `u* = 2(v_1 − v_2 + ⋯ + v_n)` and
/// `w* = a_1 − a_2 + a_3 − ⋯ + a_n`. For odd `n` they satisfy `w* = −u*`.
pub fn alternating_pair(ordering: &BoundaryOrdering) -> (Vec2, Vec2) {
    let alternate = |items: &[Vec2]| {
        items
            .iter()
            .enumerate()
            .fold(Vec2::ZERO, |acc, (i, &x)| acc + alternating_sign(i).apply(x))
    };
    let u = alternate(&ordering.ordered) * 2.0;
    let w = alternate(&edge_vectors(ordering));
    (u, w)
}

/// Points `v_1 + a_2 + a_4 + ⋯ + a_{2k}` for `k = 0, …, ⌊(n−1)/2⌋`.
///
/// Each is a sum of `v_1` and a sub-collection of the generating edges of the
/// zonotope `P − v_1`, so each lies in `P`. Point `k` equals the alternating
/// prefix of length `2k + 1`.
pub fn odd_prefix_points(ordering: &BoundaryOrdering) -> Vec<Vec2> {
    let v = &ordering.ordered;
    if v.is_empty() {
        return Vec::new();
    }
    let a = edge_vectors(ordering);
    let count = (v.len() - 1) / 2;
    let mut points = Vec::with_capacity(count + 1);
    let mut p = v[0];
    points.push(p);
    for k in 1..=count {
        p += a[2 * k - 1];
        points.push(p);
    }
    points
}

#[inline]
fn alternating_sign(position: usize) -> Sign {
    if position % 2 == 0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Which norms a certificate was checked in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormUsed {
    Input,
    InputAndHull,
}

/// Evaluation of the same signs in the norm of `P = conv{±V}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullCheck {
    pub polygon: Vec<Vec2>,
    pub prefix_norms: Vec<f64>,
    pub odd_prefix_points: Vec<Vec2>,
    pub odd_point_norms: Vec<f64>,
    /// `Σ |‖v‖_P − 1|` over the inputs.
    pub admission_slack: f64,
}

/// Which bound a verdict refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    SignedSum,
    OddPrefix,
    AllPrefix,
    ZonotopePoints,
    ZonotopeIdentity,
    EdgeIdentity,
}

/// Result of checking one bound: `observed ≤ limit + allowance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub bound: BoundKind,
    /// `"input"`, `"hull"`, or `"exact"` for algebraic identities.
    pub norm: String,
    pub limit: f64,
    pub allowance: f64,
    pub observed: f64,
    pub pass: bool,
}

impl Verdict {
    pub fn new(bound: BoundKind, norm: &str, limit: f64, allowance: f64, observed: f64) -> Self {
        Verdict {
            bound,
            norm: norm.to_string(),
            limit,
            allowance,
            observed,
            pass: observed <= limit + allowance,
        }
    }
}

/// Auditable output of [`alternating_balance`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceCertificate {
    pub ordering: BoundaryOrdering,
    /// `+1, −1, +1, …` along the boundary ordering.
    pub signs_ordered: Vec<Sign>,
    /// Signs for the caller's vectors in the caller's indexing.
    pub signs_original: Vec<Sign>,
    pub signed_sum: Vec2,
    pub prefix_sums: Vec<Vec2>,
    pub prefix_norms: Vec<f64>,
    pub bound_total: f64,
    pub bound_odd_prefix: f64,
    pub bound_all_prefix: f64,
    pub tolerance: f64,
    /// `Σ |‖v‖ − 1|` over the inputs in the input norm. Bounds are checked
    /// against `bound + tolerance + admission_slack`.
    pub admission_slack: f64,
    pub norm_used: NormUsed,
    pub hull: Option<HullCheck>,
}

impl BalanceCertificate {
    pub fn max_odd_prefix_norm(&self) -> f64 {
        max_odd(&self.prefix_norms)
    }

    pub fn max_prefix_norm(&self) -> f64 {
        self.prefix_norms.iter().copied().fold(0.0, f64::max)
    }

    /// Verdict for every claimed bound, recomputed from the stored values.
    pub fn verdicts(&self) -> Vec<Verdict> {
        let tau = self.tolerance;
        let allowance = tau + self.admission_slack;
        let signed_norm = self.prefix_norms.last().copied().unwrap_or(0.0);
        let (u, w) = alternating_pair(&self.ordering);
        let mut out = vec![
            Verdict::new(BoundKind::SignedSum, "input", self.bound_total, allowance, signed_norm),
            Verdict::new(
                BoundKind::OddPrefix,
                "input",
                self.bound_odd_prefix,
                allowance,
                self.max_odd_prefix_norm(),
            ),
            Verdict::new(
                BoundKind::AllPrefix,
                "input",
                self.bound_all_prefix,
                allowance,
                self.max_prefix_norm(),
            ),
            Verdict::new(BoundKind::EdgeIdentity, "exact", 0.0, tau, (w + u).max_abs_diff(Vec2::ZERO)),
        ];
        if let Some(h) = &self.hull {
            let allowance = tau + h.admission_slack;
            let signed = h.prefix_norms.last().copied().unwrap_or(0.0);
            out.push(Verdict::new(BoundKind::SignedSum, "hull", self.bound_total, allowance, signed));
            out.push(Verdict::new(
                BoundKind::OddPrefix,
                "hull",
                self.bound_odd_prefix,
                allowance,
                max_odd(&h.prefix_norms),
            ));
            out.push(Verdict::new(
                BoundKind::AllPrefix,
                "hull",
                self.bound_all_prefix,
                allowance,
                h.prefix_norms.iter().copied().fold(0.0, f64::max),
            ));
            out.push(Verdict::new(
                BoundKind::ZonotopePoints,
                "hull",
                self.bound_odd_prefix,
                allowance,
                h.odd_point_norms.iter().copied().fold(0.0, f64::max),
            ));
            let mismatch = h
                .odd_prefix_points
                .iter()
                .enumerate()
                .map(|(k, &p)| {
                    self.prefix_sums
                        .get(2 * k)
                        .map_or(f64::INFINITY, |&q| p.max_abs_diff(q))
                })
                .fold(0.0, f64::max);
            out.push(Verdict::new(BoundKind::ZonotopeIdentity, "exact", 0.0, tau, mismatch));
        }
        out
    }

    pub fn is_verified(&self) -> bool {
        self.verdicts().iter().all(|v| v.pass)
    }
}

/// Largest entry at odd 1-based positions `k = 1, 3, 5, …`.
pub(crate) fn max_odd(norms: &[f64]) -> f64 {
    norms.iter().step_by(2).copied().fold(0.0, f64::max)
}

/// Options for [`alternating_balance_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceOptions {
    pub tolerances: Tolerances,
    /// Also evaluate the signs in the norm of `P = conv{±V}`.
    pub hull_check: bool,
}

impl Default for BalanceOptions {
    fn default() -> Self {
        BalanceOptions {
            tolerances: Tolerances::default(),
            hull_check: true,
        }
    }
}

/// Alternating signs along the boundary ordering, with default options.
pub fn alternating_balance(norm: &Norm, vectors: &[Vec2]) -> Result<BalanceCertificate> {
    alternating_balance_with(norm, vectors, &BalanceOptions::default())
}

pub fn alternating_balance_with(
    norm: &Norm,
    vectors: &[Vec2],
    options: &BalanceOptions,
) -> Result<BalanceCertificate> {
    let n = vectors.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    if n % 2 == 0 {
        return Err(Error::EvenCardinality { n });
    }
    let tol = options.tolerances;
    norm.check_unit(vectors, tol.unit)?;

    let ordering = boundary_order(vectors)?;
    let signs_ordered: Vec<Sign> = (0..n).map(alternating_sign).collect();
    let mut signs_original = vec![Sign::Plus; n];
    for (j, &i) in ordering.perm.iter().enumerate() {
        signs_original[i] = signs_ordered[j] * ordering.flips[i];
    }
    let prefix = prefix_sums(&ordering.ordered, &signs_ordered);
    let prefix_norms = prefix.iter().map(|&p| norm.eval(p)).collect();
    let admission_slack = vectors.iter().map(|&v| (norm.eval(v) - 1.0).abs()).sum();

    let hull = if options.hull_check {
        match hull_of_plus_minus(vectors) {
            Ok(polygon) => Some(hull_check(polygon, &ordering, &prefix, vectors)),
            Err(Error::DegenerateHull) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    Ok(BalanceCertificate {
        signed_sum: prefix[n - 1],
        norm_used: if hull.is_some() {
            NormUsed::InputAndHull
        } else {
            NormUsed::Input
        },
        ordering,
        signs_ordered,
        signs_original,
        prefix_sums: prefix,
        prefix_norms,
        bound_total: 1.0,
        bound_odd_prefix: 1.0,
        bound_all_prefix: 2.0,
        tolerance: tol.bound,
        admission_slack,
        hull,
    })
}

fn hull_check(
    polygon: crate::norms::SymmetricPolygon,
    ordering: &BoundaryOrdering,
    prefix: &[Vec2],
    vectors: &[Vec2],
) -> HullCheck {
    let vertices = polygon.vertices().to_vec();
    let hull_norm = polygon_norm(polygon);
    let points = odd_prefix_points(ordering);
    HullCheck {
        polygon: vertices,
        prefix_norms: prefix.iter().map(|&p| hull_norm.eval(p)).collect(),
        odd_point_norms: points.iter().map(|&p| hull_norm.eval(p)).collect(),
        odd_prefix_points: points,
        admission_slack: vectors.iter().map(|&v| (hull_norm.eval(v) - 1.0).abs()).sum(),
    }
}

/// Signs for three unit vectors with `‖ε_u u + ε_v v + ε_w w‖ ≤ 1` and `ε_u = +1`.
pub fn balance_three(norm: &Norm, u: Vec2, v: Vec2, w: Vec2) -> Result<[Sign; 3]> {
    balance_three_with(norm, u, v, w, &Tolerances::default())
}

pub fn balance_three_with(
    norm: &Norm,
    u: Vec2,
    v: Vec2,
    w: Vec2,
    tolerances: &Tolerances,
) -> Result<[Sign; 3]> {
    let options = BalanceOptions {
        tolerances: *tolerances,
        hull_check: false,
    };
    let cert = alternating_balance_with(norm, &[u, v, w], &options)?;
    let s = &cert.signs_original;
    // Negating every sign keeps the norm; normalize so that u keeps its sign.
    let global = s[0];
    Ok([s[0] * global, s[1] * global, s[2] * global])
}
