//! Planar norms, including polygonal norms given by the Minkowski functional
//! of a centrally symmetric convex polygon.
//!
//! The polygon `P = conv{±v : v ∈ V}` of a set of unit vectors is itself the
//! unit ball of a norm, and every `v` lies on its boundary. [`hull_of_plus_minus`]
//! builds `P` and [`polygon_norm`] turns it into a [`Norm`].

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{cross_sign, orient, Vec2};
use crate::tolerance::DEFAULT_BOUND_TOLERANCE;

/// Exponent of an `ℓp` norm, validated to be finite and `≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(Exponent(p))
        } else {
            Err(Error::InvalidExponent(p))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// A centrally symmetric, strictly convex polygon with its vertices listed
/// counterclockwise.
///
/// With `2m` vertices, `vertices[i + m] = −vertices[i]` for every `i < m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricPolygon {
    vertices: Vec<Vec2>,
}

impl SymmetricPolygon {
    /// Validates a counterclockwise vertex list. Symmetry is checked up to
    /// `1e-9` per coordinate.
    pub fn new(vertices: Vec<Vec2>) -> Result<Self> {
        Self::with_symmetry_tolerance(vertices, DEFAULT_BOUND_TOLERANCE)
    }

    pub fn with_symmetry_tolerance(vertices: Vec<Vec2>, tol: f64) -> Result<Self> {
        let n = vertices.len();
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidPolygon(format!(
                "vertex count must be even and at least 4, got {n}"
            )));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let m = n / 2;
        for i in 0..m {
            if vertices[i + m].max_abs_diff(-vertices[i]) > tol {
                return Err(Error::InvalidPolygon(format!(
                    "vertex {} is not the negative of vertex {i}",
                    i + m
                )));
            }
        }
        // The first half must sweep strictly less than a half-turn from vertex 0,
        // otherwise a left-turning vertex list could wind around more than once.
        for i in 1..m {
            if cross_sign(vertices[0], vertices[i]) <= 0.0 {
                return Err(Error::InvalidPolygon(format!(
                    "vertex {i} is not counterclockwise of vertex 0 within a half-turn"
                )));
            }
        }
        for i in 0..n {
            let prev = vertices[(i + n - 1) % n];
            let next = vertices[(i + 1) % n];
            if orient(prev, vertices[i], next) <= 0.0 {
                return Err(Error::InvalidPolygon(format!(
                    "vertex {i} is not a strictly convex counterclockwise turn"
                )));
            }
        }
        Ok(SymmetricPolygon { vertices })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges as `(start, end)` pairs in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Point-in-polygon test that uses only edge orientations.
    pub fn contains(&self, x: Vec2) -> bool {
        self.edges().all(|(a, b)| orient(a, b, x) >= 0.0)
    }
}

/// One supporting half-plane `⟨normal, x⟩ ≤ offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Facet {
    pub normal: Vec2,
    pub offset: f64,
}

/// The polygon as an intersection of half-planes, one per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfPlaneForm {
    pub facets: Vec<Facet>,
}

impl HalfPlaneForm {
    pub fn from_polygon(polygon: &SymmetricPolygon) -> Self {
        let facets = polygon
            .edges()
            .map(|(a, b)| {
                // Outward normal of a counterclockwise edge.
                let normal = Vec2::new(b.y - a.y, a.x - b.x);
                Facet {
                    normal,
                    offset: a.cross(b),
                }
            })
            .collect();
        HalfPlaneForm { facets }
    }

    /// Minkowski functional: `max_i ⟨n_i, x⟩ / c_i`.
    pub fn gauge(&self, x: Vec2) -> f64 {
        self.facets
            .iter()
            .map(|f| f.normal.dot(x) / f.offset)
            .fold(0.0, f64::max)
    }
}

/// A polygonal unit ball with its cached half-plane form.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonalBall {
    inner: Arc<BallData>,
}

#[derive(Debug, PartialEq)]
struct BallData {
    polygon: SymmetricPolygon,
    form: HalfPlaneForm,
    // n_i / c_i, so the gauge is a plain maximum of dot products.
    rows: Vec<Vec2>,
}

impl PolygonalBall {
    pub fn polygon(&self) -> &SymmetricPolygon {
        &self.inner.polygon
    }

    pub fn half_planes(&self) -> &HalfPlaneForm {
        &self.inner.form
    }
}

/// A norm on the plane.
#[derive(Debug, Clone, PartialEq)]
pub enum Norm {
    Euclidean,
    Lp(Exponent),
    Max,
    Polygonal(PolygonalBall),
}

impl Norm {
    pub fn lp(p: f64) -> Result<Norm> {
        Exponent::new(p).map(Norm::Lp)
    }

    /// Evaluates `‖x‖`.
    pub fn eval(&self, x: Vec2) -> f64 {
        let (ax, ay) = (x.x.abs(), x.y.abs());
        match self {
            Norm::Euclidean => ax.hypot(ay),
            Norm::Max => ax.max(ay),
            Norm::Lp(p) => lp_norm(ax, ay, p.get()),
            Norm::Polygonal(ball) => ball.inner.rows.iter().map(|r| r.dot(x)).fold(0.0, f64::max),
        }
    }

    /// Rescales `x` to norm one.
    pub fn unitize(&self, x: Vec2) -> Result<Vec2> {
        let n = self.eval(x);
        if n == 0.0 {
            return Err(Error::ZeroVector { index: 0 });
        }
        Ok(Vec2::new(x.x / n, x.y / n))
    }

    /// Whether `|‖x‖ − 1| ≤ tol`.
    pub fn is_unit(&self, x: Vec2, tol: f64) -> bool {
        (self.eval(x) - 1.0).abs() <= tol
    }

    /// Indices of vectors failing unit admission, after rejecting zero and
    /// non-finite inputs.
    pub fn check_unit(&self, vectors: &[Vec2], tol: f64) -> Result<()> {
        for (index, v) in vectors.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite);
            }
            if v.is_zero() {
                return Err(Error::ZeroVector { index });
            }
        }
        let indices: Vec<usize> = vectors
            .iter()
            .enumerate()
            .filter(|(_, &v)| !self.is_unit(v, tol))
            .map(|(i, _)| i)
            .collect();
        if indices.is_empty() {
            Ok(())
        } else {
            Err(Error::NotUnit { indices })
        }
    }

    /// Short name used in reports.
    pub fn label(&self) -> String {
        match self {
            Norm::Euclidean => "euclidean".into(),
            Norm::Max => "max".into(),
            Norm::Lp(p) => format!("lp({})", p.get()),
            Norm::Polygonal(ball) => format!("polygonal({})", ball.polygon().len()),
        }
    }
}

fn lp_norm(ax: f64, ay: f64, p: f64) -> f64 {
    if p == 1.0 {
        return ax + ay;
    }
    if p == 2.0 {
        return ax.hypot(ay);
    }
    let m = ax.max(ay);
    if m == 0.0 {
        return 0.0;
    }
    let (a, b) = (ax / m, ay / m);
    m * (a.powf(p) + b.powf(p)).powf(1.0 / p)
}

/// The norm whose unit ball is `polygon`.
pub fn polygon_norm(polygon: SymmetricPolygon) -> Norm {
    let form = HalfPlaneForm::from_polygon(&polygon);
    let rows = form.facets.iter().map(|f| f.normal * (1.0 / f.offset)).collect();
    Norm::Polygonal(PolygonalBall {
        inner: Arc::new(BallData { polygon, form, rows }),
    })
}

/// Convex hull of `{v, −v : v ∈ V}`.
///
/// Points lying in the interior of a hull edge are dropped, so the result is
/// strictly convex. The vertex list starts at the first vertex in the upper
/// half-plane (`y > 0`, or `y = 0` and `x > 0`) in counterclockwise order.
pub fn hull_of_plus_minus(vectors: &[Vec2]) -> Result<SymmetricPolygon> {
    if vectors.is_empty() {
        return Err(Error::Empty);
    }
    for (index, v) in vectors.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite);
        }
        if v.is_zero() {
            return Err(Error::ZeroVector { index });
        }
    }
    let mut points: Vec<Vec2> = vectors.iter().flat_map(|&v| [v, -v]).collect();
    points.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    points.dedup();

    let hull = monotone_chain(&points);
    if hull.len() < 3 {
        return Err(Error::DegenerateHull);
    }
    let n = hull.len();
    let start = (0..n)
        .find(|&i| in_upper_half(hull[i]) && !in_upper_half(hull[(i + n - 1) % n]))
        .ok_or(Error::DegenerateHull)?;
    let mut vertices = hull;
    vertices.rotate_left(start);
    SymmetricPolygon::new(vertices)
}

pub(crate) fn in_upper_half(v: Vec2) -> bool {
    v.y > 0.0 || (v.y == 0.0 && v.x > 0.0)
}

/// Andrew's monotone chain over lexicographically sorted, deduplicated points.
/// Returns the hull counterclockwise without collinear points.
fn monotone_chain(points: &[Vec2]) -> Vec<Vec2> {
    if points.len() < 3 {
        return points.to_vec();
    }
    let mut hull: Vec<Vec2> = Vec::with_capacity(points.len() + 1);
    for &p in points {
        while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in points.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> SymmetricPolygon {
        SymmetricPolygon::new(vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(-1.0, 0.0),
            Vec2::new(0.0, -1.0),
        ])
        .unwrap()
    }

    fn hexagon_input() -> Vec<Vec2> {
        vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(0.5, 0.866),
            Vec2::new(-0.5, 0.866),
        ]
    }

    #[test]
    fn eval_examples() {
        assert_eq!(Norm::Max.eval(Vec2::new(3.0, 4.0)), 4.0);
        assert_eq!(Norm::lp(1.0).unwrap().eval(Vec2::new(1.0, 1.0)), 2.0);
        assert_eq!(polygon_norm(diamond()).eval(Vec2::new(1.0, 1.0)), 2.0);
        let d = Vec2::new(1.0, 0.0) - Vec2::new(0.0, 1.0);
        assert!((Norm::Euclidean.eval(d) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn lp_general_exponent() {
        let n = Norm::lp(3.0).unwrap();
        let expected = 2f64.powf(1.0 / 3.0);
        assert!((n.eval(Vec2::new(1.0, -1.0)) - expected).abs() < 1e-15);
        assert_eq!(n.eval(Vec2::ZERO), 0.0);
        assert_eq!(Norm::lp(0.5), Err(Error::InvalidExponent(0.5)));
        assert!(Norm::lp(f64::INFINITY).is_err());
    }

    #[test]
    fn unitize_examples() {
        let u = Norm::Euclidean.unitize(Vec2::new(3.0, 4.0)).unwrap();
        assert!(u.max_abs_diff(Vec2::new(0.6, 0.8)) < 1e-15);
        assert_eq!(Norm::Max.unitize(Vec2::new(2.0, 1.0)).unwrap(), Vec2::new(1.0, 0.5));
        assert_eq!(
            polygon_norm(diamond()).unitize(Vec2::new(1.0, 1.0)).unwrap(),
            Vec2::new(0.5, 0.5)
        );
        assert!(matches!(
            Norm::Euclidean.unitize(Vec2::ZERO),
            Err(Error::ZeroVector { .. })
        ));
    }

    #[test]
    fn hull_of_basis_is_diamond() {
        let p = hull_of_plus_minus(&[Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]).unwrap();
        assert_eq!(p, diamond());
    }

    #[test]
    fn hull_of_parallel_is_degenerate() {
        let r = hull_of_plus_minus(&[Vec2::new(1.0, 0.0), Vec2::new(1.0, 0.0)]);
        assert_eq!(r, Err(Error::DegenerateHull));
        let r = hull_of_plus_minus(&[Vec2::new(1.0, 1.0), Vec2::new(-2.0, -2.0)]);
        assert_eq!(r, Err(Error::DegenerateHull));
    }

    #[test]
    fn hull_of_three_directions_is_hexagon() {
        let v = hexagon_input();
        let p = hull_of_plus_minus(&v).unwrap();
        let mut expected = v.clone();
        expected.extend(v.iter().map(|&x| -x));
        assert_eq!(p.vertices(), expected.as_slice());
        // A vertex of P has gauge one.
        let norm = polygon_norm(p);
        assert!((norm.eval(Vec2::new(1.0, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hull_drops_edge_interior_points() {
        // (0.5, 0.5) lies on the edge from (1, 0) to (0, 1).
        let p = hull_of_plus_minus(&[
            Vec2::new(1.0, 0.0),
            Vec2::new(0.5, 0.5),
            Vec2::new(0.0, 1.0),
        ])
        .unwrap();
        assert_eq!(p, diamond());
    }

    #[test]
    fn square_gauge_is_max_norm() {
        let sq = SymmetricPolygon::new(vec![
            Vec2::new(1.0, 1.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(-1.0, -1.0),
            Vec2::new(1.0, -1.0),
        ])
        .unwrap();
        let norm = polygon_norm(sq);
        for &(x, y) in &[(0.3, -2.0), (5.0, 1.0), (-0.25, 0.25), (0.0, 0.0)] {
            let p = Vec2::new(x, y);
            assert_eq!(norm.eval(p), Norm::Max.eval(p));
        }
    }

    #[test]
    fn half_plane_equality_on_two_edges_per_vertex() {
        let p = hull_of_plus_minus(&hexagon_input()).unwrap();
        let form = HalfPlaneForm::from_polygon(&p);
        for v in p.vertices() {
            let tight = form
                .facets
                .iter()
                .filter(|f| (f.normal.dot(*v) - f.offset).abs() <= 1e-12 * f.offset)
                .count();
            assert_eq!(tight, 2);
            assert!(form.facets.iter().all(|f| f.normal.dot(*v) <= f.offset * (1.0 + 1e-12)));
        }
        // Normal set is closed under negation.
        let m = form.facets.len() / 2;
        for i in 0..m {
            let (a, b) = (form.facets[i], form.facets[i + m]);
            assert!(a.normal.max_abs_diff(-b.normal) < 1e-12);
            assert!((a.offset - b.offset).abs() < 1e-12);
        }
    }

    #[test]
    fn polygon_validation_rejects_bad_input() {
        let tri = vec![Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(-1.0, -1.0)];
        assert!(SymmetricPolygon::new(tri).is_err());
        // Clockwise diamond.
        let cw = vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, -1.0),
            Vec2::new(-1.0, 0.0),
            Vec2::new(0.0, 1.0),
        ];
        assert!(SymmetricPolygon::new(cw).is_err());
        // Not symmetric.
        let skew = vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(-1.0, 0.0),
            Vec2::new(0.0, -2.0),
        ];
        assert!(SymmetricPolygon::new(skew).is_err());
        // Collinear middle vertex.
        let flat = vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(0.5, 0.5),
            Vec2::new(0.0, 1.0),
            Vec2::new(-1.0, 0.0),
            Vec2::new(-0.5, -0.5),
            Vec2::new(0.0, -1.0),
        ];
        assert!(SymmetricPolygon::new(flat).is_err());
    }

    #[test]
    fn check_unit_reports_offenders() {
        let v = [Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(0.5, 0.5)];
        assert_eq!(
            Norm::Euclidean.check_unit(&v, 1e-6),
            Err(Error::NotUnit { indices: vec![1, 3] })
        );
        assert_eq!(
            Norm::Euclidean.check_unit(&[Vec2::new(1.0, 0.0), Vec2::ZERO], 1e-6),
            Err(Error::ZeroVector { index: 1 })
        );
    }
}
