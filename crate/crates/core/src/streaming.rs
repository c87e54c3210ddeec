//! Online signing: vectors arrive in a fixed order and signs are committed two
//! at a time, keeping every odd prefix sum within norm two.
//!
//! Given the current sum `s` with `‖s‖ ≤ 2`, split it as `s = u + w` with
//! `‖u‖ = 1` and `‖w‖ ≤ 1`, balance the three unit vectors `u, v_a, v_b` with
//! `u` kept positive, and add the chosen `±v_a ± v_b` to `s`. The triangle
//! inequality gives `‖s'‖ ≤ ‖u ± v_a ± v_b‖ + ‖w‖ ≤ 2`.

use serde::{Deserialize, Serialize};

use crate::balancer::balance_three_with;
use crate::error::{Error, Result};
use crate::geometry::{Sign, Vec2};
use crate::norms::Norm;
use crate::tolerance::Tolerances;

/// Smallest `‖s‖` treated as a nonzero direction in [`decompose`].
const MIN_DIRECTION_NORM: f64 = f64::MIN_POSITIVE;

/// Running state of the online signer. Each step returns a new state.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamState {
    norm: Norm,
    tolerances: Tolerances,
    sum: Vec2,
    signs: Vec<Sign>,
    slack: f64,
}

impl StreamState {
    pub fn init(norm: Norm, first: Vec2) -> Result<Self> {
        Self::init_with(norm, first, Tolerances::default())
    }

    pub fn init_with(norm: Norm, first: Vec2, tolerances: Tolerances) -> Result<Self> {
        norm.check_unit(&[first], tolerances.unit)?;
        let slack = (norm.eval(first) - 1.0).abs();
        Ok(StreamState {
            norm,
            tolerances,
            sum: first,
            signs: vec![Sign::Plus],
            slack,
        })
    }

    /// Consumes the next two vectors of the stream.
    pub fn step(&self, a: Vec2, b: Vec2) -> Result<Self> {
        let norm = &self.norm;
        let tol = &self.tolerances;
        norm.check_unit(&[a, b], tol.unit).map_err(|e| match e {
            Error::NotUnit { indices } => Error::NotUnit {
                indices: indices.into_iter().map(|i| self.k() + i).collect(),
            },
            Error::ZeroVector { index } => Error::ZeroVector {
                index: self.k() + index,
            },
            other => other,
        })?;
        let (u, _w) = decompose_within(norm, self.sum, a, self.limit())?;
        let [_, sa, sb] = balance_three_with(norm, u, a, b, tol)?;
        let sum = self.sum + sa.apply(a) + sb.apply(b);
        let slack = self.slack + (norm.eval(a) - 1.0).abs() + (norm.eval(b) - 1.0).abs();
        let mut signs = self.signs.clone();
        signs.extend([sa, sb]);
        let next = StreamState {
            norm: self.norm.clone(),
            tolerances: self.tolerances,
            sum,
            signs,
            slack,
        };
        let reached = norm.eval(sum);
        if reached > next.limit() {
            return Err(Error::PrefixOutOfRange {
                norm: reached,
                limit: next.limit(),
            });
        }
        Ok(next)
    }

    /// Number of vectors consumed; always odd.
    pub fn k(&self) -> usize {
        self.signs.len()
    }

    /// Current signed prefix sum `Σ_{i ≤ k} ε_i v_i`.
    pub fn sum(&self) -> Vec2 {
        self.sum
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn norm(&self) -> &Norm {
        &self.norm
    }

    /// Accumulated `Σ |‖v_i‖ − 1|` of the consumed vectors.
    pub fn admission_slack(&self) -> f64 {
        self.slack
    }

    fn limit(&self) -> f64 {
        2.0 + self.tolerances.bound + self.slack
    }
}

/// Splits `s` into `u + w` with `‖u‖ = 1` and `‖w‖ ≤ 1`, both parallel to `s`.
///
/// For `s = 0` the direction is taken from `fallback`: `u = fallback / ‖fallback‖`
/// and `w = −u`.
pub fn decompose(norm: &Norm, s: Vec2, fallback: Vec2) -> Result<(Vec2, Vec2)> {
    decompose_within(norm, s, fallback, 2.0 + Tolerances::default().bound)
}

/// [`decompose`] with an explicit upper limit on `‖s‖`.
pub fn decompose_within(norm: &Norm, s: Vec2, fallback: Vec2, limit: f64) -> Result<(Vec2, Vec2)> {
    let size = norm.eval(s);
    if size > limit || !size.is_finite() {
        return Err(Error::PrefixOutOfRange { norm: size, limit });
    }
    let u = if size < MIN_DIRECTION_NORM {
        norm.unitize(fallback)?
    } else {
        s * (1.0 / size)
    };
    Ok((u, s - u))
}

/// Options for [`stream_run_with`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StreamOptions {
    pub tolerances: Tolerances,
    /// Accept an even-length sequence; the last vector then gets sign `+1`
    /// and no bound is claimed for the full sum.
    pub allow_even: bool,
}

/// Unguaranteed final step of an even-length run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrailingSum {
    pub sum: Vec2,
    pub norm: f64,
}

/// Signs and odd-prefix data of a complete run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamOutcome {
    pub signs: Vec<Sign>,
    /// Norm of the prefix sum at `k = 1, 3, 5, …`.
    pub odd_prefix_norms: Vec<f64>,
    pub odd_prefix_sums: Vec<Vec2>,
    pub bound_odd_prefix: f64,
    pub tolerance: f64,
    pub admission_slack: f64,
    pub trailing: Option<TrailingSum>,
}

impl StreamOutcome {
    pub fn max_odd_prefix_norm(&self) -> f64 {
        self.odd_prefix_norms.iter().copied().fold(0.0, f64::max)
    }

    pub fn within_bound(&self) -> bool {
        self.max_odd_prefix_norm() <= self.bound_odd_prefix + self.tolerance + self.admission_slack
    }
}

pub fn stream_run(norm: &Norm, seq: &[Vec2]) -> Result<StreamOutcome> {
    stream_run_with(norm, seq, &StreamOptions::default())
}

pub fn stream_run_with(norm: &Norm, seq: &[Vec2], options: &StreamOptions) -> Result<StreamOutcome> {
    let n = seq.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    if n % 2 == 0 && !options.allow_even {
        return Err(Error::EvenCardinality { n });
    }
    norm.check_unit(seq, options.tolerances.unit)?;

    let mut state = StreamState::init_with(norm.clone(), seq[0], options.tolerances)?;
    let mut sums = vec![state.sum()];
    let odd_end = if n % 2 == 1 { n } else { n - 1 };
    for pair in seq[1..odd_end].chunks_exact(2) {
        state = state.step(pair[0], pair[1])?;
        sums.push(state.sum());
    }
    let mut signs = state.signs().to_vec();
    let mut slack = state.admission_slack();
    let trailing = if odd_end < n {
        let last = seq[n - 1];
        signs.push(Sign::Plus);
        slack += (norm.eval(last) - 1.0).abs();
        let sum = state.sum() + last;
        Some(TrailingSum {
            sum,
            norm: norm.eval(sum),
        })
    } else {
        None
    };
    Ok(StreamOutcome {
        signs,
        odd_prefix_norms: sums.iter().map(|&s| norm.eval(s)).collect(),
        odd_prefix_sums: sums,
        bound_odd_prefix: 2.0,
        tolerance: options.tolerances.bound,
        admission_slack: slack,
        trailing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    #[test]
    fn init_examples() {
        let s = StreamState::init(Norm::Euclidean, v(1.0, 0.0)).unwrap();
        assert_eq!(s.sum(), v(1.0, 0.0));
        assert_eq!(s.k(), 1);
        assert_eq!(s.signs(), &[Sign::Plus]);
        let s = StreamState::init(Norm::Max, v(-1.0, 0.5)).unwrap();
        assert_eq!(Norm::Max.eval(s.sum()), 1.0);
        assert!(matches!(
            StreamState::init(Norm::Max, v(2.0, 0.0)),
            Err(Error::NotUnit { .. })
        ));
    }

    #[test]
    fn decompose_examples() {
        let e = Norm::Euclidean;
        assert_eq!(decompose(&e, v(1.5, 0.0), v(0.0, 1.0)).unwrap(), (v(1.0, 0.0), v(0.5, 0.0)));
        let (u, w) = decompose(&e, v(0.4, 0.0), v(0.0, 1.0)).unwrap();
        assert_eq!(u, v(1.0, 0.0));
        assert!(w.max_abs_diff(v(-0.6, 0.0)) < 1e-15);
        assert_eq!(decompose(&e, Vec2::ZERO, v(0.0, 1.0)).unwrap(), (v(0.0, 1.0), v(0.0, -1.0)));
        assert!(matches!(
            decompose(&e, v(2.5, 0.0), v(0.0, 1.0)),
            Err(Error::PrefixOutOfRange { .. })
        ));
        // Marginally above two is absorbed by the tolerance.
        let (_, w) = decompose(&e, v(2.0 + 1e-12, 0.0), v(0.0, 1.0)).unwrap();
        assert!(e.eval(w) <= 1.0 + 1e-9);
    }

    #[test]
    fn step_example() {
        let s = StreamState::init(Norm::Euclidean, v(1.0, 0.0)).unwrap();
        let s = s.step(v(0.0, 1.0), v(-1.0, 0.0)).unwrap();
        assert_eq!(s.k(), 3);
        assert!(Norm::Euclidean.eval(s.sum()) <= 2.0);
        let direct = crate::geometry::signed_sum(&[v(1.0, 0.0), v(0.0, 1.0), v(-1.0, 0.0)], s.signs());
        assert_eq!(direct, s.sum());
    }

    #[test]
    fn step_from_zero_sum() {
        let s3 = 3f64.sqrt() / 2.0;
        let seq = [v(1.0, 0.0), v(0.5, s3), v(-0.5, s3), v(0.0, 1.0), v(0.6, 0.8)];
        let out = stream_run(&Norm::Euclidean, &seq).unwrap();
        assert!(out.odd_prefix_norms[1] < 1e-15);
        assert!(out.max_odd_prefix_norm() <= 2.0 + 1e-9);
    }

    #[test]
    fn run_examples() {
        let out = stream_run(&Norm::Euclidean, &[v(0.0, -1.0)]).unwrap();
        assert_eq!(out.signs, vec![Sign::Plus]);
        assert_eq!(out.odd_prefix_norms, vec![1.0]);

        let seq = [v(-1.0, 0.5), v(1.0, 0.5), v(0.0, 1.0), v(-1.0, 1.0), v(1.0, 1.0)];
        let out = stream_run(&Norm::Max, &seq).unwrap();
        assert_eq!(out.odd_prefix_norms.len(), 3);
        assert!(out.within_bound());
        assert!(out.max_odd_prefix_norm() <= 2.0 + 1e-9);
    }

    #[test]
    fn run_rejects_even_unless_opted_in() {
        let seq = [v(1.0, 0.0), v(0.0, 1.0)];
        assert_eq!(
            stream_run(&Norm::Euclidean, &seq),
            Err(Error::EvenCardinality { n: 2 })
        );
        let opts = StreamOptions {
            allow_even: true,
            ..Default::default()
        };
        let out = stream_run_with(&Norm::Euclidean, &seq, &opts).unwrap();
        assert_eq!(out.signs, vec![Sign::Plus, Sign::Plus]);
        let t = out.trailing.unwrap();
        assert_eq!(t.sum, v(1.0, 1.0));
    }

    #[test]
    fn step_reports_stream_index_for_bad_vector() {
        let s = StreamState::init(Norm::Euclidean, v(1.0, 0.0)).unwrap();
        assert_eq!(
            s.step(v(0.0, 1.0), v(0.0, 3.0)),
            Err(Error::NotUnit { indices: vec![2] })
        );
    }
}
