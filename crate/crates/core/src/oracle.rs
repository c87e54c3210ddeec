//! Exhaustive ground truth for small instances.
//!
//! Plain enumeration, no pruning. Ties in the minimum go to the
//! lexicographically smallest sign vector (`+1 < −1`), then the smallest
//! permutation, so reports are identical however the work is split across
//! threads.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Sign, Vec2};
use crate::norms::Norm;

pub const MAX_SIGNED_SUM_N: usize = 24;
pub const MAX_FIXED_ORDER_N: usize = 20;
pub const MAX_ANY_ORDER_N: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `min_ε ‖Σ ε_i v_i‖`.
    MinSignedSum,
    /// `min_ε max_{k odd} ‖Σ_{i ≤ k} ε_i v_i‖` in the given order.
    MinMaxOddPrefixFixedOrder,
    /// As above, minimized over all orderings too.
    MinMaxOddPrefixAnyOrder,
}

impl Quantity {
    pub fn limit(self) -> usize {
        match self {
            Quantity::MinSignedSum => MAX_SIGNED_SUM_N,
            Quantity::MinMaxOddPrefixFixedOrder => MAX_FIXED_ORDER_N,
            Quantity::MinMaxOddPrefixAnyOrder => MAX_ANY_ORDER_N,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub instance_id: String,
    pub quantity: Quantity,
    pub value: f64,
    /// Signs in evaluation order: input order, or the order of `argmin_perm`.
    pub argmin_signs: Vec<Sign>,
    pub argmin_perm: Option<Vec<usize>>,
    /// Number of candidates enumerated.
    pub search_size: u64,
}

impl OracleReport {
    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.instance_id = id.into();
        self
    }

    /// Recomputes the objective at the reported argmin.
    pub fn reevaluate(&self, norm: &Norm, vectors: &[Vec2]) -> f64 {
        let ordered: Vec<Vec2> = match &self.argmin_perm {
            Some(p) => p.iter().map(|&i| vectors[i]).collect(),
            None => vectors.to_vec(),
        };
        let prefix = crate::geometry::prefix_sums(&ordered, &self.argmin_signs);
        match self.quantity {
            Quantity::MinSignedSum => prefix.last().map_or(0.0, |&s| norm.eval(s)),
            _ => prefix
                .iter()
                .step_by(2)
                .map(|&s| norm.eval(s))
                .fold(0.0, f64::max),
        }
    }
}

pub fn run(quantity: Quantity, norm: &Norm, vectors: &[Vec2]) -> Result<OracleReport> {
    match quantity {
        Quantity::MinSignedSum => min_signed_sum(norm, vectors),
        Quantity::MinMaxOddPrefixFixedOrder => min_max_odd_prefix_fixed_order(norm, vectors),
        Quantity::MinMaxOddPrefixAnyOrder => min_max_odd_prefix_any_order(norm, vectors),
    }
}

fn guard(vectors: &[Vec2], limit: usize) -> Result<()> {
    if vectors.is_empty() {
        return Err(Error::Empty);
    }
    if vectors.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    if vectors.len() > limit {
        return Err(Error::TooLarge {
            n: vectors.len(),
            limit,
        });
    }
    Ok(())
}

/// Sign of input `i` under `mask`; `ε_1` is always `+1` and `ε_2` is the most
/// significant bit, so numeric mask order is lexicographic sign order.
#[inline]
fn mask_sign(mask: u64, n: usize, i: usize) -> Sign {
    if i > 0 && (mask >> (n - 1 - i)) & 1 == 1 {
        Sign::Minus
    } else {
        Sign::Plus
    }
}

fn mask_signs(mask: u64, n: usize) -> Vec<Sign> {
    (0..n).map(|i| mask_sign(mask, n, i)).collect()
}

fn argmin_mask<F>(n: usize, objective: F) -> (f64, u64)
where
    F: Fn(u64) -> f64 + Sync,
{
    let count = 1u64 << (n - 1);
    (0..count)
        .into_par_iter()
        .map(|mask| (objective(mask), mask))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("at least one candidate")
}

/// Minimum of `‖Σ ε_i v_i‖` over the `2^(n−1)` sign vectors with `ε_1 = +1`.
pub fn min_signed_sum(norm: &Norm, vectors: &[Vec2]) -> Result<OracleReport> {
    guard(vectors, MAX_SIGNED_SUM_N)?;
    let n = vectors.len();
    let (value, mask) = argmin_mask(n, |mask| {
        let s = vectors
            .iter()
            .enumerate()
            .fold(Vec2::ZERO, |acc, (i, &v)| acc + mask_sign(mask, n, i).apply(v));
        norm.eval(s)
    });
    Ok(OracleReport {
        instance_id: String::new(),
        quantity: Quantity::MinSignedSum,
        value,
        argmin_signs: mask_signs(mask, n),
        argmin_perm: None,
        search_size: 1 << (n - 1),
    })
}

/// Minimum over sign vectors of the largest odd-prefix norm, order fixed.
pub fn min_max_odd_prefix_fixed_order(norm: &Norm, seq: &[Vec2]) -> Result<OracleReport> {
    guard(seq, MAX_FIXED_ORDER_N)?;
    let n = seq.len();
    let (value, mask) = argmin_mask(n, |mask| {
        let mut s = Vec2::ZERO;
        let mut worst = 0.0f64;
        for (i, &v) in seq.iter().enumerate() {
            s += mask_sign(mask, n, i).apply(v);
            if i % 2 == 0 {
                worst = worst.max(norm.eval(s));
            }
        }
        worst
    });
    Ok(OracleReport {
        instance_id: String::new(),
        quantity: Quantity::MinMaxOddPrefixFixedOrder,
        value,
        argmin_signs: mask_signs(mask, n),
        argmin_perm: None,
        search_size: 1 << (n - 1),
    })
}

/// Minimum of the largest odd-prefix norm over all orderings and signs.
pub fn min_max_odd_prefix_any_order(norm: &Norm, vectors: &[Vec2]) -> Result<OracleReport> {
    guard(vectors, MAX_ANY_ORDER_N)?;
    let n = vectors.len();
    let best = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut search = OrderSearch {
                norm,
                vectors,
                perm: vec![first],
                signs: vec![Sign::Plus],
                best: None,
            };
            let s = vectors[first];
            search.descend(1u32 << first, s, norm.eval(s));
            search.best.expect("every branch reaches a leaf")
        })
        .min_by(Candidate::cmp)
        .expect("at least one branch");
    let factorial: u64 = (1..=n as u64).product();
    Ok(OracleReport {
        instance_id: String::new(),
        quantity: Quantity::MinMaxOddPrefixAnyOrder,
        value: best.value,
        argmin_signs: best.signs,
        argmin_perm: Some(best.perm),
        search_size: factorial << (n - 1),
    })
}

#[derive(Debug, Clone)]
struct Candidate {
    value: f64,
    signs: Vec<Sign>,
    perm: Vec<usize>,
}

impl Candidate {
    fn cmp(a: &Candidate, b: &Candidate) -> Ordering {
        a.value
            .total_cmp(&b.value)
            .then_with(|| a.signs.cmp(&b.signs))
            .then_with(|| a.perm.cmp(&b.perm))
    }
}

struct OrderSearch<'a> {
    norm: &'a Norm,
    vectors: &'a [Vec2],
    perm: Vec<usize>,
    signs: Vec<Sign>,
    best: Option<Candidate>,
}

impl OrderSearch<'_> {
    fn descend(&mut self, used: u32, sum: Vec2, worst: f64) {
        let n = self.vectors.len();
        let depth = self.perm.len();
        if depth == n {
            self.offer(worst);
            return;
        }
        if depth + 1 == n {
            self.finish(used, sum, worst);
            return;
        }
        for i in 0..n {
            if used & (1 << i) != 0 {
                continue;
            }
            for sign in [Sign::Plus, Sign::Minus] {
                let s = sum + sign.apply(self.vectors[i]);
                // Position `depth` is prefix length `depth + 1`.
                let w = if depth % 2 == 0 {
                    worst.max(self.norm.eval(s))
                } else {
                    worst
                };
                self.perm.push(i);
                self.signs.push(sign);
                self.descend(used | (1 << i), s, w);
                self.perm.pop();
                self.signs.pop();
            }
        }
    }

    /// Last position: one vector left, two signs.
    fn finish(&mut self, used: u32, sum: Vec2, worst: f64) {
        let n = self.vectors.len();
        let i = (0..n).find(|&i| used & (1 << i) == 0).expect("one vector left");
        let v = self.vectors[i];
        let odd = n % 2 == 1;
        self.perm.push(i);
        for sign in [Sign::Plus, Sign::Minus] {
            let w = if odd {
                worst.max(self.norm.eval(sum + sign.apply(v)))
            } else {
                worst
            };
            self.signs.push(sign);
            self.offer(w);
            self.signs.pop();
        }
        self.perm.pop();
    }

    fn offer(&mut self, value: f64) {
        let better = match &self.best {
            None => true,
            Some(b) => match value.total_cmp(&b.value) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => (&self.signs, &self.perm) < (&b.signs, &b.perm),
            },
        };
        if better {
            self.best = Some(Candidate {
                value,
                signs: self.signs.clone(),
                perm: self.perm.clone(),
            });
        }
    }
}

/// A named instance from the fixed tightness corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusInstance {
    pub name: String,
    pub norm: Norm,
    pub vectors: Vec<Vec2>,
}

/// Sequence showing the online bound two cannot be lowered (max norm).
pub fn max_norm_sequence() -> Vec<Vec2> {
    vec![
        Vec2::new(-1.0, 0.5),
        Vec2::new(1.0, 0.5),
        Vec2::new(0.0, 1.0),
        Vec2::new(-1.0, 1.0),
        Vec2::new(1.0, 1.0),
    ]
}

/// Instances at which the bounds are attained or fail.
///
/// - `same-vector-{3,5,15}`: one Euclidean unit vector repeated; every signed
///   sum has norm at least one.
/// - `max-norm-5seq`: online bound two is attained in the given order.
/// - `l1-basis-pair`: `{e1, e2}` under `ℓ1`; every signed sum has norm two.
/// - `even-pair`: `{e1, e2}` Euclidean; best signed sum is `√2 > 1`.
pub fn tightness_corpus() -> Vec<CorpusInstance> {
    let u = Vec2::new(0.6, 0.8);
    let basis = vec![Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
    let mut corpus: Vec<CorpusInstance> = [3usize, 5, 15]
        .iter()
        .map(|&n| CorpusInstance {
            name: format!("same-vector-{n}"),
            norm: Norm::Euclidean,
            vectors: vec![u; n],
        })
        .collect();
    corpus.push(CorpusInstance {
        name: "max-norm-5seq".into(),
        norm: Norm::Max,
        vectors: max_norm_sequence(),
    });
    corpus.push(CorpusInstance {
        name: "l1-basis-pair".into(),
        norm: Norm::lp(1.0).expect("p = 1 is valid"),
        vectors: basis.clone(),
    });
    corpus.push(CorpusInstance {
        name: "even-pair".into(),
        norm: Norm::Euclidean,
        vectors: basis,
    });
    corpus
}
