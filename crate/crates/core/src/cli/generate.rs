//! Seeded instance generation.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `SeedableRng::seed_from_u64(seed)`. Every uniform draw is
//! `u = (next_u64() >> 11) · 2⁻⁵³` in `[0, 1)`, and a direction is
//! `(cos 2πu, sin 2πu)`.
//!
//! For `random-polygon`, the first draw picks `m = 3 + next_u64() mod 4`, the
//! next `m` draws give Euclidean unit directions, and the ball is the hull of
//! those directions and their negatives. Each instance vector is then one
//! direction draw rescaled to norm one.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::cli::format::{InstanceFile, Mode, NormSpec};
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::norms::{hull_of_plus_minus, polygon_norm, Norm, SymmetricPolygon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum NormKind {
    Euclidean,
    Max,
    Lp,
    RandomPolygon,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub norm: NormKind,
    /// Exponent for [`NormKind::Lp`].
    pub p: Option<f64>,
    pub n: usize,
    pub seed: u64,
    pub mode: Mode,
}

/// Uniform draws and directions from a fixed ChaCha8 stream.
pub struct DirectionSource {
    rng: ChaCha8Rng,
}

impl DirectionSource {
    pub fn new(seed: u64) -> Self {
        DirectionSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn direction(&mut self) -> Vec2 {
        let (s, c) = (TAU * self.uniform()).sin_cos();
        Vec2::new(c, s)
    }

    /// Symmetric polygon with `2m` vertices, `m ∈ [3, 6]`, inscribed in the
    /// Euclidean unit circle.
    pub fn polygon(&mut self) -> SymmetricPolygon {
        loop {
            let m = 3 + (self.next_u64() % 4) as usize;
            let dirs: Vec<Vec2> = (0..m).map(|_| self.direction()).collect();
            if let Ok(p) = hull_of_plus_minus(&dirs) {
                return p;
            }
        }
    }

    /// `n` unit vectors of `norm`.
    pub fn unit_vectors(&mut self, norm: &Norm, n: usize) -> Vec<Vec2> {
        (0..n)
            .map(|_| {
                norm.unitize(self.direction())
                    .expect("a direction on the unit circle is nonzero")
            })
            .collect()
    }
}

pub fn generate(params: &GenParams) -> Result<InstanceFile> {
    if params.n == 0 {
        return Err(Error::Empty);
    }
    let mut source = DirectionSource::new(params.seed);
    let norm = match params.norm {
        NormKind::Euclidean => Norm::Euclidean,
        NormKind::Max => Norm::Max,
        NormKind::Lp => Norm::lp(params.p.ok_or(Error::InvalidExponent(f64::NAN))?)?,
        NormKind::RandomPolygon => polygon_norm(source.polygon()),
    };
    let vectors = source.unit_vectors(&norm, params.n);
    let mut meta = BTreeMap::new();
    meta.insert("generator".to_string(), "chacha8".into());
    meta.insert("seed".to_string(), params.seed.into());
    Ok(InstanceFile {
        norm: NormSpec::from_norm(&norm),
        mode: params.mode,
        vectors,
        meta,
    })
}
