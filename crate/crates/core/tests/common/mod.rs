#![allow(dead_code)]

use signbal::cli::{generate, DirectionSource, GenParams, Mode, NormKind};
use signbal::{Norm, Vec2};

/// The five norm kinds exercised by the random corpora.
#[derive(Debug, Clone, Copy)]
pub enum Kind {
    Euclidean,
    L1,
    L3,
    Max,
    Polygon,
}

pub const KINDS: [Kind; 5] = [Kind::Euclidean, Kind::L1, Kind::L3, Kind::Max, Kind::Polygon];

impl Kind {
    fn params(self) -> (NormKind, Option<f64>) {
        match self {
            Kind::Euclidean => (NormKind::Euclidean, None),
            Kind::L1 => (NormKind::Lp, Some(1.0)),
            Kind::L3 => (NormKind::Lp, Some(3.0)),
            Kind::Max => (NormKind::Max, None),
            Kind::Polygon => (NormKind::RandomPolygon, None),
        }
    }

    pub fn index(self) -> u64 {
        self as u64
    }
}

pub struct Instance {
    pub kind: Kind,
    pub seed: u64,
    pub norm: Norm,
    pub vectors: Vec<Vec2>,
}

/// Seeded instance drawn by the same generator as `signbal gen`.
pub fn instance(kind: Kind, n: usize, seed: u64, mode: Mode) -> Instance {
    let (norm, p) = kind.params();
    let file = generate(&GenParams {
        norm,
        p,
        n,
        seed,
        mode,
    })
    .expect("valid generator parameters");
    Instance {
        kind,
        seed,
        norm: file.norm.to_norm().expect("generated norm is valid"),
        vectors: file.vectors,
    }
}

/// `count` instances of `kind` with odd sizes cycling through `sizes`.
pub fn corpus(kind: Kind, count: usize, sizes: &[usize], salt: u64) -> Vec<Instance> {
    (0..count)
        .map(|i| {
            let seed = salt * 1_000_000 + kind.index() * 100_000 + i as u64;
            instance(kind, sizes[i % sizes.len()], seed, Mode::Set)
        })
        .collect()
}

pub fn rng(seed: u64) -> DirectionSource {
    DirectionSource::new(seed)
}
