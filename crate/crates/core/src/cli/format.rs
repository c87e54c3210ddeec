//! Instance, certificate and oracle-report files.
//!
//! All files are JSON. Floating-point numbers are written in scientific
//! notation with 17 significant digits (`{:.16e}`), which reproduces every
//! `f64` bit for bit on parsing.

use std::collections::BTreeMap;
use std::io;

use serde::ser::Serialize;
use serde::{Deserialize, Serialize as SerializeDerive};
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};
use sha2::{Digest, Sha256};

use crate::balancer::{BalanceCertificate, Verdict};
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::norms::{polygon_norm, Norm, SymmetricPolygon};
use crate::oracle::OracleReport;
use crate::streaming::StreamOutcome;

pub const CERTIFICATE_FORMAT: &str = "signbal-certificate";
pub const ORACLE_FORMAT: &str = "signbal-oracle";

/// Serializable description of a norm.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormSpec {
    Euclidean,
    Lp { p: f64 },
    Max,
    Polygonal { vertices: Vec<Vec2> },
}

impl NormSpec {
    pub fn to_norm(&self) -> Result<Norm> {
        match self {
            NormSpec::Euclidean => Ok(Norm::Euclidean),
            NormSpec::Max => Ok(Norm::Max),
            NormSpec::Lp { p } => Norm::lp(*p),
            NormSpec::Polygonal { vertices } => {
                SymmetricPolygon::new(vertices.clone()).map(polygon_norm)
            }
        }
    }

    pub fn from_norm(norm: &Norm) -> Self {
        match norm {
            Norm::Euclidean => NormSpec::Euclidean,
            Norm::Max => NormSpec::Max,
            Norm::Lp(p) => NormSpec::Lp { p: p.get() },
            Norm::Polygonal(ball) => NormSpec::Polygonal {
                vertices: ball.polygon().vertices().to_vec(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, SerializeDerive, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Unordered set: balanced with the boundary ordering.
    Set,
    /// Fixed order: signed online.
    Sequence,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct InstanceFile {
    pub norm: NormSpec,
    pub mode: Mode,
    pub vectors: Vec<Vec2>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, serde_json::Value>,
}

impl InstanceFile {
    /// Checks the file invariants and builds the norm.
    pub fn validate(&self) -> Result<Norm> {
        if self.vectors.is_empty() {
            return Err(Error::Empty);
        }
        if self.vectors.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        self.norm.to_norm()
    }

    /// SHA-256 of the canonical compact serialization, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(to_compact_json(self).as_bytes()))
    }
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateBody {
    Balance(BalanceCertificate),
    Stream(StreamOutcome),
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct CertificateFile {
    pub format: String,
    pub version: String,
    pub instance: InstanceFile,
    pub input_hash: String,
    pub tolerance: f64,
    pub unit_tolerance: f64,
    pub result: CertificateBody,
    pub verdicts: Vec<Verdict>,
}

impl CertificateFile {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct OracleFile {
    pub format: String,
    pub version: String,
    pub instance: InstanceFile,
    pub input_hash: String,
    pub report: OracleReport,
}

/// Writes floats with 17 significant digits, delegating layout to `F`.
struct Digits17<F>(F);

macro_rules! forward {
    ($($name:ident),*) => {
        $(
            #[inline]
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
                self.0.$name(w)
            }
        )*
    };
}

macro_rules! forward_first {
    ($($name:ident),*) => {
        $(
            #[inline]
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
                self.0.$name(w, first)
            }
        )*
    };
}

impl<F: Formatter> Formatter for Digits17<F> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        write!(w, "{:.16e}", f64::from(value))
    }

    forward!(begin_array, end_array, end_array_value, begin_object, end_object, begin_object_value, end_object_value);
    forward_first!(begin_array_value, begin_object_key);
}

fn write_with<T: Serialize + ?Sized, F: Formatter>(value: &T, formatter: F) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17(formatter));
    value
        .serialize(&mut ser)
        .expect("serializing plain data to memory cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_pretty_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = write_with(value, PrettyFormatter::with_indent(b"  "));
    s.push('\n');
    s
}

pub fn to_compact_json<T: Serialize + ?Sized>(value: &T) -> String {
    write_with(value, CompactFormatter)
}
