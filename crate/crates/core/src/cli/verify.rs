//! Independent re-check of a certificate file.
//!
//! Every stored quantity is recomputed from the echoed instance and the
//! claimed signs; nothing from the balancing algorithm itself is rerun.

use crate::balancer::{odd_prefix_points, BalanceCertificate, NormUsed, Verdict};
use crate::cli::commands::stream_verdict;
use crate::cli::format::{CertificateBody, CertificateFile};
use crate::geometry::{prefix_sums, signed_sum, Sign, Vec2};
use crate::norms::{hull_of_plus_minus, polygon_norm, Norm};
use crate::streaming::{StreamOutcome, TrailingSum};

struct Checker {
    tau: f64,
    mismatches: Vec<String>,
}

impl Checker {
    fn fail(&mut self, msg: String) {
        self.mismatches.push(msg);
    }

    fn scalar(&mut self, what: &str, claimed: f64, actual: f64) {
        if !((claimed - actual).abs() <= self.tau) {
            self.fail(format!("{what}: claimed {claimed}, recomputed {actual}"));
        }
    }

    fn point(&mut self, what: &str, claimed: Vec2, actual: Vec2) {
        if !(claimed.max_abs_diff(actual) <= self.tau) {
            self.fail(format!(
                "{what}: claimed ({}, {}), recomputed ({}, {})",
                claimed.x, claimed.y, actual.x, actual.y
            ));
        }
    }

    fn scalars(&mut self, what: &str, claimed: &[f64], actual: &[f64]) {
        if claimed.len() != actual.len() {
            self.fail(format!("{what}: {} entries, expected {}", claimed.len(), actual.len()));
            return;
        }
        for (i, (&c, &a)) in claimed.iter().zip(actual).enumerate() {
            self.scalar(&format!("{what}[{i}]"), c, a);
        }
    }

    fn points(&mut self, what: &str, claimed: &[Vec2], actual: &[Vec2]) {
        if claimed.len() != actual.len() {
            self.fail(format!("{what}: {} entries, expected {}", claimed.len(), actual.len()));
            return;
        }
        for (i, (&c, &a)) in claimed.iter().zip(actual).enumerate() {
            self.point(&format!("{what}[{i}]"), c, a);
        }
    }

    fn verdicts(&mut self, claimed: &[Verdict], actual: &[Verdict]) {
        if claimed.len() != actual.len() {
            self.fail(format!("verdicts: {} entries, expected {}", claimed.len(), actual.len()));
            return;
        }
        for (i, (c, a)) in claimed.iter().zip(actual).enumerate() {
            if c.bound != a.bound || c.norm != a.norm || c.pass != a.pass {
                self.fail(format!("verdicts[{i}]: claimed {c:?}, recomputed {a:?}"));
            }
            self.scalar(&format!("verdicts[{i}].observed"), c.observed, a.observed);
            self.scalar(&format!("verdicts[{i}].limit"), c.limit, a.limit);
            self.scalar(&format!("verdicts[{i}].allowance"), c.allowance, a.allowance);
            if !a.pass {
                self.fail(format!("verdicts[{i}]: bound {:?} ({}) does not hold", a.bound, a.norm));
            }
        }
    }
}

/// Recomputes every claim of `file`; returns the list of mismatches.
pub fn verify_certificate(file: &CertificateFile, norm: &Norm) -> Result<(), Vec<String>> {
    let tau = file.tolerance;
    let mut check = Checker {
        tau: if tau.is_finite() && tau >= 0.0 { tau } else { 0.0 },
        mismatches: Vec::new(),
    };
    if !(tau.is_finite() && tau >= 0.0) {
        check.fail(format!("invalid tolerance {tau}"));
    }
    let hash = file.instance.hash();
    if hash != file.input_hash {
        check.fail(format!("input_hash: claimed {}, recomputed {hash}", file.input_hash));
    }
    let vectors = &file.instance.vectors;
    match &file.result {
        CertificateBody::Balance(cert) => check_balance(&mut check, cert, norm, vectors, file),
        CertificateBody::Stream(out) => check_stream(&mut check, out, norm, vectors, file),
    }
    if check.mismatches.is_empty() {
        Ok(())
    } else {
        Err(check.mismatches)
    }
}

fn check_balance(
    check: &mut Checker,
    cert: &BalanceCertificate,
    norm: &Norm,
    vectors: &[Vec2],
    file: &CertificateFile,
) {
    let n = vectors.len();
    let o = &cert.ordering;
    for (what, len) in [
        ("ordering.perm", o.perm.len()),
        ("ordering.flips", o.flips.len()),
        ("ordering.ordered", o.ordered.len()),
        ("signs_ordered", cert.signs_ordered.len()),
        ("signs_original", cert.signs_original.len()),
        ("prefix_sums", cert.prefix_sums.len()),
        ("prefix_norms", cert.prefix_norms.len()),
    ] {
        if len != n {
            check.fail(format!("{what}: {len} entries, expected {n}"));
            return;
        }
    }
    let mut seen = vec![false; n];
    for &i in &o.perm {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            check.fail(format!("ordering.perm is not a permutation of 0..{n}"));
            return;
        }
    }
    for (j, &i) in o.perm.iter().enumerate() {
        if o.ordered[j] != o.flips[i].apply(vectors[i]) {
            check.fail(format!("ordering.ordered[{j}] is not the flipped input {i}"));
        }
        if cert.signs_original[i] != cert.signs_ordered[j] * o.flips[i] {
            check.fail(format!("signs_original[{i}] disagrees with signs_ordered[{j}]"));
        }
    }
    for (what, claimed, expected) in [
        ("bound_total", cert.bound_total, 1.0),
        ("bound_odd_prefix", cert.bound_odd_prefix, 1.0),
        ("bound_all_prefix", cert.bound_all_prefix, 2.0),
        ("tolerance", cert.tolerance, file.tolerance),
    ] {
        if claimed != expected {
            check.fail(format!("{what}: claimed {claimed}, expected {expected}"));
        }
    }

    let mut recomputed = cert.clone();
    recomputed.prefix_sums = prefix_sums(&o.ordered, &cert.signs_ordered);
    recomputed.prefix_norms = recomputed.prefix_sums.iter().map(|&p| norm.eval(p)).collect();
    recomputed.signed_sum = signed_sum(vectors, &cert.signs_original);
    recomputed.admission_slack = vectors.iter().map(|&v| (norm.eval(v) - 1.0).abs()).sum();
    check.points("prefix_sums", &cert.prefix_sums, &recomputed.prefix_sums);
    check.scalars("prefix_norms", &cert.prefix_norms, &recomputed.prefix_norms);
    check.point("signed_sum", cert.signed_sum, recomputed.signed_sum);
    check.point("signed_sum vs last prefix", recomputed.signed_sum, recomputed.prefix_sums[n - 1]);
    check.scalar("admission_slack", cert.admission_slack, recomputed.admission_slack);

    let expected_use = if cert.hull.is_some() {
        NormUsed::InputAndHull
    } else {
        NormUsed::Input
    };
    if cert.norm_used != expected_use {
        check.fail(format!("norm_used: claimed {:?}, expected {expected_use:?}", cert.norm_used));
    }
    if let (Some(claimed), Some(h)) = (&cert.hull, recomputed.hull.as_mut()) {
        match hull_of_plus_minus(vectors) {
            Ok(polygon) => {
                if polygon.vertices() != claimed.polygon.as_slice() {
                    check.fail("hull.polygon differs from the hull of ±V".into());
                }
                let hull_norm = polygon_norm(polygon);
                h.prefix_norms = recomputed.prefix_sums.iter().map(|&p| hull_norm.eval(p)).collect();
                h.odd_prefix_points = odd_prefix_points(&recomputed.ordering);
                h.odd_point_norms = h.odd_prefix_points.iter().map(|&p| hull_norm.eval(p)).collect();
                h.admission_slack = vectors.iter().map(|&v| (hull_norm.eval(v) - 1.0).abs()).sum();
                check.scalars("hull.prefix_norms", &claimed.prefix_norms, &h.prefix_norms);
                check.points("hull.odd_prefix_points", &claimed.odd_prefix_points, &h.odd_prefix_points);
                check.scalars("hull.odd_point_norms", &claimed.odd_point_norms, &h.odd_point_norms);
                check.scalar("hull.admission_slack", claimed.admission_slack, h.admission_slack);
            }
            Err(e) => check.fail(format!("hull check claimed but hull fails: {e}")),
        }
    }
    check.verdicts(&file.verdicts, &recomputed.verdicts());
}

fn check_stream(
    check: &mut Checker,
    out: &StreamOutcome,
    norm: &Norm,
    vectors: &[Vec2],
    file: &CertificateFile,
) {
    let n = vectors.len();
    if out.signs.len() != n {
        check.fail(format!("signs: {} entries, expected {n}", out.signs.len()));
        return;
    }
    if out.signs[0] != Sign::Plus {
        check.fail("signs[0] must be +1".into());
    }
    if out.bound_odd_prefix != 2.0 {
        check.fail(format!("bound_odd_prefix: claimed {}, expected 2", out.bound_odd_prefix));
    }
    if out.tolerance != file.tolerance {
        check.fail(format!("tolerance: claimed {}, expected {}", out.tolerance, file.tolerance));
    }
    let prefix = prefix_sums(vectors, &out.signs);
    let odd_end = if n % 2 == 1 { n } else { n - 1 };
    let mut recomputed = out.clone();
    recomputed.odd_prefix_sums = prefix[..odd_end].iter().step_by(2).copied().collect();
    recomputed.odd_prefix_norms = recomputed.odd_prefix_sums.iter().map(|&s| norm.eval(s)).collect();
    recomputed.admission_slack = vectors.iter().map(|&v| (norm.eval(v) - 1.0).abs()).sum();
    recomputed.trailing = (odd_end < n).then(|| TrailingSum {
        sum: prefix[n - 1],
        norm: norm.eval(prefix[n - 1]),
    });
    check.points("odd_prefix_sums", &out.odd_prefix_sums, &recomputed.odd_prefix_sums);
    check.scalars("odd_prefix_norms", &out.odd_prefix_norms, &recomputed.odd_prefix_norms);
    check.scalar("admission_slack", out.admission_slack, recomputed.admission_slack);
    match (&out.trailing, &recomputed.trailing) {
        (None, None) => {}
        (Some(c), Some(a)) => {
            check.point("trailing.sum", c.sum, a.sum);
            check.scalar("trailing.norm", c.norm, a.norm);
        }
        _ => check.fail("trailing: presence disagrees with sequence parity".into()),
    }
    check.verdicts(&file.verdicts, &[stream_verdict(&recomputed)]);
}
