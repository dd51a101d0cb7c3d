//! Repeatability of detections between two views related by a homography.
//!
//! A reference segment and a test segment match when each, mapped into the
//! other view, lies close to the other in position, orientation and extent.
//! Matches are one-to-one; closer pairs are claimed first.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::segment_fitting::{LineParams, LineSegment};

/// Segments shorter than this (px) are left out of evaluation.
pub const EVAL_MIN_LENGTH: f64 = 15.0;

const DET_EPS: f64 = 1e-12;
const W_EPS: f64 = 1e-9;

/// Projective map between two images, stored with `h[2][2] = 1` when possible.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Homography {
    h: Matrix3<f64>,
}

impl Homography {
    pub fn new(rows: [[f64; 3]; 3]) -> Result<Self> {
        let mut h = Matrix3::from_fn(|r, c| rows[r][c]);
        if h.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("homography has non-finite entries".into()));
        }
        if h[(2, 2)] != 0.0 {
            h /= h[(2, 2)];
        }
        if h.determinant().abs() <= DET_EPS {
            return Err(Error::SingularMatrix);
        }
        Ok(Self { h })
    }

    pub fn identity() -> Self {
        Self {
            h: Matrix3::identity(),
        }
    }

    pub fn translation(tx: f64, ty: f64) -> Self {
        Self {
            h: Matrix3::new(1.0, 0.0, tx, 0.0, 1.0, ty, 0.0, 0.0, 1.0),
        }
    }

    /// Rotation by `angle` radians about `center`, followed by a translation.
    pub fn rigid(angle: f64, center: [f64; 2], t: [f64; 2]) -> Self {
        let (s, c) = angle.sin_cos();
        let tx = center[0] - c * center[0] + s * center[1] + t[0];
        let ty = center[1] - s * center[0] - c * center[1] + t[1];
        Self {
            h: Matrix3::new(c, -s, tx, s, c, ty, 0.0, 0.0, 1.0),
        }
    }

    pub fn rows(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|r| std::array::from_fn(|c| self.h[(r, c)]))
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self.h.try_inverse().ok_or(Error::SingularMatrix)?;
        Self::new(std::array::from_fn(|r| {
            std::array::from_fn(|c| inv[(r, c)])
        }))
    }

    /// Maps a point; fails when it lands on the line at infinity.
    pub fn apply(&self, p: [f64; 2]) -> Result<[f64; 2]> {
        let h = &self.h;
        let w = h[(2, 0)] * p[0] + h[(2, 1)] * p[1] + h[(2, 2)];
        if w.abs() <= W_EPS {
            return Err(Error::Projection);
        }
        Ok([
            (h[(0, 0)] * p[0] + h[(0, 1)] * p[1] + h[(0, 2)]) / w,
            (h[(1, 0)] * p[0] + h[(1, 1)] * p[1] + h[(1, 2)]) / w,
        ])
    }
}

/// Matching thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Maximum endpoint-to-line distance (px).
    pub dist_thresh: f64,
    /// Maximum angle between the segments (degrees).
    pub angle_thresh: f64,
    /// Minimum overlap ratio.
    pub overlap_thresh: f64,
}

impl EvalConfig {
    pub fn strict() -> Self {
        Self {
            dist_thresh: 1.5,
            angle_thresh: 5.0,
            overlap_thresh: 0.75,
        }
    }

    pub fn loose() -> Self {
        Self {
            dist_thresh: 3.0,
            angle_thresh: 10.0,
            overlap_thresh: 0.75,
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "strict" => Some(Self::strict()),
            "loose" => Some(Self::loose()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.dist_thresh > 0.0
            && self.angle_thresh > 0.0
            && self.overlap_thresh > 0.0
            && self.overlap_thresh <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParam(format!(
                "evaluation thresholds out of range: {self:?}"
            )))
        }
    }

    fn accepts(&self, m: &PairMetrics) -> bool {
        m.distance <= self.dist_thresh
            && m.angle <= self.angle_thresh
            && m.overlap >= self.overlap_thresh
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub n_r: usize,
    pub n_t: usize,
    pub n_m: usize,
    pub rep: f64,
    /// Matched (reference index, test index) pairs.
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairMetrics {
    pub distance: f64,
    pub angle: f64,
    pub overlap: f64,
}

pub fn repeatability(n_m: usize, n_r: usize, n_t: usize) -> f64 {
    if n_r == 0 || n_t == 0 {
        return 0.0;
    }
    n_m as f64 / 2.0 * (1.0 / n_r as f64 + 1.0 / n_t as f64)
}

/// Maps both endpoints through `h` and refits the line through them.
pub fn project_segment(h: &Homography, seg: &LineSegment) -> Result<LineSegment> {
    let p1 = h.apply(seg.p1)?;
    let p2 = h.apply(seg.p2)?;
    Ok(LineSegment {
        line: LineParams::through(p1, p2)?,
        p1,
        p2,
        ..seg.clone()
    })
}

/// Distance, angle and overlap of `p` measured against `q`.
pub fn segment_pair_metrics(p: &LineSegment, q: &LineSegment) -> Result<PairMetrics> {
    let (lp, lq) = (p.length(), q.length());
    if !(lp > 0.0 && lq > 0.0) {
        return Err(Error::Contract("zero-length segment".into()));
    }
    let qline = LineParams::through(q.p1, q.p2)?;
    let distance = qline.residual(p.p1).abs().max(qline.residual(p.p2).abs());

    let dp = [(p.p2[0] - p.p1[0]) / lp, (p.p2[1] - p.p1[1]) / lp];
    let dq = [(q.p2[0] - q.p1[0]) / lq, (q.p2[1] - q.p1[1]) / lq];
    let angle = (dp[0] * dq[0] + dp[1] * dq[1])
        .abs()
        .min(1.0)
        .acos()
        .to_degrees();

    let along = |x: [f64; 2]| (x[0] - q.p1[0]) * dq[0] + (x[1] - q.p1[1]) * dq[1];
    let (t1, t2) = (along(p.p1), along(p.p2));
    let shared = (t1.max(t2).min(lq) - t1.min(t2).max(0.0)).max(0.0);
    let overlap = (shared / lp.min(lq)).clamp(0.0, 1.0);
    Ok(PairMetrics {
        distance,
        angle,
        overlap,
    })
}

/// Drops segments shorter than `min_length`.
pub fn filter_min_length(segments: &[LineSegment], min_length: f64) -> Vec<LineSegment> {
    segments
        .iter()
        .filter(|s| s.length() >= min_length)
        .cloned()
        .collect()
}

fn midpoint_gap(a: &LineSegment, b: &LineSegment) -> f64 {
    let (ma, mb) = (a.midpoint(), b.midpoint());
    (ma[0] - mb[0]).hypot(ma[1] - mb[1])
}

/// All pairs passing the thresholds in both directions, with their
/// symmetric closeness: the midpoint gap measured in each view, summed.
pub fn qualifying_pairs(
    reference: &[LineSegment],
    test: &[LineSegment],
    h: &Homography,
    cfg: &EvalConfig,
) -> Result<Vec<(usize, usize, f64)>> {
    let h_inv = h.inverse()?;
    let fwd: Vec<Option<LineSegment>> = reference
        .iter()
        .map(|r| project_segment(h, r).ok())
        .collect();
    let back: Vec<Option<LineSegment>> = test
        .iter()
        .map(|t| project_segment(&h_inv, t).ok())
        .collect();

    let passes = |p: &LineSegment, q: &LineSegment| {
        segment_pair_metrics(p, q).is_ok_and(|m| cfg.accepts(&m))
    };
    let mut out = Vec::new();
    for (i, (r, hr)) in reference.iter().zip(&fwd).enumerate() {
        let Some(hr) = hr else { continue };
        for (j, (t, ht)) in test.iter().zip(&back).enumerate() {
            let Some(ht) = ht else { continue };
            if passes(hr, t) && passes(ht, r) {
                out.push((i, j, midpoint_gap(hr, t) + midpoint_gap(ht, r)));
            }
        }
    }
    Ok(out)
}

/// One-to-one matching of `reference` against `test`, where `h` maps the
/// reference view onto the test view.
pub fn match_segments(
    reference: &[LineSegment],
    test: &[LineSegment],
    h: &Homography,
    cfg: &EvalConfig,
) -> Result<MatchReport> {
    cfg.validate()?;
    let mut cand = qualifying_pairs(reference, test, h, cfg)?;
    cand.sort_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));

    let mut used_r = vec![false; reference.len()];
    let mut used_t = vec![false; test.len()];
    let mut pairs = Vec::new();
    for (i, j, _) in cand {
        if !used_r[i] && !used_t[j] {
            used_r[i] = true;
            used_t[j] = true;
            pairs.push((i, j));
        }
    }
    pairs.sort_unstable();
    let (n_r, n_t, n_m) = (reference.len(), test.len(), pairs.len());
    Ok(MatchReport {
        n_r,
        n_t,
        n_m,
        rep: repeatability(n_m, n_r, n_t),
        pairs,
    })
}
