use std::ops::RangeInclusive;

use super::{angle_error_deg, fit_line_tls, refine_line, LineParams, LineSegment, Moments};
use crate::edge_drawing::{ChainKind, EdgeChain};
use crate::gradient_field::GradientField;
use crate::params::DetectorParams;

/// Segment together with the chain indices it consumed.
#[derive(Clone, Debug, PartialEq)]
pub struct FittedSegment {
    pub segment: LineSegment,
    pub span: RangeInclusive<usize>,
}

/// Extracts segments from one refined chain, using the field's level-lines.
pub fn extract_segments(
    chain: &EdgeChain,
    field: &GradientField,
    params: &DetectorParams,
) -> Vec<LineSegment> {
    extract_fitted(chain, field, params)
        .into_iter()
        .map(|f| f.segment)
        .collect()
}

/// Like [`extract_segments`], keeping the consumed chain spans.
///
/// Loops are scanned once from their start. The last segment may keep
/// growing across the seam into the points before the first segment's
/// first inlier, which would otherwise be lost to both segments; span
/// indices past the chain end then wrap around to its start.
pub fn extract_fitted(
    chain: &EdgeChain,
    field: &GradientField,
    params: &DetectorParams,
) -> Vec<FittedSegment> {
    let mut points: Vec<[f64; 2]> = chain
        .points
        .iter()
        .map(|&(x, y)| [x as f64, y as f64])
        .collect();
    let mut levels: Vec<[f64; 2]> = chain
        .points
        .iter()
        .map(|&(x, y)| field.level(x, y))
        .collect();
    let n = points.len();
    let found = scan(&points, &levels, params, n);
    if chain.kind != ChainKind::Loop {
        return found;
    }
    let ck = Checker {
        points: &points,
        levels: &levels,
        params,
    };
    let head = found
        .first()
        .and_then(|f| ck.inliers(&f.segment.line, f.span.clone()).first().copied())
        .unwrap_or(0);
    if head == 0 {
        return found;
    }
    points.extend_from_within(..head);
    levels.extend_from_within(..head);
    scan(&points, &levels, params, n)
}

struct Checker<'a> {
    points: &'a [[f64; 2]],
    levels: &'a [[f64; 2]],
    params: &'a DetectorParams,
}

impl Checker<'_> {
    fn is_inlier(&self, line: &LineParams, i: usize) -> bool {
        let [u, v] = self.levels[i];
        line.residual(self.points[i]).abs() < self.params.dist_thresh
            && (!self.params.angle_check || angle_error_deg(line, u, v) < self.params.angle_thresh)
    }

    fn inliers(&self, line: &LineParams, range: impl Iterator<Item = usize>) -> Vec<usize> {
        range.filter(|&i| self.is_inlier(line, i)).collect()
    }

    fn gather(&self, idx: &[usize]) -> (Vec<[f64; 2]>, Vec<[f64; 2]>) {
        idx.iter()
            .map(|&i| (self.points[i], self.levels[i]))
            .unzip()
    }
}

/// Progressive extraction over an ordered point list with per-point
/// level-lines. Lengths must match; a mismatch yields no segments.
pub fn extract_from_points(
    points: &[[f64; 2]],
    levels: &[[f64; 2]],
    params: &DetectorParams,
) -> Vec<FittedSegment> {
    scan(points, levels, params, points.len())
}

/// Segments may only start at indices below `start_limit`.
fn scan(
    points: &[[f64; 2]],
    levels: &[[f64; 2]],
    params: &DetectorParams,
    start_limit: usize,
) -> Vec<FittedSegment> {
    let mut out = Vec::new();
    let n = points.len();
    let w = params.init_window;
    if n != levels.len() || w < 2 {
        return out;
    }
    let ck = Checker {
        points,
        levels,
        params,
    };

    let mut start = 0;
    while start + w <= n && start < start_limit {
        let window = start..start + w;
        let Ok(mut line) = fit_line_tls(&points[window.clone()]) else {
            start += 1;
            continue;
        };
        if (ck.inliers(&line, window.clone()).len() as f64) < params.inlier_ratio * w as f64 {
            start += 1;
            continue;
        }
        if params.init_refine {
            line = refine_line(
                &points[window.clone()],
                &levels[window.clone()],
                line,
                params,
            );
        }
        let mut accepted = ck.inliers(&line, window.clone());
        if accepted.len() < 2 {
            start += 1;
            continue;
        }

        let mut moments = Moments::new();
        accepted.iter().for_each(|&i| moments.add(points[i]));
        let mut rejects = 0;
        let mut i = window.end;
        while i < n && rejects < params.max_consecutive_rejects {
            if ck.is_inlier(&line, i) {
                accepted.push(i);
                moments.add(points[i]);
                if let Ok(l) = moments.fit() {
                    line = l;
                }
                rejects = 0;
            } else {
                rejects += 1;
            }
            i += 1;
        }

        let (pts, lv) = ck.gather(&accepted);
        let line = refine_line(&pts, &lv, line, params);
        let last = *accepted.last().expect("at least two accepted points");
        let span = start..=last;
        if let Some(segment) = build_segment(&ck, line, span.clone()) {
            out.push(FittedSegment { segment, span });
        }
        start = last + 1;
    }
    out
}

fn build_segment(
    ck: &Checker,
    line: LineParams,
    span: RangeInclusive<usize>,
) -> Option<LineSegment> {
    let spanned = span.end() - span.start() + 1;
    let inliers = ck.inliers(&line, span);
    if inliers.len() < 2 || (inliers.len() as f64) < ck.params.inlier_ratio * spanned as f64 {
        return None;
    }
    let p1 = line.project(ck.points[inliers[0]]);
    let p2 = line.project(ck.points[inliers[inliers.len() - 1]]);
    let n = inliers.len() as f64;
    let (mut dist, mut angle) = (0.0, 0.0);
    for &i in &inliers {
        let [u, v] = ck.levels[i];
        dist += line.residual(ck.points[i]).abs();
        angle += angle_error_deg(&line, u, v);
    }
    let segment = LineSegment {
        line,
        p1,
        p2,
        support: inliers.len(),
        mean_dist: dist / n,
        mean_angle: angle / n,
    };
    (segment.length() >= ck.params.min_length).then_some(segment)
}
