//! Line fitting on edge chains.
//!
//! Each edge point carries two observations: its coordinates and its
//! level-line. A point supports a line when it is close to it *and* its
//! level-line runs along it. Segments are seeded by a small total least
//! squares fit, grown point by point, and finally refined by minimizing a
//! clamped loss over both residuals:
//!
//! ```text
//! loss = sum_i min(d_i / T_d, 1) + rho * min(theta_i / T_a, 1)
//! ```
//!
//! where `d_i` is the point-to-line distance and `theta_i` the angle between
//! the level-line and the line direction. Clamping caps the influence of
//! outliers.

mod extract;
mod nelder_mead;
mod refine;
mod tls;

pub use extract::{extract_fitted, extract_from_points, extract_segments, FittedSegment};
pub use nelder_mead::{Minimum, NelderMead};
pub use refine::refine_line;
pub use tls::{fit_line_tls, Moments};

use crate::error::{Error, Result};
use crate::params::DetectorParams;

/// Implicit line `a x + b y + c = 0` with `a^2 + b^2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl LineParams {
    /// Normalizes arbitrary coefficients; the sign is chosen so that `a > 0`,
    /// or `a == 0` and `b > 0`.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let n = a.hypot(b);
        if !(n.is_finite() && n > 0.0 && c.is_finite()) {
            return Err(Error::DegenerateInput(format!("line ({a}, {b}, {c})")));
        }
        Ok(Self::canonical(a / n, b / n, c / n))
    }

    /// Line with unit normal `(cos phi, sin phi)` and offset `c`.
    pub fn from_angle(phi: f64, c: f64) -> Self {
        Self::canonical(phi.cos(), phi.sin(), c)
    }

    /// Line through two distinct points.
    pub fn through(p: [f64; 2], q: [f64; 2]) -> Result<Self> {
        let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
        let (a, b) = (-dy, dx);
        Self::new(a, b, -(a * p[0] + b * p[1]))
    }

    fn canonical(a: f64, b: f64, c: f64) -> Self {
        let flip = a < 0.0 || (a == 0.0 && b < 0.0);
        let s = if flip { -1.0 } else { 1.0 };
        // adding 0.0 turns -0.0 into 0.0
        Self {
            a: s * a + 0.0,
            b: s * b + 0.0,
            c: s * c + 0.0,
        }
    }

    /// Unit direction vector along the line.
    pub fn direction(&self) -> [f64; 2] {
        [-self.b, self.a]
    }

    /// Signed residual `a x + b y + c`.
    #[inline]
    pub fn residual(&self, p: [f64; 2]) -> f64 {
        self.a * p[0] + self.b * p[1] + self.c
    }

    /// Orthogonal projection of `p` onto the line.
    pub fn project(&self, p: [f64; 2]) -> [f64; 2] {
        let r = self.residual(p) / (self.a * self.a + self.b * self.b);
        [p[0] - r * self.a, p[1] - r * self.b]
    }
}

/// Perpendicular distance from `(x, y)` to the line.
pub fn point_line_distance(line: &LineParams, x: f64, y: f64) -> f64 {
    (line.a * x + line.b * y + line.c).abs() / line.a.hypot(line.b)
}

/// Angle in degrees, in `[0, 90]`, between the level-line `(u, v)` and the
/// line direction. Opposite level-lines give the same angle.
pub fn level_line_angle_error(line: &LineParams, u: f64, v: f64) -> Result<f64> {
    let n = u.hypot(v);
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::Domain(format!(
            "level-line ({u}, {v}) has no direction"
        )));
    }
    Ok(angle_error_deg(line, u, v))
}

#[inline]
pub(crate) fn angle_error_deg(line: &LineParams, u: f64, v: f64) -> f64 {
    let cos = (-line.b * u + line.a * v).abs() / (line.a.hypot(line.b) * u.hypot(v));
    cos.min(1.0).acos().to_degrees()
}

/// False for zero or NaN vectors.
pub(crate) fn has_direction(l: &[f64; 2]) -> bool {
    l[0].hypot(l[1]) > 0.0
}

/// Sum over points of the clamped distance term plus `rho` times the clamped
/// angle term.
pub fn clamped_loss(
    points: &[[f64; 2]],
    levels: &[[f64; 2]],
    line: &LineParams,
    params: &DetectorParams,
) -> Result<f64> {
    if points.len() != levels.len() {
        return Err(Error::Contract(format!(
            "{} points but {} level-lines",
            points.len(),
            levels.len()
        )));
    }
    if points.is_empty() {
        return Err(Error::Contract("loss of an empty point set".into()));
    }
    if let Some(l) = levels.iter().find(|l| !has_direction(l)) {
        return Err(Error::Domain(format!("level-line {l:?} has no direction")));
    }
    Ok(LossTerms::new(points, levels, params).eval(line))
}

/// Precomputed inputs of the clamped loss.
pub(crate) struct LossTerms<'a> {
    points: &'a [[f64; 2]],
    levels: Vec<[f64; 2]>,
    inv_dist: f64,
    inv_angle: f64,
    cos_angle: f64,
    rho: f64,
}

impl<'a> LossTerms<'a> {
    pub(crate) fn new(
        points: &'a [[f64; 2]],
        levels: &[[f64; 2]],
        params: &DetectorParams,
    ) -> Self {
        let levels = levels
            .iter()
            .map(|l| {
                let n = l[0].hypot(l[1]);
                [l[0] / n, l[1] / n]
            })
            .collect();
        Self {
            points,
            levels,
            inv_dist: 1.0 / params.dist_thresh,
            inv_angle: 1.0 / params.angle_thresh,
            cos_angle: params.angle_thresh.to_radians().cos(),
            rho: params.rho,
        }
    }

    pub(crate) fn eval(&self, line: &LineParams) -> f64 {
        let norm = line.a.hypot(line.b);
        let (a, b, c) = (line.a / norm, line.b / norm, line.c / norm);
        let mut sum = 0.0;
        for (p, l) in self.points.iter().zip(&self.levels) {
            let d = (a * p[0] + b * p[1] + c).abs();
            sum += (d * self.inv_dist).min(1.0);
            let cos = (-b * l[0] + a * l[1]).abs();
            let angle_term = if cos <= self.cos_angle {
                1.0
            } else {
                (cos.min(1.0).acos().to_degrees() * self.inv_angle).min(1.0)
            };
            sum += self.rho * angle_term;
        }
        sum
    }
}

/// Final line segment.
#[derive(Clone, Debug, PartialEq)]
pub struct LineSegment {
    pub line: LineParams,
    pub p1: [f64; 2],
    pub p2: [f64; 2],
    /// Number of chain points passing both checks.
    pub support: usize,
    /// Mean point-to-line distance of the supporting points (px).
    pub mean_dist: f64,
    /// Mean level-line angle error of the supporting points (degrees).
    pub mean_angle: f64,
}

impl LineSegment {
    /// Segment between two points, with the line fitted through them.
    pub fn from_endpoints(p1: [f64; 2], p2: [f64; 2]) -> Result<Self> {
        Ok(Self {
            line: LineParams::through(p1, p2)?,
            p1,
            p2,
            support: 0,
            mean_dist: 0.0,
            mean_angle: 0.0,
        })
    }

    pub fn length(&self) -> f64 {
        (self.p2[0] - self.p1[0]).hypot(self.p2[1] - self.p1[1])
    }

    pub fn midpoint(&self) -> [f64; 2] {
        [
            (self.p1[0] + self.p2[0]) / 2.0,
            (self.p1[1] + self.p2[1]) / 2.0,
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn distance_examples() {
        let vertical = LineParams::new(1.0, 0.0, 0.0).unwrap();
        assert_eq!(point_line_distance(&vertical, 3.0, 5.0), 3.0);
        assert_eq!(point_line_distance(&vertical, 0.0, 17.0), 0.0);
        let diag = LineParams { a: S, b: S, c: 0.0 };
        assert!((point_line_distance(&diag, 1.0, 1.0) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn angle_examples() {
        let vertical = LineParams::new(1.0, 0.0, 0.0).unwrap();
        assert!(level_line_angle_error(&vertical, 0.0, 1.0).unwrap().abs() < 1e-12);
        assert!((level_line_angle_error(&vertical, 1.0, 0.0).unwrap() - 90.0).abs() < 1e-12);
        let diag = LineParams {
            a: -S,
            b: S,
            c: 0.0,
        };
        assert!((level_line_angle_error(&diag, 1.0, 0.0).unwrap() - 45.0).abs() < 1e-6);
        assert!(matches!(
            level_line_angle_error(&vertical, 0.0, 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn loss_examples() {
        let p = DetectorParams::default();
        let horizontal = LineParams::new(0.0, 1.0, 0.0).unwrap();
        let on_line = [[0.0, 0.0], [5.0, 0.0]];
        let along = [[1.0, 0.0], [-1.0, 0.0]];
        assert_eq!(
            clamped_loss(&on_line, &along, &horizontal, &p).unwrap(),
            0.0
        );

        let far = clamped_loss(&[[0.0, 3.0]], &[[0.0, 1.0]], &horizontal, &p).unwrap();
        assert!((far - 3.0).abs() < 1e-12);

        let t = 10f64.to_radians();
        let mid = clamped_loss(&[[2.0, 1.5]], &[[t.cos(), t.sin()]], &horizontal, &p).unwrap();
        assert!((mid - 1.5).abs() < 1e-9, "{mid}");

        assert!(matches!(
            clamped_loss(&on_line, &along[..1], &horizontal, &p),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn canonical_sign() {
        let l = LineParams::new(-2.0, 0.0, 4.0).unwrap();
        assert_eq!((l.a, l.b, l.c), (1.0, 0.0, -2.0));
        let l = LineParams::new(0.0, -3.0, 3.0).unwrap();
        assert_eq!((l.a, l.b, l.c), (0.0, 1.0, -1.0));
        assert!(LineParams::new(0.0, 0.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn angle_error_ignores_level_line_sign(phi in 0.0f64..6.3, u in -1.0f64..1.0, v in -1.0f64..1.0) {
            prop_assume!(u.hypot(v) > 1e-6);
            let l = LineParams::from_angle(phi, 0.0);
            let a = level_line_angle_error(&l, u, v).unwrap();
            let b = level_line_angle_error(&l, -u, -v).unwrap();
            prop_assert_eq!(a, b);
            prop_assert!((0.0..=90.0).contains(&a));
        }

        #[test]
        fn projection_is_orthogonal(phi in 0.0f64..6.3, c in -50.0f64..50.0, x in -100.0f64..100.0, y in -100.0f64..100.0) {
            let l = LineParams::from_angle(phi, c);
            let q = l.project([x, y]);
            prop_assert!(l.residual(q).abs() < 1e-9);
            let d = l.direction();
            prop_assert!(((x - q[0]) * d[0] + (y - q[1]) * d[1]).abs() < 1e-9);
        }
    }
}
