use super::LineParams;
use crate::error::{Error, Result};

/// Running first and second moments of a point set, for O(1) refits while a
/// segment grows. Coordinates are accumulated relative to the first point.
#[derive(Clone, Debug, Default)]
pub struct Moments {
    origin: [f64; 2],
    n: f64,
    sx: f64,
    sy: f64,
    sxx: f64,
    sxy: f64,
    syy: f64,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_points(points: &[[f64; 2]]) -> Self {
        let mut m = Self::new();
        points.iter().for_each(|p| m.add(*p));
        m
    }

    pub fn add(&mut self, p: [f64; 2]) {
        if self.n == 0.0 {
            self.origin = p;
        }
        let (x, y) = (p[0] - self.origin[0], p[1] - self.origin[1]);
        self.n += 1.0;
        self.sx += x;
        self.sy += y;
        self.sxx += x * x;
        self.sxy += x * y;
        self.syy += y * y;
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0.0
    }

    /// Total least squares line: the normal is the eigenvector of the centered
    /// scatter matrix with the smaller eigenvalue.
    pub fn fit(&self) -> Result<LineParams> {
        if self.n < 2.0 {
            return Err(Error::DegenerateInput("need at least two points".into()));
        }
        let (mx, my) = (self.sx / self.n, self.sy / self.n);
        let cxx = self.sxx - self.sx * mx;
        let cyy = self.syy - self.sy * my;
        let cxy = self.sxy - self.sx * my;
        if cxx + cyy <= 0.0 {
            return Err(Error::DegenerateInput("all points coincide".into()));
        }
        // Major axis angle of the scatter ellipse; the normal is perpendicular.
        let theta = 0.5 * f64::atan2(2.0 * cxy, cxx - cyy);
        let (a, b) = (-theta.sin(), theta.cos());
        let (cx, cy) = (mx + self.origin[0], my + self.origin[1]);
        LineParams::new(a, b, -(a * cx + b * cy))
    }
}

/// Orthogonal (total) least squares line through `points`.
pub fn fit_line_tls(points: &[[f64; 2]]) -> Result<LineParams> {
    let Some(first) = points.first() else {
        return Err(Error::DegenerateInput("no points".into()));
    };
    if points.iter().all(|p| p == first) {
        return Err(Error::DegenerateInput(
            "fewer than two distinct points".into(),
        ));
    }
    Moments::from_points(points).fit()
}
