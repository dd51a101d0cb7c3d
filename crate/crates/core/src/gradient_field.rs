//! Level-line field, direction quantization and anchor extraction.
//!
//! The level-line of a pixel is the unit vector perpendicular to its gradient.
//! Angles are measured in a y-up frame (`theta = atan2(-gy, gx)`) and the
//! resulting vectors are expressed back in image coordinates (y down):
//!
//! ```text
//! u =  cos(theta + pi/2)
//! v = -sin(theta + pi/2)
//! ```

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::imaging::RawGradients;

/// Unit pixel steps of the eight compass directions in image coordinates,
/// indexed counterclockwise from East in the y-up frame.
pub const COMPASS: [(i32, i32); 8] = [
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

/// Per-pixel magnitude, level-line and quantized direction.
#[derive(Clone, Debug)]
pub struct GradientField {
    width: usize,
    height: usize,
    mag: Vec<f64>,
    level: Vec<[f64; 2]>,
    dir: Vec<u8>,
    valid: Vec<bool>,
}

impl GradientField {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    /// Normalized gradient magnitude in `[0, 1]`.
    #[inline]
    pub fn mag(&self, x: usize, y: usize) -> f64 {
        self.mag[self.index(x, y)]
    }

    /// Level-line unit vector `(u, v)`; `(0, 0)` where the gradient vanishes.
    #[inline]
    pub fn level(&self, x: usize, y: usize) -> [f64; 2] {
        self.level[self.index(x, y)]
    }

    #[inline]
    pub fn dir(&self, x: usize, y: usize) -> u8 {
        self.dir[self.index(x, y)]
    }

    #[inline]
    pub fn is_valid(&self, x: usize, y: usize) -> bool {
        self.valid[self.index(x, y)]
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }
}

/// Builds the level-line field from raw Sobel responses.
///
/// Magnitudes are normalized by the image maximum, so `grad_thresh` is a
/// fraction of the strongest gradient.
pub fn build_gradient_field(raw: &RawGradients, grad_thresh: f64) -> GradientField {
    let n = raw.width * raw.height;
    let norms: Vec<f64> = raw
        .gx
        .iter()
        .zip(&raw.gy)
        .map(|(gx, gy)| gx.hypot(*gy))
        .collect();
    let max = norms.iter().cloned().fold(0.0, f64::max);

    let mut mag = vec![0.0; n];
    let mut level = vec![[0.0; 2]; n];
    let mut dir = vec![0u8; n];
    let mut valid = vec![false; n];
    for i in 0..n {
        let norm = norms[i];
        if norm == 0.0 {
            continue;
        }
        mag[i] = if max > 0.0 { norm / max } else { 0.0 };
        // With sin(theta) = -gy/|g| and cos(theta) = gx/|g|:
        // cos(theta + pi/2) = -sin(theta), -sin(theta + pi/2) = -cos(theta).
        let u = raw.gy[i] / norm;
        let v = -raw.gx[i] / norm;
        level[i] = [u, v];
        dir[i] = quantize(u, v);
        valid[i] = mag[i] >= grad_thresh;
    }
    GradientField {
        width: raw.width,
        height: raw.height,
        mag,
        level,
        dir,
        valid,
    }
}

/// Quantizes a direction into one of eight 45-degree bins.
///
/// Bin `k` is centered on `k * 45` degrees in the y-up frame, counterclockwise
/// from East. Angles exactly on a bin boundary go to the lower index.
pub fn quantize_direction(u: f64, v: f64) -> Result<u8> {
    if !(u.is_finite() && v.is_finite()) || (u == 0.0 && v == 0.0) {
        return Err(Error::Domain(format!(
            "cannot quantize direction ({u}, {v})"
        )));
    }
    Ok(quantize(u, v))
}

#[inline]
pub(crate) fn quantize(u: f64, v: f64) -> u8 {
    let mut deg = (-v).atan2(u).to_degrees();
    if deg < 0.0 {
        deg += 360.0;
    }
    bin_of_degrees(deg)
}

/// Bin of an angle in `[0, 360)`; bin `k` covers `(45k - 22.5, 45k + 22.5]`,
/// except that 337.5 (between bins 7 and 0) goes to bin 0.
#[inline]
fn bin_of_degrees(deg: f64) -> u8 {
    if deg == 337.5 {
        return 0;
    }
    let k = ((deg - 22.5) / 45.0).ceil() as i32;
    k.rem_euclid(8) as u8
}

/// Pixel that is a local maximum of gradient magnitude across its level-line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Anchor {
    pub x: usize,
    pub y: usize,
    pub mag: f64,
}

/// Offset along the gradient axis of a pixel with quantized level-line `dir`,
/// canonicalized to one of E, NE, N, NW.
#[inline]
pub(crate) fn gradient_axis(dir: u8) -> (i32, i32) {
    COMPASS[((dir as usize) + 2) % 4]
}

/// Tests whether the interior pixel `(x, y)` is a maximum across its level-line:
/// strictly above the neighbor behind it on the gradient axis and at least as
/// large as the one ahead. Flat plateaus thus yield a single anchor per
/// cross-section.
pub fn is_local_maximum(field: &GradientField, x: usize, y: usize) -> bool {
    if x == 0 || y == 0 || x + 1 >= field.width || y + 1 >= field.height {
        return false;
    }
    if !field.is_valid(x, y) {
        return false;
    }
    let (dx, dy) = gradient_axis(field.dir(x, y));
    let m = field.mag(x, y);
    let behind = field.mag((x as i32 - dx) as usize, (y as i32 - dy) as usize);
    let ahead = field.mag((x as i32 + dx) as usize, (y as i32 + dy) as usize);
    m > behind && m >= ahead
}

/// All anchors in raster order. The one-pixel border is never an anchor.
pub fn extract_anchors(field: &GradientField) -> Vec<Anchor> {
    let mut out = Vec::new();
    if field.width < 3 || field.height < 3 {
        return out;
    }
    for y in 1..field.height - 1 {
        for x in 1..field.width - 1 {
            if is_local_maximum(field, x, y) {
                out.push(Anchor {
                    x,
                    y,
                    mag: field.mag(x, y),
                });
            }
        }
    }
    out
}

/// Strongest-first ordering used for equalization and drawing: magnitude
/// descending, then `(y, x)` ascending.
pub(crate) fn anchor_order(a: &Anchor, b: &Anchor) -> Ordering {
    b.mag
        .partial_cmp(&a.mag)
        .unwrap_or(Ordering::Equal)
        .then(a.y.cmp(&b.y))
        .then(a.x.cmp(&b.x))
}

/// Greedy radius suppression: keeps an anchor only if it is farther than
/// `radius` from every stronger anchor already kept.
pub fn equalize_anchors(anchors: &[Anchor], radius: f64) -> Vec<Anchor> {
    let mut sorted = anchors.to_vec();
    sorted.sort_by(anchor_order);

    let cell = radius.max(1.0);
    let key = |a: &Anchor| ((a.x as f64 / cell) as i64, (a.y as f64 / cell) as i64);
    let r2 = radius * radius;
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut kept: Vec<Anchor> = Vec::new();
    for a in sorted {
        let (cx, cy) = key(&a);
        let reach = (radius / cell).ceil() as i64;
        let mut clear = true;
        'search: for gy in cy - reach..=cy + reach {
            for gx in cx - reach..=cx + reach {
                if let Some(ids) = grid.get(&(gx, gy)) {
                    for &id in ids {
                        let k = &kept[id];
                        let dx = k.x as f64 - a.x as f64;
                        let dy = k.y as f64 - a.y as f64;
                        if dx * dx + dy * dy <= r2 {
                            clear = false;
                            break 'search;
                        }
                    }
                }
            }
        }
        if clear {
            grid.entry((cx, cy)).or_default().push(kept.len());
            kept.push(a);
        }
    }
    kept
}
