//! Synthetic test images with known geometry.

use rand::Rng;

use crate::imaging::GrayImage;

fn distance_to_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
}

/// Anti-aliased strokes of the given width (px) and intensity over a
/// constant background. Pixel `(x, y)` covers the unit square centered on
/// `(x, y)`; coverage falls off linearly over one pixel at the stroke edge.
pub fn render_segments(
    width: usize,
    height: usize,
    segments: &[([f64; 2], [f64; 2])],
    stroke: f64,
    background: f64,
    foreground: f64,
) -> GrayImage {
    let half = stroke / 2.0;
    let mut cov = vec![0.0f64; width * height];
    for &(a, b) in segments {
        let x0 = (a[0].min(b[0]) - half - 1.0).floor().max(0.0) as usize;
        let y0 = (a[1].min(b[1]) - half - 1.0).floor().max(0.0) as usize;
        let x1 =
            ((a[0].max(b[0]) + half + 1.0).ceil().max(0.0) as usize).min(width.saturating_sub(1));
        let y1 =
            ((a[1].max(b[1]) + half + 1.0).ceil().max(0.0) as usize).min(height.saturating_sub(1));
        for y in y0..=y1 {
            for x in x0..=x1 {
                let d = distance_to_segment([x as f64, y as f64], a, b);
                let c = (half + 0.5 - d).clamp(0.0, 1.0);
                let k = y * width + x;
                cov[k] = cov[k].max(c);
            }
        }
    }
    GrayImage::from_fn(width, height, |x, y| {
        let c = cov[y * width + x];
        background + c * (foreground - background)
    })
}

/// Axis-aligned filled rectangle covering pixels `x0..x1` by `y0..y1`.
pub fn rectangle(
    width: usize,
    height: usize,
    x0: usize,
    y0: usize,
    x1: usize,
    y1: usize,
) -> GrayImage {
    GrayImage::from_fn(width, height, |x, y| {
        ((x0..x1).contains(&x) && (y0..y1).contains(&y)) as u8 as f64
    })
}

/// `n` random segments of length at least `min_len`, contained in the disk
/// of radius `radius` around `center`.
pub fn random_segments<R: Rng>(
    rng: &mut R,
    n: usize,
    center: [f64; 2],
    radius: f64,
    min_len: f64,
) -> Vec<([f64; 2], [f64; 2])> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let a = [
            center[0] + rng.random_range(-radius..radius),
            center[1] + rng.random_range(-radius..radius),
        ];
        let phi = rng.random_range(0.0..std::f64::consts::PI);
        let len = rng.random_range(min_len..min_len * 2.5);
        let b = [a[0] + len * phi.cos(), a[1] + len * phi.sin()];
        let inside = |p: [f64; 2]| (p[0] - center[0]).hypot(p[1] - center[1]) <= radius;
        if inside(a) && inside(b) {
            out.push((a, b));
        }
    }
    out
}

/// Piecewise-smooth clutter: overlapping rotated rectangles and disks of
/// random gray levels over a shading ramp, with mild pixel noise.
pub fn texture<R: Rng>(rng: &mut R, width: usize, height: usize) -> GrayImage {
    enum Shape {
        Rect {
            c: [f64; 2],
            half: [f64; 2],
            cos: f64,
            sin: f64,
        },
        Disk {
            c: [f64; 2],
            r: f64,
        },
    }
    let (w, h) = (width as f64, height as f64);
    let shapes: Vec<(Shape, f64)> = (0..rng.random_range(6..16))
        .map(|_| {
            let c = [rng.random_range(0.0..w), rng.random_range(0.0..h)];
            let level = rng.random_range(0.0..1.0);
            let shape = if rng.random_bool(0.7) {
                let t: f64 = rng.random_range(0.0..std::f64::consts::PI);
                Shape::Rect {
                    c,
                    half: [
                        rng.random_range(8.0..w / 3.0),
                        rng.random_range(8.0..h / 3.0),
                    ],
                    cos: t.cos(),
                    sin: t.sin(),
                }
            } else {
                Shape::Disk {
                    c,
                    r: rng.random_range(6.0..w.min(h) / 4.0),
                }
            };
            (shape, level)
        })
        .collect();
    let ramp = [
        rng.random_range(-0.3..0.3) / w,
        rng.random_range(-0.3..0.3) / h,
    ];
    let base = rng.random_range(0.2..0.6);
    let noise: Vec<f64> = (0..width * height)
        .map(|_| rng.random_range(-0.02..0.02))
        .collect();

    GrayImage::from_fn(width, height, |x, y| {
        let p = [x as f64, y as f64];
        let mut v = base + ramp[0] * p[0] + ramp[1] * p[1];
        for (shape, level) in &shapes {
            let inside = match shape {
                Shape::Rect { c, half, cos, sin } => {
                    let (dx, dy) = (p[0] - c[0], p[1] - c[1]);
                    (cos * dx + sin * dy).abs() <= half[0]
                        && (-sin * dx + cos * dy).abs() <= half[1]
                }
                Shape::Disk { c, r } => (p[0] - c[0]).hypot(p[1] - c[1]) <= *r,
            };
            if inside {
                v = *level;
            }
        }
        v + noise[y * width + x]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn stroke_profile() {
        let img = render_segments(20, 20, &[([2.0, 10.0], [17.0, 10.0])], 3.0, 0.0, 1.0);
        assert_eq!(img.get(10, 10), 1.0);
        assert_eq!(img.get(10, 11), 1.0);
        assert!((img.get(10, 12) - 0.0).abs() < 1e-12);
        assert_eq!(img.get(10, 5), 0.0);
        let thin = render_segments(20, 20, &[([2.0, 10.5], [17.0, 10.5])], 1.0, 0.0, 1.0);
        assert!((thin.get(8, 10) - 0.5).abs() < 1e-12 && (thin.get(8, 11) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn random_segments_stay_in_disk() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (a, b) in random_segments(&mut rng, 30, [256.0, 256.0], 180.0, 60.0) {
            assert!((a[0] - 256.0).hypot(a[1] - 256.0) <= 180.0);
            assert!((b[0] - 256.0).hypot(b[1] - 256.0) <= 180.0);
            assert!((a[0] - b[0]).hypot(a[1] - b[1]) >= 60.0);
        }
    }

    #[test]
    fn texture_is_in_range_and_seeded() {
        let a = texture(&mut ChaCha8Rng::seed_from_u64(3), 64, 48);
        let b = texture(&mut ChaCha8Rng::seed_from_u64(3), 64, 48);
        assert_eq!(a, b);
        assert!(a.data().iter().all(|v| (0.0..=1.0).contains(v)));
    }
}
