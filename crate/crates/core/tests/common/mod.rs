//! Helpers shared by the integration tests.
#![allow(dead_code)]

use lsd_levelline::DetectorParams;

pub const PHI_STEP: f64 = 0.001;
pub const C_STEP: f64 = 0.01;
pub const C_MAX: f64 = 20.0;

/// Clamped loss written out directly from its definition.
pub fn reference_loss(
    points: &[[f64; 2]],
    levels: &[[f64; 2]],
    phi: f64,
    c: f64,
    p: &DetectorParams,
) -> f64 {
    let (a, b) = (phi.cos(), phi.sin());
    points
        .iter()
        .zip(levels)
        .map(|(x, l)| {
            let d = (a * x[0] + b * x[1] + c).abs();
            let cos = (-b * l[0] + a * l[1]).abs() / l[0].hypot(l[1]);
            let theta = cos.min(1.0).acos().to_degrees();
            (d / p.dist_thresh).min(1.0) + p.rho * (theta / p.angle_thresh).min(1.0)
        })
        .sum()
}

/// Minimum of the clamped loss over the grid `phi = k * phi_step` in
/// `[0, pi)`, `c = j * c_step` in `[-c_max, c_max]`.
///
/// For fixed `phi` the angle terms do not depend on `c`, and the distance
/// terms sum to a piecewise-linear function of `c` with kinks at
/// `-r_i` and `-r_i +- T_d`. Its minimum over grid points therefore lies at
/// a grid point adjacent to a kink or at an end of the range, so only those
/// are evaluated.
pub fn grid_minimum(
    points: &[[f64; 2]],
    levels: &[[f64; 2]],
    p: &DetectorParams,
    phi_step: f64,
    c_step: f64,
    c_max: f64,
) -> (f64, f64, f64) {
    let jmax = (c_max / c_step).round() as i64;
    let n_phi = (std::f64::consts::PI / phi_step).ceil() as usize;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    let mut cand: Vec<i64> = Vec::with_capacity(6 * points.len() + 2);
    for k in 0..n_phi {
        let phi = k as f64 * phi_step;
        if phi >= std::f64::consts::PI {
            break;
        }
        let (a, b) = (phi.cos(), phi.sin());
        let mut angle = 0.0;
        for l in levels {
            let cos = (-b * l[0] + a * l[1]).abs() / l[0].hypot(l[1]);
            angle += p.rho * (cos.min(1.0).acos().to_degrees() / p.angle_thresh).min(1.0);
        }
        if angle >= best.0 {
            continue;
        }
        let r: Vec<f64> = points.iter().map(|x| a * x[0] + b * x[1]).collect();
        cand.clear();
        cand.extend([-jmax, jmax]);
        for &ri in &r {
            for kink in [-ri, -ri - p.dist_thresh, -ri + p.dist_thresh] {
                let j = (kink / c_step).floor() as i64;
                for jj in [j, j + 1] {
                    if (-jmax..=jmax).contains(&jj) {
                        cand.push(jj);
                    }
                }
            }
        }
        cand.sort_unstable();
        cand.dedup();
        for &j in &cand {
            let c = j as f64 * c_step;
            let mut total = angle;
            for &ri in &r {
                total += ((ri + c).abs() / p.dist_thresh).min(1.0);
            }
            if total < best.0 {
                best = (total, phi, c);
            }
        }
    }
    best
}

/// Exhaustive evaluation of every grid point; only practical on small grids.
pub fn brute_grid_minimum(
    points: &[[f64; 2]],
    levels: &[[f64; 2]],
    p: &DetectorParams,
    phi_step: f64,
    c_step: f64,
    c_max: f64,
) -> f64 {
    let jmax = (c_max / c_step).round() as i64;
    let mut best = f64::INFINITY;
    let mut k = 0;
    loop {
        let phi = k as f64 * phi_step;
        if phi >= std::f64::consts::PI {
            break;
        }
        for j in -jmax..=jmax {
            best = best.min(reference_loss(points, levels, phi, j as f64 * c_step, p));
        }
        k += 1;
    }
    best
}

/// Fraction formatted for the pass/fail report.
pub fn pct(num: usize, den: usize) -> String {
    format!(
        "{num}/{den} ({:.1}%)",
        100.0 * num as f64 / den.max(1) as f64
    )
}
