use super::{has_direction, LineParams, LossTerms, NelderMead};
use crate::params::DetectorParams;

const PHI_STEP: f64 = 2.0 * std::f64::consts::PI / 180.0;
const C_STEP: f64 = 1.0;
const MAX_RESTARTS: usize = 3;

/// Minimizes the clamped loss over `(phi, c)`, with `(a, b) = (cos phi, sin phi)`,
/// starting from `init`. The result never has a higher loss than `init`.
/// Degenerate input (fewer than two points, mismatched lengths, zero
/// level-lines) returns `init` unchanged.
pub fn refine_line(
    points: &[[f64; 2]],
    levels: &[[f64; 2]],
    init: LineParams,
    params: &DetectorParams,
) -> LineParams {
    if points.len() < 2 || points.len() != levels.len() || !levels.iter().all(has_direction) {
        return init;
    }
    let terms = LossTerms::new(points, levels, params);
    let loss = |x: &[f64; 2]| terms.eval(&LineParams::from_angle(x[0], x[1]));

    let mut best_x = [init.b.atan2(init.a), init.c];
    let mut best = terms.eval(&init);
    if best == 0.0 {
        return init;
    }
    let nm = NelderMead::default();
    // A collapsed simplex can stall on a plateau edge; restarting from the
    // current optimum with a fresh simplex recovers most of those cases.
    for _ in 0..=MAX_RESTARTS {
        let m = nm.minimize(loss, best_x, [PHI_STEP, C_STEP]);
        if m.value < best - 1e-12 {
            best = m.value;
            best_x = m.x;
        } else {
            break;
        }
    }
    if best < terms.eval(&init) {
        LineParams::from_angle(best_x[0], best_x[1])
    } else {
        init
    }
}
