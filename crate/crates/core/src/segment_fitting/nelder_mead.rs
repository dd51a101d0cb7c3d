/// Derivative-free simplex minimizer over `N` parameters.
#[derive(Clone, Debug)]
pub struct NelderMead {
    /// Stop once `f(worst) - f(best)` falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            max_iterations: 200,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub iterations: usize,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

impl NelderMead {
    /// Minimizes `f` from `x0`. The initial simplex is `x0` plus one vertex
    /// per axis, offset by `steps[i]`.
    pub fn minimize<const N: usize, F>(&self, f: F, x0: [f64; N], steps: [f64; N]) -> Minimum<N>
    where
        F: Fn(&[f64; N]) -> f64,
    {
        let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
        simplex.push((x0, f(&x0)));
        for i in 0..N {
            let mut x = x0;
            x[i] += steps[i];
            simplex.push((x, f(&x)));
        }

        let mut iterations = 0;
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[N].1 - simplex[0].1 < self.tolerance || iterations >= self.max_iterations {
                break;
            }
            iterations += 1;

            let mut centroid = [0.0; N];
            for (x, _) in &simplex[..N] {
                for i in 0..N {
                    centroid[i] += x[i] / N as f64;
                }
            }
            let along = |t: f64| -> [f64; N] {
                let worst = simplex[N].0;
                std::array::from_fn(|i| centroid[i] + t * (worst[i] - centroid[i]))
            };

            let xr = along(-REFLECT);
            let fr = f(&xr);
            if fr < simplex[0].1 {
                let xe = along(-EXPAND);
                let fe = f(&xe);
                simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[N - 1].1 {
                simplex[N] = (xr, fr);
                continue;
            }
            // outside contraction when the reflection beats the worst vertex
            let (xc, fc) = if fr < simplex[N].1 {
                let x = along(-CONTRACT);
                (x, f(&x))
            } else {
                let x = along(CONTRACT);
                (x, f(&x))
            };
            if fc < simplex[N].1.min(fr) {
                simplex[N] = (xc, fc);
                continue;
            }
            let best = simplex[0].0;
            for (x, fx) in simplex.iter_mut().skip(1) {
                *x = std::array::from_fn(|i| best[i] + SHRINK * (x[i] - best[i]));
                *fx = f(x);
            }
        }
        Minimum {
            x: simplex[0].0,
            value: simplex[0].1,
            iterations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let m = NelderMead::default().minimize(
            |x: &[f64; 2]| (x[0] - 3.0).powi(2) + 2.0 * (x[1] + 1.0).powi(2),
            [0.0, 0.0],
            [0.5, 0.5],
        );
        assert!(
            (m.x[0] - 3.0).abs() < 1e-3 && (m.x[1] + 1.0).abs() < 1e-3,
            "{m:?}"
        );
    }

    #[test]
    fn rosenbrock_with_budget() {
        let nm = NelderMead {
            tolerance: 1e-14,
            max_iterations: 2000,
        };
        let m = nm.minimize(
            |x: &[f64; 2]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            [-1.2, 1.0],
            [0.1, 0.1],
        );
        assert!(
            (m.x[0] - 1.0).abs() < 1e-3 && (m.x[1] - 1.0).abs() < 1e-3,
            "{m:?}"
        );
    }

    #[test]
    fn never_worse_than_start() {
        let f = |x: &[f64; 1]| (x[0].abs() * 7.0).floor();
        let m = NelderMead::default().minimize(f, [2.0], [1.0]);
        assert!(m.value <= f(&[2.0]));
    }

    #[test]
    fn iteration_cap_is_respected() {
        let nm = NelderMead {
            tolerance: 0.0,
            max_iterations: 5,
        };
        let m = nm.minimize(
            |x: &[f64; 2]| x[0] * x[0] + x[1] * x[1],
            [4.0, 4.0],
            [1.0, 1.0],
        );
        assert_eq!(m.iterations, 5);
    }
}
