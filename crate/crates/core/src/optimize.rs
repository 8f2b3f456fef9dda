//! One-dimensional minimization: a uniform grid followed by golden-section
//! refinement on the bracket around the best grid point.
//!
//! The grid guards against the objective being only piecewise unimodal
//! (a max over several curves, or binomials with jumps at integer arguments).

pub const GRID_POINTS: usize = 1001;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
}

struct Tracker<F> {
    f: F,
    best: Minimum,
}

impl<F: FnMut(f64) -> f64> Tracker<F> {
    fn eval(&mut self, x: f64) -> f64 {
        let value = (self.f)(x);
        if value < self.best.value {
            self.best = Minimum { x, value };
        }
        value
    }
}

/// Minimizes `f` on `[lo, hi]` to an abscissa tolerance of `xtol`.
pub fn grid_golden_minimize<F: FnMut(f64) -> f64>(f: F, lo: f64, hi: f64, xtol: f64) -> Minimum {
    let mut tr = Tracker {
        f,
        best: Minimum {
            x: lo,
            value: f64::INFINITY,
        },
    };
    if hi - lo <= xtol {
        tr.eval(lo);
        return tr.best;
    }
    let last = GRID_POINTS - 1;
    let at = |i: usize| {
        if i == last {
            hi
        } else {
            lo + (hi - lo) * i as f64 / last as f64
        }
    };
    let mut best_i = 0;
    let mut best_v = f64::INFINITY;
    for i in 0..GRID_POINTS {
        let v = tr.eval(at(i));
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let (mut a, mut b) = (at(best_i.saturating_sub(1)), at((best_i + 1).min(last)));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (tr.eval(c), tr.eval(d));
    while b - a > xtol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = tr.eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = tr.eval(d);
        }
    }
    tr.eval(0.5 * (a + b));
    tr.best
}

/// Discrete convexity scan: `f(x-h) + f(x+h) ≥ 2 f(x)` on `points` evenly
/// spaced abscissae, up to `tol` (scaled by the magnitude of `f(x)`).
pub fn is_discretely_convex<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    points: usize,
    tol: f64,
) -> bool {
    if points < 3 || hi <= lo {
        return true;
    }
    let values: Vec<f64> = (0..points)
        .map(|i| f(lo + (hi - lo) * i as f64 / (points - 1) as f64))
        .collect();
    values
        .windows(3)
        .all(|w| w[0] + w[2] >= 2.0 * w[1] - tol * (1.0 + w[1].abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let m = grid_golden_minimize(|x| (x - 0.3141592).powi(2) + 1.0, 0.0, 1.0, 1e-9);
        assert!((m.x - 0.3141592).abs() < 1e-8);
        assert!((m.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn endpoint_minimum_and_degenerate_interval() {
        let m = grid_golden_minimize(|x| x, 2.0, 5.0, 1e-9);
        assert_eq!(m.x, 2.0);
        let m = grid_golden_minimize(|x| -x, 2.0, 5.0, 1e-9);
        assert_eq!(m.x, 5.0);
        let m = grid_golden_minimize(|x| x * x, 1.5, 1.5, 1e-9);
        assert_eq!(
            m,
            Minimum {
                x: 1.5,
                value: 2.25
            }
        );
    }

    #[test]
    fn grid_escapes_local_minimum() {
        // Shallow local minimum near 0.1, global near 0.8.
        let f = |x: f64| ((x - 0.1).powi(2) + 0.05).min((x - 0.8).powi(2));
        let m = grid_golden_minimize(f, 0.0, 1.0, 1e-10);
        assert!((m.x - 0.8).abs() < 1e-8);
    }

    #[test]
    fn convexity_scan() {
        assert!(is_discretely_convex(|x| x * x, -1.0, 1.0, 101, 1e-12));
        assert!(!is_discretely_convex(|x| x.sin(), 0.0, 3.0, 101, 1e-12));
    }
}
