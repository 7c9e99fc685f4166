//! One-dimensional minimization over an open interval.

/// Uniform grid size used before refinement.
pub const GRID_POINTS: usize = 1024;

/// Relative bracket width at which golden-section refinement stops.
pub const REFINE_TOL: f64 = 1e-10;

/// Minimizes `f` over the open interval `(lo, hi)`.
///
/// Evaluates `f` on `GRID_POINTS` interior points, then runs golden-section
/// search on the bracket formed by the best grid point's neighbours. Returns
/// `(argmin, min)`; the grid minimum is kept if refinement does not improve on
/// it.
pub fn grid_golden_min<F: Fn(f64) -> f64>(lo: f64, hi: f64, f: F) -> (f64, f64) {
    debug_assert!(hi > lo);
    let step = (hi - lo) / (GRID_POINTS + 1) as f64;
    let at = |k: usize| lo + step * k as f64;

    let (mut best_k, mut best) = (1, f(at(1)));
    for k in 2..=GRID_POINTS {
        let v = f(at(k));
        if v < best {
            best = v;
            best_k = k;
        }
    }

    // Neighbours; k = 0 and k = GRID_POINTS + 1 are the open endpoints.
    let (a, b) = (at(best_k - 1), at(best_k + 1));
    let (x, v) = golden_section(a, b, &f);
    if v < best {
        (x, v)
    } else {
        (at(best_k), best)
    }
}

fn golden_section<F: Fn(f64) -> f64>(mut a: f64, mut b: f64, f: &F) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= REFINE_TOL * (a.abs() + b.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
