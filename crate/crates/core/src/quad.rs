//! Simpson quadrature, adaptive and composite.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 60;
const MAX_EVALUATIONS: u64 = 10_000_000;

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson_panel(a, b, fa, fm, fb);
    let mut state = State { failed: false, evaluations: 3 };
    let value = refine(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, &mut state);
    let failed = state.failed;
    if failed || !value.is_finite() {
        return Err(Error::NonConvergence(format!(
            "adaptive Simpson on [{a}, {b}] did not reach tolerance {tol:e}"
        )));
    }
    Ok(value)
}

fn simpson_panel(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

struct State {
    failed: bool,
    evaluations: u64,
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    state: &mut State,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    state.evaluations += 2;
    let left = simpson_panel(a, m, fa, flm, fm);
    let right = simpson_panel(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    if depth == 0 || m <= a || m >= b || state.failed || state.evaluations > MAX_EVALUATIONS {
        state.failed = true;
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, state)
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, state)
}

/// Simpson weights for `panels` (even) equal intervals: 1, 4, 2, 4, …, 4, 1
/// scaled by h/3.
pub fn simpson_weights(panels: usize, h: f64) -> Vec<f64> {
    assert!(panels >= 2 && panels.is_multiple_of(2), "Simpson needs an even number of panels");
    (0..=panels)
        .map(|i| {
            let w = if i == 0 || i == panels {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect()
}

/// Composite Simpson over tabulated ordinates on a uniform grid.
pub fn simpson_tabulated(values: &[f64], h: f64) -> f64 {
    let panels = values.len() - 1;
    simpson_weights(panels, h).iter().zip(values).map(|(w, v)| w * v).sum()
}
