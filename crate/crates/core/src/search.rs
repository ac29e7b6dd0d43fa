//! One-dimensional searches: a kink-safe maximiser on an interval and
//! first-crossing root finding by scan plus bisection.

/// Grid and refinement settings for [`maximise_on_interval`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximiserConfig {
    pub grid: usize,
    pub tol: f64,
}

impl Default for MaximiserConfig {
    fn default() -> Self {
        Self { grid: 512, tol: 1e-10 }
    }
}

/// Location and value of a maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the maximum of `f` on `[a, b]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> Maximum {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .fold(Maximum { x, value: f64::NEG_INFINITY }, |best, (x, v)| {
            if v > best.value {
                Maximum { x, value: v }
            } else {
                best
            }
        })
}

/// Maximises `f` on `[lo, hi]`.
///
/// `f` is evaluated on `cfg.grid` evenly spaced points, on both endpoints and
/// on every `breakpoint` inside the interval; the best cell neighbourhood is
/// then refined by golden-section search to `cfg.tol`. The result is never
/// worse than the best sampled point, so kinks and endpoint maxima are
/// reported exactly.
pub fn maximise_on_interval<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    cfg: &MaximiserConfig,
) -> Maximum {
    if hi <= lo {
        return Maximum { x: lo, value: f(lo) };
    }
    let n = cfg.grid.max(2);
    let mut xs: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect();
    xs.extend(breakpoints.iter().copied().filter(|b| *b > lo && *b < hi));
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    let mut best_i = 0;
    let mut best = Maximum { x: xs[0], value: f(xs[0]) };
    for (i, &x) in xs.iter().enumerate().skip(1) {
        let v = f(x);
        if v > best.value {
            best = Maximum { x, value: v };
            best_i = i;
        }
    }
    // refine each side of the best sample separately so a kink at the sample
    // itself does not stall the bracket
    for (a, b) in [
        (xs[best_i.saturating_sub(1)], xs[best_i]),
        (xs[best_i], xs[(best_i + 1).min(xs.len() - 1)]),
    ] {
        if b > a {
            let m = golden_section_max(&f, a, b, cfg.tol);
            if m.value > best.value {
                best = m;
            }
        }
    }
    best
}

/// Bisection on a monotone predicate: given `pred(lo) = false` and
/// `pred(hi) = true`, returns a point within `tol` above the switch.
pub fn bisect_switch<P: FnMut(f64) -> bool>(mut pred: P, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Smallest `x ∈ [lo, hi]` with `pred(x)` true, located by a dense scan of
/// `n_scan` points followed by bisection inside the first switching cell.
/// Returns `None` when no scanned point satisfies `pred`.
pub fn first_crossing<P: FnMut(f64) -> bool>(
    mut pred: P,
    lo: f64,
    hi: f64,
    n_scan: usize,
    tol: f64,
) -> Option<f64> {
    let n = n_scan.max(2);
    let at = |i: usize| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
    if pred(lo) {
        return Some(lo);
    }
    let mut prev = lo;
    for i in 1..n {
        let x = at(i);
        if pred(x) {
            return Some(bisect_switch(&mut pred, prev, x, tol));
        }
        prev = x;
    }
    None
}
