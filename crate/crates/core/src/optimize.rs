//! One-dimensional search used by the occupancy optimizer.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section maximization of a unimodal `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `rel_tol·max(|a|,|b|,1)`. When
/// two interior probes tie, the left sub-bracket is kept, so on a flat
/// plateau the search converges to the smallest maximizer.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64) -> f64 {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..500 {
        if (b - a).abs() <= rel_tol * a.abs().max(b.abs()).max(1.0) {
            break;
        }
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
    // pick the best of the final probes, left first
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    let mut best = (c, fc);
    for cand in [(mid, fm), (d, fd)] {
        if cand.1 > best.1 {
            best = cand;
        }
    }
    best.0
}

/// Bisection for a sign change of `g` on `[lo, hi]`. Returns `None` if the
/// endpoints do not bracket a root.
pub fn bisect<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64, max_iter: usize) -> Option<f64> {
    let mut glo = g(lo);
    let ghi = g(hi);
    if glo == 0.0 {
        return Some(lo);
    }
    if ghi == 0.0 {
        return Some(hi);
    }
    if glo.signum() == ghi.signum() {
        return None;
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return Some(mid);
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
