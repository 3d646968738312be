//! Bracketed scalar root finding.

/// Brackets `[a, b]` where `f` changes sign, found by scanning `[lo, hi]` at
/// a fixed `step`. Exact zeros at scan points produce a degenerate bracket.
pub fn sign_scan<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, step: f64) -> Vec<(f64, f64)> {
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let mut out = Vec::new();
    let mut xa = lo;
    let mut fa = f(xa);
    for i in 1..=n {
        let xb = if i == n { hi } else { lo + step * i as f64 };
        let fb = f(xb);
        if fa == 0.0 {
            out.push((xa, xa));
        } else if fa * fb < 0.0 {
            out.push((xa, xb));
        }
        xa = xb;
        fa = fb;
    }
    if fa == 0.0 {
        out.push((xa, xa));
    }
    out
}

/// Bisection on a sign-changing bracket down to `xtol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, xtol: f64) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    if f(b) == 0.0 {
        return b;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= xtol || m == a || m == b {
            return m;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// Bisection to a loose tolerance followed by Newton polishing, kept inside
/// the original bracket.
pub fn bisect_newton<F, D>(f: F, df: D, a: f64, b: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if a == b {
        return a;
    }
    let (lo, hi) = (a.min(b), a.max(b));
    let mut x = bisect(&f, lo, hi, 1e-6 * (hi - lo).max(1e-300));
    for _ in 0..50 {
        let fx = f(x);
        if fx == 0.0 {
            break;
        }
        let d = df(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = x - fx / d;
        if !(lo..=hi).contains(&next) {
            break;
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            x = next;
            break;
        }
        x = next;
    }
    x
}
