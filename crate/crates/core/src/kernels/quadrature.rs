//! Fixed-rule quadratures used by the integral fallbacks.

/// `∫_0^∞ f(x) dx` by the trapezoid rule in `u = ln x` over `[u_lo, u_hi]`.
///
/// Converges geometrically for integrands analytic near the positive axis
/// that decay at least exponentially in `u` at both ends.
pub fn half_line_log_trapezoid<F: Fn(f64) -> f64>(f: F, u_lo: f64, u_hi: f64, step: f64) -> f64 {
    let n = ((u_hi - u_lo) / step).ceil() as usize;
    let h = (u_hi - u_lo) / n as f64;
    let mut acc = 0.0;
    for i in 0..=n {
        let u = u_lo + i as f64 * h;
        let x = u.exp();
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        acc += w * f(x) * x;
    }
    acc * h
}

/// Tanh-sinh quadrature of `f` on `(a, b)`; tolerant of integrable endpoint
/// singularities because nodes never touch the endpoints.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, step: f64) -> f64 {
    let half = 0.5 * (b - a);
    let t_max = 4.0;
    let n = (t_max / step).ceil() as i64;
    let h = t_max / n as f64;
    let pi2 = std::f64::consts::FRAC_PI_2;
    let mut acc = 0.0;
    for i in -n..=n {
        let t = i as f64 * h;
        let sh = pi2 * t.sinh();
        let ch = pi2 * t.cosh();
        let y = sh.tanh();
        let w = ch / sh.cosh().powi(2);
        // distance to the nearer endpoint, computed without cancellation
        let comp = 1.0 / (sh.abs().exp() * sh.abs().cosh());
        let x = if y >= 0.0 { b - half * comp } else { a + half * comp };
        if x <= a || x >= b {
            continue;
        }
        acc += w * f(x);
    }
    acc * h * half
}
