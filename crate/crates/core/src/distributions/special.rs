/// `ln K_ν(x)` for the modified Bessel function of the second kind, real order
/// `ν` and `x > 0`, from the integral `K_ν(x) = ∫₀^∞ exp(-x cosh t) cosh(νt) dt`.
///
/// The trapezoid rule converges geometrically on this integrand, so a fixed
/// fine step is enough for every argument range the samplers produce.
pub fn ln_bessel_k(nu: f64, x: f64) -> f64 {
    assert!(x > 0.0, "ln_bessel_k needs x > 0, got {x}");
    let nu = nu.abs();
    let ln_cosh = |y: f64| y.abs() + (0.5 * (1.0 + (-2.0 * y.abs()).exp())).ln();
    // log integrand, shifted by +x so large arguments do not underflow
    let g = |t: f64| -x * (t.cosh() - 1.0) + ln_cosh(nu * t);
    // peak: x sinh t = nu tanh(nu t); for a step size use the curvature there
    let t_peak = if nu > 0.0 { (nu / x).asinh() } else { 0.0 };
    let curvature = x * t_peak.cosh() + 1e-300;
    let h = (0.02 / curvature.sqrt()).clamp(1e-6, 0.02);
    let g_peak = g(t_peak);

    let mut acc = 0.0;
    let mut t = 0.0;
    let mut first = true;
    loop {
        let v = g(t);
        if t > t_peak && v < g_peak - 60.0 {
            break;
        }
        let w = if first { 0.5 } else { 1.0 };
        acc += w * (v - g_peak).exp();
        first = false;
        t += h;
    }
    (acc * h).ln() + g_peak - x
}
