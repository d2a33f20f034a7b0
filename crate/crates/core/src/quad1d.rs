//! One-dimensional quadrature utilities: Gauss–Legendre rules, an adaptive
//! panel integrator with an embedded GL7/GL15 error estimate, and scaled
//! modified Bessel functions used by the oracle module.

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on [−1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' by the Bonnet recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 1..n {
                let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Fixed-order Gauss–Legendre on [a, b].
pub fn integrate_gl(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (xs, ws) = gauss_legendre(n);
    let c = 0.5 * (b - a);
    let d = 0.5 * (b + a);
    let mut acc = 0.0;
    for (x, w) in xs.iter().zip(ws.iter()) {
        acc += w * f(c * x + d);
    }
    acc * c
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn eval_panel(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, rules: &Rules) -> (f64, f64) {
    let c = 0.5 * (b - a);
    let d = 0.5 * (b + a);
    let mut hi = 0.0;
    let mut samples = [0.0; 15];
    for (i, (x, w)) in rules.x15.iter().zip(rules.w15.iter()).enumerate() {
        let v = f(c * x + d);
        samples[i] = v;
        hi += w * v;
    }
    let mut lo = 0.0;
    for (x, w) in rules.x7.iter().zip(rules.w7.iter()) {
        lo += w * f(c * x + d);
    }
    (hi * c, ((hi - lo) * c).abs())
}

struct Rules {
    x7: Vec<f64>,
    w7: Vec<f64>,
    x15: Vec<f64>,
    w15: Vec<f64>,
}

fn rules() -> Rules {
    let (x7, w7) = gauss_legendre(7);
    let (x15, w15) = gauss_legendre(15);
    Rules { x7, w7, x15, w15 }
}

/// Adaptive bisection quadrature of `f` on [a, b] to absolute tolerance.
///
/// Returns (value, error estimate); errors out instead of silently returning a
/// non-converged result.
pub fn adaptive_quad(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    const MAX_PANELS: usize = 4000;
    let r = rules();
    let (v, e) = eval_panel(f, a, b, &r);
    let mut panels = vec![Panel { a, b, value: v, error: e }];
    loop {
        let total_err: f64 = panels.iter().map(|p| p.error).sum();
        if total_err <= tol {
            let total: f64 = panels.iter().map(|p| p.value).sum();
            return Ok((total, total_err));
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::QuadratureNoConvergence(format!(
                "error {total_err:.3e} > tol {tol:.3e} after {MAX_PANELS} panels"
            )));
        }
        // split the worst panel
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .unwrap();
        let p = panels.swap_remove(idx);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(Error::QuadratureNoConvergence(
                "panel collapsed below floating-point resolution".into(),
            ));
        }
        let (v1, e1) = eval_panel(f, p.a, mid, &r);
        let (v2, e2) = eval_panel(f, mid, p.b, &r);
        panels.push(Panel { a: p.a, b: mid, value: v1, error: e1 });
        panels.push(Panel { a: mid, b: p.b, value: v2, error: e2 });
    }
}

/// e^{−z} I₀(z) for z ≥ 0.
pub fn bessel_i0_scaled(z: f64) -> f64 {
    debug_assert!(z >= 0.0);
    if z <= 15.0 {
        // power series times e^{-z}
        let q = z * z / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        for m in 1..200 {
            term *= q / ((m * m) as f64);
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
        }
        sum * (-z).exp()
    } else {
        asymptotic_iv_scaled(0.0, z)
    }
}

/// e^{−z} I₁(z) for z ≥ 0.
pub fn bessel_i1_scaled(z: f64) -> f64 {
    debug_assert!(z >= 0.0);
    if z <= 15.0 {
        let q = z * z / 4.0;
        let mut term = z / 2.0;
        let mut sum = term;
        for m in 1..200 {
            term *= q / ((m * (m + 1)) as f64);
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
        }
        sum * (-z).exp()
    } else {
        asymptotic_iv_scaled(1.0, z)
    }
}

/// Large-argument expansion of e^{−z} I_ν(z), truncated at its smallest term.
fn asymptotic_iv_scaled(nu: f64, z: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    for j in 1..30 {
        let jj = (2 * j - 1) as f64;
        term *= -(mu - jj * jj) / (j as f64 * 8.0 * z);
        if term.abs() >= prev {
            break;
        }
        prev = term.abs();
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * z).sqrt()
}
