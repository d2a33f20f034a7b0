//! Independent quadrature oracles for the expansion terms.
//!
//! Everything here deliberately avoids the Laguerre-series evaluators in
//! [`crate::series`]: the distortion J₁ is reproduced per wavenumber from its
//! defining time integral
//!
//!   Ĵ₁(t,ξ) = ∫₀ᵗ iξ·f̂[M₀G](s,ξ) e^{−(t−s)|ξ|²} ds − iξ·e^{−t|ξ|²} ∫₀ᵗ f̂[M₀G](s,0) ds,
//!
//! with the exact Fourier transforms of the frozen-profile fluxes:
//!
//! * CD/CD2:  f̂(s,ξ) = a·c·(8πs)^{−1} e^{−s|ξ|²/2}  (c = |M₀|M₀ or M₀²); the
//!   1/s endpoint cancels against the subtraction term, so the integrand
//!   extends continuously to s = 0 and plain Gauss–Legendre applies.
//! * FR:      f̂(s,ξ) = M₀²·i ξ̂ · s^{−1} μ(√s·|ξ|) with the scalar profile
//!   μ(κ) = κ/(16√(2π)) · e^{−κ²/2} · e^{−z}(I₀+I₁)(z), z = κ²/4,
//!   obtained by convolving the two Gaussian factors of G·ℛG in polar
//!   coordinates. The s^{−1/2} endpoint is removed by the substitution s = v².
//! * QG:      f̂(s,ξ) = −M₀²·i ξ̂⊥ · s^{−1} μ(√s·|ξ|); the integrand carries
//!   ξ·ξ̂⊥ = 0, so the drift contribution cancels mode by mode.
//!
//! The module also provides the subordination identity
//! e^{−r} = (2√π)^{−1} ∫₀^∞ λ^{−3/2} e^{−1/(4λ)} e^{−λr²} dλ and the resulting
//! double-integral representation ℛ⊥G(t) = (2√π)^{−1} ∫∫ λ^{−3/2} e^{−1/(4λ)}
//! ∇⊥G(t+σ²λ) dλ dσ as quadrature oracles for the spectral Riesz transform.

use crate::error::{Error, Result};
use crate::field::{field_from_continuous_coeffs, Field};
use crate::grid::Grid;
use crate::ladder::gauss;
use crate::model::ModelKind;
use crate::quad1d::{adaptive_quad, bessel_i0_scaled, bessel_i1_scaled, gauss_legendre};
use ndarray::Array2;
use rustfft::num_complex::Complex64;
use std::f64::consts::PI;

/// Scalar radial profile of F[G·ℛG(1,·)](ξ) = i ξ̂ μ(|ξ|).
pub fn mu_direct(kappa: f64) -> f64 {
    debug_assert!(kappa >= 0.0);
    let half_sq = 0.5 * kappa * kappa;
    if half_sq > 740.0 {
        return 0.0;
    }
    let z = 0.25 * kappa * kappa;
    kappa / (16.0 * (2.0 * PI).sqrt())
        * (-half_sq).exp()
        * (bessel_i0_scaled(z) + bessel_i1_scaled(z))
}

/// Uniform table of μ with 4-point Lagrange interpolation.
///
/// Built once per oracle call; interpolation error is O(h⁴) ≈ 1e−13 at the
/// default spacing, far below every consumer's tolerance.
pub struct MuProfile {
    h: f64,
    table: Vec<f64>,
}

impl MuProfile {
    pub fn build(kappa_max: f64) -> MuProfile {
        let h = 1.0 / 512.0;
        let n = (kappa_max / h).ceil() as usize + 4;
        let table = (0..n).map(|i| mu_direct(i as f64 * h)).collect();
        MuProfile { h, table }
    }

    pub fn eval(&self, kappa: f64) -> f64 {
        debug_assert!(kappa >= 0.0);
        let s = kappa / self.h;
        let i = (s.floor() as usize).clamp(1, self.table.len().saturating_sub(3));
        if i + 2 >= self.table.len() {
            return mu_direct(kappa);
        }
        // 4-point Lagrange on nodes i-1 .. i+2
        let d = s - i as f64;
        let (f0, f1, f2, f3) =
            (self.table[i - 1], self.table[i], self.table[i + 1], self.table[i + 2]);
        let c0 = -d * (d - 1.0) * (d - 2.0) / 6.0;
        let c1 = (d + 1.0) * (d - 1.0) * (d - 2.0) / 2.0;
        let c2 = -(d + 1.0) * d * (d - 2.0) / 2.0;
        let c3 = (d + 1.0) * d * (d - 1.0) / 6.0;
        c0 * f0 + c1 * f1 + c2 * f2 + c3 * f3
    }
}

/// Right-hand side of the subordination identity, by adaptive quadrature in
/// log λ. Returns (value, quadrature error estimate).
pub fn subordination_rhs(r: f64) -> Result<(f64, f64)> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("subordination needs r > 0, got {r}")));
    }
    // lambda = e^z; integrand lambda^{-1/2} e^{-1/(4 lambda) - lambda r^2}
    let z_lo = -8.5; // e^{-1/(4e^z)} < 1e-500 below this
    let z_hi = (800.0 / (r * r)).ln().max(z_lo + 1.0);
    let mut f = |z: f64| {
        let lam = z.exp();
        (-0.25 / lam - lam * r * r).exp() / lam.sqrt() * lam
    };
    let (v, e) = adaptive_quad(&mut f, z_lo, z_hi, 1e-12)?;
    Ok((v / (2.0 * PI.sqrt()), e / (2.0 * PI.sqrt())))
}

/// Max |e^{−r} − rhs(r)| over the given r values.
pub fn subordination_check(rs: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &r in rs {
        let (v, _) = subordination_rhs(r)?;
        worst = worst.max((v - (-r).exp()).abs());
    }
    Ok(worst)
}

/// ℛ⊥G(t,x) by nested adaptive quadrature of the subordinated double integral,
/// using the closed form ∇⊥G(τ,x) = −x⊥/(2τ)·G(τ,x) with x⊥ = (−x₂, x₁).
pub fn riesz_perp_gauss_subordinated(t: f64, x: [f64; 2], tol: f64) -> Result<[f64; 2]> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("time must be positive, got {t}")));
    }
    let xp = [-x[1], x[0]];
    let mut out = [0.0; 2];
    let sigma_hi = (0.2 * (x[0].hypot(x[1]) + 1.0) / (tol * 1e-2).max(1e-14))
        .powf(1.0 / 3.0)
        .max(10.0);
    for c in 0..2 {
        if xp[c] == 0.0 {
            continue;
        }
        let grad_perp = |tau: f64| -xp[c] / (2.0 * tau) * gauss(tau, x);
        // inner: integral over z = ln(lambda)
        let mut outer = |w: f64| {
            let sigma = w.exp();
            let mut inner = |z: f64| {
                let lam = z.exp();
                (-0.25 / lam).exp() / lam.sqrt() * grad_perp(t + sigma * sigma * lam)
            };
            let (v, _) = adaptive_quad(&mut inner, -8.5, 60.0, tol * 1e-3)
                .expect("inner subordination quadrature");
            v * sigma
        };
        let (v, _) = adaptive_quad(&mut outer, -23.0, sigma_hi.ln(), tol * 0.1)?;
        out[c] = v / (2.0 * PI.sqrt());
    }
    Ok(out)
}

/// Time-quadrature node count for the Duhamel oracle (halved for the error
/// estimate, so it must stay even).
#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    pub nodes: usize,
    /// Acceptable sup-norm discrepancy between the n and n/2 node evaluations,
    /// relative to the field's sup norm.
    pub rel_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { nodes: 192, rel_tol: 1e-7 }
    }
}

#[derive(Debug)]
pub struct OracleResult {
    pub field: Field,
    /// Sup-norm difference between the full- and half-node quadratures.
    pub err_estimate: f64,
}

/// Evaluate the distortion J₁(t,·) of the given model on a grid, by per-mode
/// time quadrature of its defining integral.
pub fn duhamel_oracle(
    model: ModelKind,
    m0: f64,
    a: [f64; 2],
    t: f64,
    grid: &Grid,
    cfg: &OracleConfig,
) -> Result<OracleResult> {
    if cfg.nodes < 64 || cfg.nodes % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "oracle needs an even node count >= 64, got {}",
            cfg.nodes
        )));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("time must be positive, got {t}")));
    }
    let full = duhamel_coeffs(model, m0, a, t, grid, cfg.nodes);
    let half = duhamel_coeffs(model, m0, a, t, grid, cfg.nodes / 2);
    let f_full = field_from_continuous_coeffs(grid, full);
    let f_half = field_from_continuous_coeffs(grid, half);
    let mut err = 0.0f64;
    for (a, b) in f_full.values().iter().zip(f_half.values().iter()) {
        err = err.max((a - b).abs());
    }
    let scale = f_full.linf().max(1e-300);
    if err > cfg.rel_tol * scale && err > 1e-14 {
        return Err(Error::QuadratureNoConvergence(format!(
            "duhamel oracle: node-halving discrepancy {:.3e} exceeds {:.3e} (sup {:.3e})",
            err,
            cfg.rel_tol * scale,
            scale
        )));
    }
    Ok(OracleResult { field: f_full, err_estimate: err })
}

fn duhamel_coeffs(
    model: ModelKind,
    m0: f64,
    a: [f64; 2],
    t: f64,
    grid: &Grid,
    nodes: usize,
) -> Array2<Complex64> {
    let n = grid.n();
    let ks = grid.wavenumbers();
    let (xs, ws) = gauss_legendre(nodes);
    let mut coeffs = Array2::zeros((n, n));
    match model {
        ModelKind::Cd | ModelKind::Cd2 => {
            let c = model.mass_coefficient(m0) / (8.0 * PI);
            // s-nodes on (0, t); integrand continuous at 0 after subtraction
            let half = 0.5 * t;
            for i in 0..n {
                for j in 0..n {
                    if (i == 0 && j == 0) || grid.is_nyquist(i) || grid.is_nyquist(j) {
                        continue;
                    }
                    let k = [ks[i], ks[j]];
                    let k2 = k[0] * k[0] + k[1] * k[1];
                    let adotk = a[0] * k[0] + a[1] * k[1];
                    if adotk == 0.0 {
                        continue;
                    }
                    let mut acc = 0.0;
                    for (xq, wq) in xs.iter().zip(ws.iter()) {
                        let s = half * (xq + 1.0);
                        // (e^{-(t - s/2) k2} - e^{-t k2}) / s, both exponents <= 0
                        acc += wq * (((0.5 * s - t) * k2).exp() - (-t * k2).exp()) / s;
                    }
                    acc *= half;
                    coeffs[[i, j]] = Complex64::new(0.0, adotk * c * acc);
                }
            }
        }
        ModelKind::Fr | ModelKind::Qg => {
            let kmax = ks.iter().fold(0.0f64, |m, k| m.max(k.abs()));
            let mu = MuProfile::build(t.sqrt() * kmax * std::f64::consts::SQRT_2 + 1.0);
            let sq = t.sqrt();
            let half = 0.5 * sq;
            for i in 0..n {
                for j in 0..n {
                    if (i == 0 && j == 0) || grid.is_nyquist(i) || grid.is_nyquist(j) {
                        continue;
                    }
                    let k = [ks[i], ks[j]];
                    let kmag = k[0].hypot(k[1]);
                    let k2 = kmag * kmag;
                    // unit direction of the flux transform: xi-hat (FR) or xi-hat-perp (QG)
                    let (d0, d1, sign) = match model {
                        ModelKind::Fr => (k[0] / kmag, k[1] / kmag, 1.0),
                        ModelKind::Qg => (-k[1] / kmag, k[0] / kmag, -1.0),
                        _ => unreachable!(),
                    };
                    // i k . (i dhat) = -(k . dhat); for QG this is exactly zero
                    let kdot = k[0] * d0 + k[1] * d1;
                    let mut acc = 0.0;
                    for (xq, wq) in xs.iter().zip(ws.iter()) {
                        let v = half * (xq + 1.0);
                        // s = v^2; ds = 2v dv; s^{-1} mu(sqrt(s)|k|) -> 2 mu(v|k|)/v
                        acc += wq * 2.0 * mu.eval(v * kmag) / v * ((v * v - t) * k2).exp();
                    }
                    acc *= half;
                    coeffs[[i, j]] = Complex64::new(-sign * m0 * m0 * kdot * acc, 0.0);
                }
            }
        }
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplier::{apply_vector, VectorOp};
    use crate::series::{j1_cd, j1_cd_with_coef, j1_fr, DEFAULT_SERIES_TERMS};

    #[test]
    fn mu_matches_log_series() {
        // independent evaluation: mu = (2 pi)^{-1} sum_m exp(log-term)
        fn mu_series(kappa: f64) -> f64 {
            if kappa == 0.0 {
                return 0.0;
            }
            // t_0 = kappa Gamma(3/2)/2^{5/2}, ratio t_{m+1}/t_m = kappa^2 (m+3/2)/(2 (m+1)(m+2))
            let mut ln_t = kappa.ln() + (PI.sqrt() / 2.0).ln() - 2.5 * 2.0f64.ln();
            let mut acc = 0.0f64;
            let mut m = 0usize;
            loop {
                acc += (ln_t - kappa * kappa).exp();
                let ratio =
                    kappa * kappa * (m as f64 + 1.5) / (2.0 * ((m + 1) * (m + 2)) as f64);
                ln_t += ratio.ln();
                m += 1;
                if m > 20 && ratio < 0.5 && (ln_t - kappa * kappa).exp() < 1e-20 * acc {
                    break;
                }
                assert!(m < 100000);
            }
            acc / (2.0 * PI)
        }
        for &k in &[0.05, 0.2, 0.5, 1.0, 2.0, 3.0, 6.0, 12.0, 20.0] {
            let a = mu_direct(k);
            let b = mu_series(k);
            assert!((a - b).abs() <= 1e-11 * b.abs().max(1e-300), "kappa={k}: {a} vs {b}");
        }
    }

    #[test]
    fn mu_profile_interpolation_accuracy() {
        let p = MuProfile::build(30.0);
        let mut k = 0.013;
        while k < 29.0 {
            let a = p.eval(k);
            let b = mu_direct(k);
            assert!((a - b).abs() <= 1e-10 * b.abs().max(1e-300), "kappa={k}");
            k += 0.7371;
        }
    }

    #[test]
    fn subordination_identity_holds() {
        for &r in &[0.1, 1.0, 10.0] {
            let (v, _) = subordination_rhs(r).unwrap();
            assert!((v - (-r).exp()).abs() <= 1e-10, "r={r}: {v}");
        }
        // continuity near r = 0: still matches e^{-r}
        let (v, _) = subordination_rhs(1e-3).unwrap();
        assert!((v - (-1e-3f64).exp()).abs() <= 1e-6);
        assert!((v - 1.0).abs() <= 2e-3);
    }

    #[test]
    fn subordinated_riesz_matches_spectral_multiplier() {
        let grid = Grid::new(128, 30.0).unwrap();
        let g = Field::from_fn(&grid, |x, y| gauss(1.0, [x, y]));
        let [r1, r2] = apply_vector(&VectorOp::RieszPerp, &g);
        // probe points away from the box edge
        let probes: Vec<(usize, usize)> = (0..20)
            .map(|p| {
                let i = 34 + 3 * p;
                let j = 44 + ((7 * p) % 41);
                (i, j)
            })
            .collect();
        let mut scale = 0.0f64;
        for &(i, j) in &probes {
            scale = scale.max(r1.values()[[i, j]].abs().max(r2.values()[[i, j]].abs()));
        }
        for &(i, j) in &probes {
            let x = [grid.coord(i), grid.coord(j)];
            let quad = riesz_perp_gauss_subordinated(1.0, x, 1e-10).unwrap();
            for (got, want) in [(quad[0], r1.values()[[i, j]]), (quad[1], r2.values()[[i, j]])] {
                assert!(
                    (got - want).abs() <= 1e-6 * scale,
                    "probe ({i},{j}): {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn subordinated_riesz_vanishes_at_origin() {
        let v = riesz_perp_gauss_subordinated(1.0, [0.0, 0.0], 1e-10).unwrap();
        assert_eq!(v, [0.0, 0.0]);
    }

    #[test]
    fn cd_oracle_matches_series() {
        let grid = Grid::new(128, 30.0).unwrap();
        let (m0, a) = (1.0, [1.0, 0.0]);
        let res =
            duhamel_oracle(ModelKind::Cd, m0, a, 1.0, &grid, &OracleConfig::default()).unwrap();
        let series = Field::from_fn(&grid, |x, y| {
            j1_cd(1.0, [x, y], m0, a, DEFAULT_SERIES_TERMS).value
        });
        let scale = series.linf();
        let mut err = 0.0f64;
        for (o, s) in res.field.values().iter().zip(series.values().iter()) {
            err = err.max((o - s).abs());
        }
        assert!(err <= 1e-6 * scale, "rel err {}", err / scale);
    }

    #[test]
    fn cd2_oracle_is_cd_with_squared_mass() {
        let grid = Grid::new(64, 30.0).unwrap();
        let a = [0.3, -0.8];
        let m0 = -1.4; // CD and CD2 differ for negative mass
        let r2 =
            duhamel_oracle(ModelKind::Cd2, m0, a, 1.0, &grid, &OracleConfig::default()).unwrap();
        let series = Field::from_fn(&grid, |x, y| {
            j1_cd_with_coef(1.0, [x, y], m0 * m0, a, DEFAULT_SERIES_TERMS).value
        });
        let scale = series.linf();
        for (o, s) in r2.field.values().iter().zip(series.values().iter()) {
            assert!((o - s).abs() <= 1e-6 * scale);
        }
    }

    #[test]
    fn fr_oracle_matches_series() {
        let grid = Grid::new(128, 30.0).unwrap();
        let m0 = 1.0;
        let res = duhamel_oracle(ModelKind::Fr, m0, [0.0, 0.0], 1.0, &grid, &OracleConfig::default())
            .unwrap();
        let series =
            Field::from_fn(&grid, |x, y| j1_fr(1.0, [x, y], m0, DEFAULT_SERIES_TERMS).value);
        let scale = series.linf();
        let mut err = 0.0f64;
        for (o, s) in res.field.values().iter().zip(series.values().iter()) {
            err = err.max((o - s).abs());
        }
        assert!(err <= 1e-4 * scale, "rel err {}", err / scale);
    }

    #[test]
    fn qg_oracle_vanishes() {
        let grid = Grid::new(64, 30.0).unwrap();
        for &t in &[1.0, 4.0, 16.0] {
            let res =
                duhamel_oracle(ModelKind::Qg, 1.3, [0.0, 0.0], t, &grid, &OracleConfig::default())
                    .unwrap();
            let bound = 1e-8 * 1.3 * 1.3 * t.powf(-1.5);
            assert!(res.field.linf() <= bound, "t={t}: {}", res.field.linf());
        }
    }
}
