//! Time integration: pseudospectral nonlinearity assembly and an
//! integrating-factor RK4 stepper.
//!
//! All four models read dU/dt = ΔU + ∇·f[U] in spectral form
//! dû/dt = −|k|²û + N(û), N(û) = ik·f̂ with the flux f evaluated pointwise in
//! physical space on dealiased input and dealiased again after the product.
//! The diffusion factor e^{−|k|²dt} is applied exactly, so the scheme has no
//! diffusive CFL restriction; the advective step size is limited by
//! dt ≤ c·dx/max|velocity| plus an accuracy cap dt ≤ r·(1+t).
//!
//! One step (E = e^{−|k|²dt/2}):
//!
//!   Na = N(û)            ua = E(û + dt/2·Na)
//!   Nb = N(ua)           ub = E·û + dt/2·Nb
//!   Nc = N(ub)           uc = E²·û + dt·E·Nc
//!   Nd = N(uc)
//!   û⁺ = E²·û + dt/6·(E²·Na + 2E·(Nb + Nc) + Nd)
//!
//! The zero mode of N vanishes identically (k = 0 factor), so the mass ∫u dx
//! is conserved to the last bit.

use crate::error::{Error, Result};
use crate::fft2::fft2;
use crate::field::{Field, Spectrum};
use crate::grid::Grid;
use crate::model::{ModelKind, ModelSpec};
use crate::quad::{lq_norm, moments, MomentSet};
use ndarray::Array2;
use rustfft::num_complex::Complex64;

/// One Gaussian bump A·exp(−|x−c|²/(2w²)), mass A·2πw².
#[derive(Debug, Clone, Copy)]
pub struct GaussBump {
    pub amplitude: f64,
    pub center: [f64; 2],
    pub width: f64,
}

impl GaussBump {
    pub fn mass(&self) -> f64 {
        self.amplitude * 2.0 * std::f64::consts::PI * self.width * self.width
    }

    fn eval(&self, x: f64, y: f64) -> f64 {
        let dx = x - self.center[0];
        let dy = y - self.center[1];
        let e = (dx * dx + dy * dy) / (2.0 * self.width * self.width);
        if e >= 700.0 {
            0.0
        } else {
            self.amplitude * (-e).exp()
        }
    }
}

/// Prescribed target moments; amplitudes are solved for, geometry is kept.
#[derive(Debug, Clone, Copy)]
pub struct PrescribedMoments {
    pub m0: f64,
    /// In the −∫x u convention. `None` rescales masses to hit `m0` only.
    pub m1: Option<[f64; 2]>,
}

/// Sum-of-Gaussians initial data.
#[derive(Debug, Clone)]
pub struct InitialDataSpec {
    pub bumps: Vec<GaussBump>,
    pub prescribe: Option<PrescribedMoments>,
}

impl InitialDataSpec {
    /// Resolve prescribed moments (if any) into concrete bump amplitudes.
    pub fn resolve(&self) -> Result<Vec<GaussBump>> {
        let mut bumps = self.bumps.clone();
        if bumps.is_empty() {
            return Err(Error::InvalidConfig("initial data needs at least one bump".into()));
        }
        let Some(p) = self.prescribe else {
            return Ok(bumps);
        };
        match p.m1 {
            None => {
                let total: f64 = bumps.iter().map(|b| b.mass()).sum();
                if total.abs() < 1e-300 {
                    return Err(Error::InvalidConfig(
                        "cannot rescale to target mass: bump masses sum to zero".into(),
                    ));
                }
                let s = p.m0 / total;
                for b in &mut bumps {
                    b.amplitude *= s;
                }
            }
            Some(m1) => {
                // solve sum m_i = M0, sum c_i m_i = -M1 for masses m_i
                if bumps.len() < 3 {
                    return Err(Error::InvalidConfig(
                        "prescribing (M0, M1) needs at least three bumps".into(),
                    ));
                }
                let rhs = [p.m0, -m1[0], -m1[1]];
                let rows: Vec<[f64; 3]> =
                    bumps.iter().map(|b| [1.0, b.center[0], b.center[1]]).collect();
                // least-norm solution m = B^T (B B^T)^{-1} rhs
                let mut bbt = [[0.0f64; 3]; 3];
                for r in &rows {
                    for i in 0..3 {
                        for j in 0..3 {
                            bbt[i][j] += r[i] * r[j];
                        }
                    }
                }
                let y = solve3(bbt, rhs).ok_or_else(|| {
                    Error::InvalidConfig(
                        "bump centers are degenerate; cannot prescribe (M0, M1)".into(),
                    )
                })?;
                for (b, r) in bumps.iter_mut().zip(rows.iter()) {
                    let mass = r[0] * y[0] + r[1] * y[1] + r[2] * y[2];
                    b.amplitude = mass / (2.0 * std::f64::consts::PI * b.width * b.width);
                }
            }
        }
        Ok(bumps)
    }

    /// Sample on the grid; fails if the data leaks into the boundary frame.
    pub fn build(&self, grid: &Grid) -> Result<Field> {
        let bumps = self.resolve()?;
        let f = Field::from_fn(grid, |x, y| bumps.iter().map(|b| b.eval(x, y)).sum());
        let m = moments(&f);
        if m.tail_mass >= 1e-8 {
            return Err(Error::InvalidConfig(format!(
                "initial data tail mass {:.3e} >= 1e-8: move bumps inward or grow the box",
                m.tail_mass
            )));
        }
        Ok(f)
    }
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if det.abs() < 1e-12 {
        return None;
    }
    let mut x = [0.0; 3];
    for c in 0..3 {
        let mut m = a;
        for r in 0..3 {
            m[r][c] = b[r];
        }
        let d = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        x[c] = d / det;
    }
    Some(x)
}

/// Simulation parameters.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub grid_n: usize,
    pub grid_l: f64,
    pub model: ModelSpec,
    pub t_end: f64,
    /// Advective CFL safety factor in (0, 1].
    pub dt_cfl: f64,
    /// Accuracy cap dt ≤ dt_rel·(1 + t).
    pub dt_rel: f64,
    /// Absolute step cap.
    pub dt_max: f64,
    /// Fixed step override (convergence studies); still lands snapshots exactly.
    pub dt_fixed: Option<f64>,
    /// Strictly increasing snapshot times in (0, t_end].
    pub snapshot_times: Vec<f64>,
    pub initial: InitialDataSpec,
}

impl SimConfig {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid_n, self.grid_l)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        if !(self.t_end > 0.0) {
            return Err(Error::InvalidConfig("t_end must be positive".into()));
        }
        if !(self.dt_cfl > 0.0 && self.dt_cfl <= 1.0) {
            return Err(Error::InvalidConfig("cfl factor must be in (0, 1]".into()));
        }
        if !(self.dt_rel > 0.0) || !(self.dt_max > 0.0) {
            return Err(Error::InvalidConfig("step caps must be positive".into()));
        }
        if let Some(dt) = self.dt_fixed {
            if !(dt > 0.0) {
                return Err(Error::InvalidConfig("fixed step must be positive".into()));
            }
        }
        let mut prev = 0.0;
        for &t in &self.snapshot_times {
            if t <= prev || t > self.t_end * (1.0 + 1e-12) {
                return Err(Error::InvalidConfig(format!(
                    "snapshot times must be strictly increasing within (0, t_end], got {t}"
                )));
            }
            prev = t;
        }
        Ok(())
    }
}

/// Per-step diagnostics record.
#[derive(Debug, Clone, Copy)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    pub m0: f64,
    pub m1: [f64; 2],
    pub tail_mass: f64,
    /// ∫f[u] dx — the instantaneous first-moment drift rate.
    pub flux: [f64; 2],
}

#[derive(Debug)]
pub struct RunOutput {
    pub snapshots: Vec<(f64, Field)>,
    pub diagnostics: Vec<DiagnosticsRow>,
    /// Moments of the t = 0 field (expansion coefficients are defined from these).
    pub initial_moments: MomentSet,
}

/// Pseudospectral evaluator + integrating-factor RK4 stepper for one model.
pub struct Stepper {
    grid: Grid,
    model: ModelSpec,
    k1: Vec<f64>,
    keep: Array2<bool>,
    exp_half: Array2<f64>,
    exp_dt: f64,
}

/// Everything the run loop wants from one nonlinear evaluation.
struct FluxEval {
    nhat: Array2<Complex64>,
    max_velocity: f64,
    flux_integral: [f64; 2],
}

impl Stepper {
    pub fn new(grid: &Grid, model: ModelSpec) -> Stepper {
        let n = grid.n();
        let keep = Array2::from_shape_fn((n, n), |(i, j)| {
            grid.dealias_keep(i) && grid.dealias_keep(j) && !grid.is_nyquist(i) && !grid.is_nyquist(j)
        });
        Stepper {
            grid: grid.clone(),
            model,
            k1: grid.wavenumbers(),
            keep,
            exp_half: Array2::zeros((n, n)),
            exp_dt: f64::NAN,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    fn ensure_exp(&mut self, dt: f64) {
        if self.exp_dt == dt {
            return;
        }
        let n = self.grid.n();
        for i in 0..n {
            let ki2 = self.k1[i] * self.k1[i];
            for j in 0..n {
                let k2 = ki2 + self.k1[j] * self.k1[j];
                self.exp_half[[i, j]] = (-0.5 * dt * k2).exp();
            }
        }
        self.exp_dt = dt;
    }

    fn to_phys(&self, hat: &Array2<Complex64>) -> Array2<f64> {
        let mut w = hat.clone();
        fft2(&mut w, true);
        w.mapv(|z| z.re)
    }

    fn dealiased(&self, uhat: &Array2<Complex64>) -> Array2<Complex64> {
        let mut d = uhat.clone();
        for (z, &k) in d.iter_mut().zip(self.keep.iter()) {
            if !k {
                *z = Complex64::new(0.0, 0.0);
            }
        }
        d
    }

    /// Riesz or perpendicular-Riesz velocity components of a dealiased spectrum.
    fn riesz_velocity(&self, ud: &Array2<Complex64>, perp: bool) -> [Array2<f64>; 2] {
        let n = self.grid.n();
        let mut w1 = Array2::zeros((n, n));
        let mut w2 = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                let k = [self.k1[i], self.k1[j]];
                let kmag = k[0].hypot(k[1]);
                if kmag == 0.0 || !self.keep[[i, j]] {
                    continue;
                }
                let z = ud[[i, j]];
                let iz = Complex64::new(-z.im, z.re); // i*z
                if perp {
                    w1[[i, j]] = iz * (-k[1] / kmag);
                    w2[[i, j]] = iz * (k[0] / kmag);
                } else {
                    w1[[i, j]] = iz * (k[0] / kmag);
                    w2[[i, j]] = iz * (k[1] / kmag);
                }
            }
        }
        [self.to_phys(&w1), self.to_phys(&w2)]
    }

    /// N(û) = ik·f̂[u] plus the step-control data derived from the same fields.
    fn eval(&self, uhat: &Array2<Complex64>) -> FluxEval {
        let n = self.grid.n();
        let ud = self.dealiased(uhat);
        let u = self.to_phys(&ud);
        let da = self.grid.cell_area();
        let a = self.model.a;
        let (fluxes, max_velocity, flux_integral): ([Array2<f64>; 2], f64, [f64; 2]) =
            match self.model.kind {
                ModelKind::Qg | ModelKind::Fr => {
                    let perp = self.model.kind == ModelKind::Qg;
                    let sign = if perp { -1.0 } else { 1.0 };
                    let [w1, w2] = self.riesz_velocity(&ud, perp);
                    let mut vmax = 0.0f64;
                    let (mut s1, mut s2) = (0.0, 0.0);
                    let mut f1 = w1.clone();
                    let mut f2 = w2.clone();
                    for ((f1, f2), &uu) in
                        f1.iter_mut().zip(f2.iter_mut()).zip(u.iter())
                    {
                        vmax = vmax.max(f1.hypot(*f2));
                        *f1 *= sign * uu;
                        *f2 *= sign * uu;
                        s1 += *f1;
                        s2 += *f2;
                    }
                    ([f1, f2], vmax, [s1 * da, s2 * da])
                }
                ModelKind::Cd | ModelKind::Cd2 => {
                    let signed = self.model.kind == ModelKind::Cd;
                    let mut s = u.clone();
                    let mut umax = 0.0f64;
                    let mut total = 0.0;
                    for v in s.iter_mut() {
                        umax = umax.max(v.abs());
                        *v = if signed { v.abs() * *v } else { *v * *v };
                        total += *v;
                    }
                    let vmax = 2.0 * a[0].hypot(a[1]) * umax;
                    let f1 = s.mapv(|v| a[0] * v);
                    let f2 = s.mapv(|v| a[1] * v);
                    ([f1, f2], vmax, [a[0] * total * da, a[1] * total * da])
                }
            };
        // divergence in spectral space, dealiased, zero mode exactly zero
        let mut f1h = fluxes[0].mapv(|v| Complex64::new(v, 0.0));
        let mut f2h = fluxes[1].mapv(|v| Complex64::new(v, 0.0));
        fft2(&mut f1h, false);
        fft2(&mut f2h, false);
        let mut nhat = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                if !self.keep[[i, j]] {
                    continue;
                }
                let k = [self.k1[i], self.k1[j]];
                let dot = k[0] * f1h[[i, j]] + k[1] * f2h[[i, j]];
                nhat[[i, j]] = Complex64::new(-dot.im, dot.re); // i * dot
            }
        }
        FluxEval { nhat, max_velocity, flux_integral }
    }

    /// Advance one step of size dt. Returns the new spectrum.
    pub fn step(&mut self, uhat: &Array2<Complex64>, dt: f64) -> Array2<Complex64> {
        assert!(dt > 0.0);
        self.ensure_exp(dt);
        let e = &self.exp_half;
        let na = self.eval(uhat).nhat;
        let mut ua = uhat.clone();
        ua.zip_mut_with(&na, |z, &n| *z += 0.5 * dt * n);
        ua.zip_mut_with(e, |z, &f| *z *= f);
        let nb = self.eval(&ua).nhat;
        let mut ub = uhat.clone();
        ub.zip_mut_with(e, |z, &f| *z *= f);
        ub.zip_mut_with(&nb, |z, &n| *z += 0.5 * dt * n);
        let nc = self.eval(&ub).nhat;
        let mut uc = uhat.clone();
        uc.zip_mut_with(e, |z, &f| *z *= f);
        uc.zip_mut_with(&nc, |z, &n| *z += dt * n);
        uc.zip_mut_with(e, |z, &f| *z *= f);
        let nd = self.eval(&uc).nhat;
        // u+ = E2 u + dt/6 (E2 Na + 2 E (Nb + Nc) + Nd)
        let mut out = uhat.clone();
        out.zip_mut_with(&na, |z, &n| *z += dt / 6.0 * n);
        out.zip_mut_with(e, |z, &f| *z *= f);
        let mut mid = nb.clone();
        mid.zip_mut_with(&nc, |z, &n| *z += n);
        out.zip_mut_with(&mid, |z, &n| *z += dt / 3.0 * n);
        out.zip_mut_with(e, |z, &f| *z *= f);
        out.zip_mut_with(&nd, |z, &n| *z += dt / 6.0 * n);
        out
    }
}

/// Public single-evaluation flux operator: f[u] such that dU/dt = ΔU + ∇·f[U].
pub fn nonlinear_flux(model: ModelSpec, u: &Field) -> [Field; 2] {
    let stepper = Stepper::new(u.grid(), model);
    let uhat = u.spectrum();
    let ud = stepper.dealiased(uhat.coeffs());
    let up = stepper.to_phys(&ud);
    let [f1, f2] = match model.kind {
        ModelKind::Qg | ModelKind::Fr => {
            let perp = model.kind == ModelKind::Qg;
            let sign = if perp { -1.0 } else { 1.0 };
            let [mut w1, mut w2] = stepper.riesz_velocity(&ud, perp);
            w1.zip_mut_with(&up, |w, &u| *w *= sign * u);
            w2.zip_mut_with(&up, |w, &u| *w *= sign * u);
            [w1, w2]
        }
        ModelKind::Cd | ModelKind::Cd2 => {
            let signed = model.kind == ModelKind::Cd;
            let s = up.mapv(|v| if signed { v.abs() * v } else { v * v });
            [s.mapv(|v| model.a[0] * v), s.mapv(|v| model.a[1] * v)]
        }
    };
    [
        Field::from_values(u.grid(), f1).expect("flux stays finite"),
        Field::from_values(u.grid(), f2).expect("flux stays finite"),
    ]
}

fn diagnostics_of(t: f64, u: &Field, flux: [f64; 2]) -> Result<DiagnosticsRow> {
    let m = moments(u);
    let row = DiagnosticsRow {
        t,
        l1: lq_norm(u, 1.0)?,
        l2: lq_norm(u, 2.0)?,
        linf: u.linf(),
        m0: m.m0,
        m1: m.m1,
        tail_mass: m.tail_mass,
        flux,
    };
    if !(row.l1.is_finite() && row.l2.is_finite() && row.linf.is_finite()) {
        return Err(Error::Unstable { t, growth: f64::INFINITY });
    }
    Ok(row)
}

/// March the configured simulation from 0 to t_end.
pub fn run(config: &SimConfig) -> Result<RunOutput> {
    config.validate()?;
    let grid = config.grid()?;
    let u0 = config.initial.build(&grid)?;
    let initial_moments = moments(&u0);
    let mut stepper = Stepper::new(&grid, config.model);
    let mut uhat = u0.spectrum().coeffs().clone();
    let mut u = u0;
    let mut t = 0.0;
    let mut snapshots = Vec::new();
    let mut diagnostics = Vec::new();
    let mut pending: std::collections::VecDeque<f64> =
        config.snapshot_times.iter().copied().collect();

    let first = stepper.eval(&uhat);
    diagnostics.push(diagnostics_of(0.0, &u, first.flux_integral)?);

    let dx = grid.dx();
    let tiny = 1e-12 * config.t_end;
    while t < config.t_end - tiny {
        let eval = stepper.eval(&uhat);
        let mut dt = match config.dt_fixed {
            Some(fixed) => fixed,
            None => {
                let cfl = config.dt_cfl * dx / eval.max_velocity.max(1e-12);
                cfl.min(config.dt_rel * (1.0 + t)).min(config.dt_max)
            }
        };
        // land exactly on the next snapshot / the horizon
        let target = pending.front().copied().unwrap_or(config.t_end).min(config.t_end);
        if t + dt >= target - tiny {
            dt = target - t;
        }
        let prev_linf = u.linf();
        uhat = stepper.step(&uhat, dt);
        t += dt;
        u = Spectrum::from_coeffs(&grid, uhat.clone()).field();
        let linf = u.linf();
        if linf > 10.0 * prev_linf.max(1e-300) {
            return Err(Error::Unstable { t, growth: linf / prev_linf.max(1e-300) });
        }
        let eval_now = stepper.eval(&uhat);
        let row = diagnostics_of(t, &u, eval_now.flux_integral)?;
        if row.tail_mass > 1e-6 {
            return Err(Error::TailMass { t, tail: row.tail_mass });
        }
        diagnostics.push(row);
        if let Some(&next) = pending.front() {
            if (t - next).abs() <= tiny.max(1e-9 * next) {
                snapshots.push((next, u.clone()));
                pending.pop_front();
            }
        }
    }
    Ok(RunOutput { snapshots, diagnostics, initial_moments })
}
