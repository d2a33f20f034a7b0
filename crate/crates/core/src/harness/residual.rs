//! Residuals of simulation snapshots against the closed-form expansion stacks.

use crate::dynamics::{DiagnosticsRow, RunOutput};
use crate::error::{Error, Result};
use crate::model::{ModelKind, ModelSpec};
use crate::quad::lq_norm;
use crate::series::{expansion_stack, StackFlags, StackParams};
use std::f64::consts::PI;

/// Residual depth: which expansion terms get subtracted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualLevel {
    /// u − M₀G
    Leading,
    /// u − M₀G − M₁·∇G
    Moment,
    /// everything the model admits (log shift, J₁)
    Full,
}

impl ResidualLevel {
    pub fn index(&self) -> u8 {
        match self {
            ResidualLevel::Leading => 0,
            ResidualLevel::Moment => 1,
            ResidualLevel::Full => 2,
        }
    }

    pub fn parse(s: &str) -> Result<ResidualLevel> {
        match s.trim() {
            "0" | "leading" => Ok(ResidualLevel::Leading),
            "1" | "moment" => Ok(ResidualLevel::Moment),
            "2" | "full" => Ok(ResidualLevel::Full),
            other => Err(Error::InvalidConfig(format!("unknown residual level '{other}'"))),
        }
    }

    pub fn flags(&self, kind: ModelKind) -> StackFlags {
        match self {
            ResidualLevel::Leading => StackFlags::LEADING,
            ResidualLevel::Moment => StackFlags::WITH_MOMENT,
            ResidualLevel::Full => StackFlags::full(kind),
        }
    }
}

/// One experiment: a run compared against profile stacks over a fit window.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub name: String,
    pub model: ModelSpec,
    pub levels: Vec<ResidualLevel>,
    pub qs: Vec<f64>,
    /// (t_lo, t_hi) for exponent fits.
    pub fit_window: (f64, f64),
    /// Compare u(t) against stacks evaluated at t + time_shift.
    pub time_shift: f64,
    pub series_terms: usize,
    /// Fold the estimated flux-correction into M₁ (convective models).
    pub estimate_ambiguous: bool,
}

impl ExperimentPlan {
    /// Fit window must sit inside the snapshot range and contain at least
    /// 8 roughly geometrically spaced snapshots.
    pub fn validate_window(&self, snapshot_times: &[f64]) -> Result<()> {
        let (lo, hi) = self.fit_window;
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::InvalidConfig("fit window must satisfy 0 < lo < hi".into()));
        }
        let inside: Vec<f64> = snapshot_times
            .iter()
            .copied()
            .filter(|&t| t >= lo * (1.0 - 1e-9) && t <= hi * (1.0 + 1e-9))
            .collect();
        if inside.len() < 8 {
            return Err(Error::InvalidConfig(format!(
                "fit window [{lo}, {hi}] holds {} snapshots, need >= 8",
                inside.len()
            )));
        }
        let mut rmin = f64::INFINITY;
        let mut rmax: f64 = 0.0;
        for w in inside.windows(2) {
            let r = w[1] / w[0];
            rmin = rmin.min(r);
            rmax = rmax.max(r);
        }
        if rmax > 2.5 * rmin {
            return Err(Error::InvalidConfig(
                "snapshots in the fit window are far from geometric spacing".into(),
            ));
        }
        Ok(())
    }
}

/// Per-(snapshot, q, level) residual norm record.
#[derive(Debug, Clone, Copy)]
pub struct ResidualRow {
    pub t: f64,
    pub q: f64,
    pub level: u8,
    pub norm: f64,
    pub m0: f64,
    pub m1: [f64; 2],
    pub tail_mass: f64,
}

/// Estimate of the flux correction to M₁ for convective models:
/// a·∫₀^∞ (∫f dy − c/(8π(1+s))) ds with a fitted s^{−3/2} tail beyond t_end.
#[derive(Debug, Clone, Copy, Default)]
pub struct AmbiguousEstimate {
    pub delta_m1: [f64; 2],
    pub tail: [f64; 2],
    pub err_estimate: f64,
}

pub fn ambiguous_moment_correction(
    rows: &[DiagnosticsRow],
    model: &ModelSpec,
    m0: f64,
) -> AmbiguousEstimate {
    if !model.kind.uses_drift() || rows.len() < 4 {
        return AmbiguousEstimate::default();
    }
    let c = model.kind.mass_coefficient(m0) / (8.0 * PI);
    let g = |r: &DiagnosticsRow| {
        [r.flux[0] - model.a[0] * c / (1.0 + r.t), r.flux[1] - model.a[1] * c / (1.0 + r.t)]
    };
    let mut acc = [0.0f64; 2];
    for w in rows.windows(2) {
        let ga = g(&w[0]);
        let gb = g(&w[1]);
        let dt = w[1].t - w[0].t;
        acc[0] += 0.5 * (ga[0] + gb[0]) * dt;
        acc[1] += 0.5 * (ga[1] + gb[1]) * dt;
    }
    // tail: g(s) ~ C s^{-3/2}; estimate C from the last decade of rows
    let t_end = rows.last().unwrap().t;
    let cut = t_end / 4.0;
    let mut cs: Vec<[f64; 2]> = Vec::new();
    for r in rows.iter().filter(|r| r.t >= cut && r.t > 0.0) {
        let gg = g(r);
        let w = r.t.powf(1.5);
        cs.push([gg[0] * w, gg[1] * w]);
    }
    let mut tail = [0.0f64; 2];
    let mut spread = 0.0f64;
    if !cs.is_empty() {
        let mut mean = [0.0f64; 2];
        for v in &cs {
            mean[0] += v[0];
            mean[1] += v[1];
        }
        mean[0] /= cs.len() as f64;
        mean[1] /= cs.len() as f64;
        for v in &cs {
            spread = spread.max((v[0] - mean[0]).hypot(v[1] - mean[1]));
        }
        // integral_{t_end}^inf C s^{-3/2} ds = 2 C / sqrt(t_end)
        tail = [2.0 * mean[0] / t_end.sqrt(), 2.0 * mean[1] / t_end.sqrt()];
        spread = 2.0 * spread / t_end.sqrt();
    }
    AmbiguousEstimate {
        delta_m1: [acc[0] + tail[0], acc[1] + tail[1]],
        tail,
        err_estimate: spread,
    }
}

/// Residual norms of every snapshot against the plan's stacks.
pub fn residual_rows(out: &RunOutput, plan: &ExperimentPlan) -> Result<Vec<ResidualRow>> {
    let m = out.initial_moments;
    let mut m1 = m.m1;
    if plan.estimate_ambiguous {
        let est = ambiguous_moment_correction(&out.diagnostics, &plan.model, m.m0);
        m1[0] += est.delta_m1[0];
        m1[1] += est.delta_m1[1];
    }
    let params = StackParams { m0: m.m0, m1, a: plan.model.a, terms: plan.series_terms };
    let mut rows = Vec::new();
    for (t, u) in &out.snapshots {
        let tail = crate::quad::moments(u).tail_mass;
        for level in &plan.levels {
            let stack = expansion_stack(
                plan.model.kind,
                t + plan.time_shift,
                u.grid(),
                &params,
                level.flags(plan.model.kind),
            )?;
            let resid = u.zip_with(&stack, |a, b| a - b)?;
            for &q in &plan.qs {
                rows.push(ResidualRow {
                    t: *t,
                    q,
                    level: level.index(),
                    norm: lq_norm(&resid, q)?,
                    m0: m.m0,
                    m1,
                    tail_mass: tail,
                });
            }
        }
    }
    Ok(rows)
}

/// Pull one (q, level) decay curve out of residual rows, restricted to a window.
pub fn curve(
    rows: &[ResidualRow],
    q: f64,
    level: u8,
    window: (f64, f64),
) -> (Vec<f64>, Vec<f64>) {
    let mut pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| {
            r.level == level
                && ((r.q.is_infinite() && q.is_infinite()) || (r.q - q).abs() < 1e-12)
                && r.t >= window.0 * (1.0 - 1e-9)
                && r.t <= window.1 * (1.0 + 1e-9)
        })
        .map(|r| (r.t, r.norm))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.into_iter().unzip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{run, GaussBump, InitialDataSpec, PrescribedMoments, SimConfig};
    use crate::model::{ModelKind, ModelSpec};

    #[test]
    fn linear_heat_residual_vanishes_with_time_shift() {
        // radial QG evolves linearly; u0 = mass-1 bump of width 1 = G(1/2,.),
        // so u(t) = G(t + 1/2) and the shifted level-0 stack is exact.
        let cfg = SimConfig {
            grid_n: 128,
            grid_l: 40.0,
            model: ModelSpec::new(ModelKind::Qg, [0.0, 0.0]).unwrap(),
            t_end: 4.0,
            dt_cfl: 0.5,
            dt_rel: 0.2,
            dt_max: 1.0,
            dt_fixed: None,
            snapshot_times: vec![1.0, 2.0, 4.0],
            initial: InitialDataSpec {
                bumps: vec![GaussBump { amplitude: 1.0, center: [0.0, 0.0], width: 1.0 }],
                prescribe: Some(PrescribedMoments { m0: 1.0, m1: None }),
            },
        };
        let out = run(&cfg).unwrap();
        let mk_plan = |shift: f64| ExperimentPlan {
            name: "heat".into(),
            model: cfg.model,
            levels: vec![ResidualLevel::Leading],
            qs: vec![f64::INFINITY],
            fit_window: (1.0, 4.0),
            time_shift: shift,
            series_terms: 32,
            estimate_ambiguous: false,
        };
        let shifted = residual_rows(&out, &mk_plan(0.5)).unwrap();
        for r in &shifted {
            assert!(r.norm <= 1e-10, "t={} norm={}", r.t, r.norm);
        }
        let unshifted = residual_rows(&out, &mk_plan(0.0)).unwrap();
        assert!(unshifted.iter().all(|r| r.norm > 1e-5));
    }

    #[test]
    fn window_validation() {
        let plan = ExperimentPlan {
            name: "x".into(),
            model: ModelSpec::new(ModelKind::Qg, [0.0, 0.0]).unwrap(),
            levels: vec![],
            qs: vec![],
            fit_window: (10.0, 100.0),
            time_shift: 0.0,
            series_terms: 32,
            estimate_ambiguous: false,
        };
        let geo: Vec<f64> =
            (0..12).map(|i| 10.0 * 10f64.powf(i as f64 / 11.0)).collect();
        assert!(plan.validate_window(&geo).is_ok());
        assert!(plan.validate_window(&geo[..6]).is_err());
        let lumpy = vec![10.0, 10.5, 11.0, 11.5, 12.0, 12.5, 13.0, 99.0];
        assert!(plan.validate_window(&lumpy).is_err());
    }
}
