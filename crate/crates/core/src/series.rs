//! Closed-form evaluation of the second-order large-time expansion terms.
//!
//! For each model the solution behaves, as t → ∞, like a stack of explicit
//! profiles built from the heat kernel:
//!
//! * leading:   M₀ G(t,x)
//! * moment:    M₁·∇G(t,x)                       (M₁ in the −∫x u convention)
//! * log shift: (c/8π)(a·∇G)(t,x)·log t           (CD/CD2 only; c = |M₀|M₀ or M₀²)
//! * distortion J₁(t,x): an explicit Laplacian-power series of G
//!
//! The CD distortion is
//!   J₁ = (c/8π) Σ_{k≥1} (t/2)^k a·∇(−Δ)^k G(t) / (k·k!)
//!      = −(c/8π)·(a·x/2t)·G(t,x)·Σ_{k≥1} 2^{−k} L_k^{(1)}(u)/k,
//! and the forward-Riesz one is
//!   J₁ = −(M₀²/4√π) Σ_{k≥0} (t/2)^{k+1/2} (2k−1)!! (−Δ)^{k+1}G(t) / (k!(2k+2)!!)
//!      = −(M₀²/4√π)·2^{−3/2} t^{−1/2} G(t,x)·Σ_{k≥0} C(2k,k) 8^{−k} L_{k+1}(u),
//! with u = |x|²/(4t) and L the (generalized) Laguerre polynomials. Both series
//! terms decay geometrically like 2^{−k}, so the truncation tail is tracked by
//! the magnitude of the last retained term. The quasi-geostrophic distortion
//! vanishes identically, so no J₁ evaluator exists for it.
//!
//! Every term obeys the parabolic scaling λ³·term(λ²t, λx) = term(t, x).

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::ladder::{gauss, grad_gauss, laguerre, laguerre1};
use crate::model::ModelKind;
use std::f64::consts::PI;

/// Default truncation order; 2^{−48} leaves the tail far below every test tolerance.
pub const DEFAULT_SERIES_TERMS: usize = 48;

/// Truncated series value plus the magnitude of the last retained term.
#[derive(Debug, Clone, Copy)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_proxy: f64,
}

/// M₀ G(t,x).
pub fn leading_term(t: f64, x: [f64; 2], m0: f64) -> f64 {
    m0 * gauss(t, x)
}

/// M₁·∇G(t,x).
pub fn moment_term(t: f64, x: [f64; 2], m1: [f64; 2]) -> f64 {
    let g = grad_gauss(t, x);
    m1[0] * g[0] + m1[1] * g[1]
}

/// Logarithmic shift (c/8π)(a·∇G)(t,x)·log t with c the model's mass coefficient.
pub fn logshift_term(kind: ModelKind, t: f64, x: [f64; 2], m0: f64, a: [f64; 2]) -> f64 {
    let c = kind.mass_coefficient(m0);
    let g = grad_gauss(t, x);
    c / (8.0 * PI) * (a[0] * g[0] + a[1] * g[1]) * t.ln()
}

fn u_of(t: f64, x: [f64; 2]) -> f64 {
    (x[0] * x[0] + x[1] * x[1]) / (4.0 * t)
}

/// Convective distortion J₁ for CD (`coef = |M₀|M₀`) or CD2 (`coef = M₀²`).
pub fn j1_cd_with_coef(t: f64, x: [f64; 2], coef: f64, a: [f64; 2], terms: usize) -> SeriesValue {
    debug_assert!(t > 0.0 && terms >= 1);
    if coef == 0.0 {
        return SeriesValue { value: 0.0, tail_proxy: 0.0 };
    }
    let u = u_of(t, x);
    if u >= 700.0 {
        return SeriesValue { value: 0.0, tail_proxy: 0.0 };
    }
    let prefix = -coef / (8.0 * PI) * ((a[0] * x[0] + a[1] * x[1]) / (2.0 * t)) * gauss(t, x);
    // sum_{k=1}^{terms} 2^{-k} L_k^{(1)}(u) / k with the running recurrence
    let mut sum = 0.0;
    let mut last = 0.0;
    let (mut prev, mut cur) = (1.0, 2.0 - u); // L^{(1)}_0, L^{(1)}_1
    let mut pow = 1.0;
    for k in 1..=terms {
        pow *= 0.5;
        last = pow * cur / k as f64;
        sum += last;
        let n = k;
        let next = ((2 * n + 2) as f64 - u) * cur - (n + 1) as f64 * prev;
        prev = cur;
        cur = next / (n + 1) as f64;
    }
    SeriesValue {
        value: prefix * sum,
        tail_proxy: (prefix * last).abs(),
    }
}

/// J₁ for the convection-diffusion model, signed mass coefficient |M₀|M₀.
pub fn j1_cd(t: f64, x: [f64; 2], m0: f64, a: [f64; 2], terms: usize) -> SeriesValue {
    j1_cd_with_coef(t, x, m0.abs() * m0, a, terms)
}

/// Radially symmetric distortion J₁ for the forward-Riesz model.
pub fn j1_fr(t: f64, x: [f64; 2], m0: f64, terms: usize) -> SeriesValue {
    debug_assert!(t > 0.0 && terms >= 1);
    if m0 == 0.0 {
        return SeriesValue { value: 0.0, tail_proxy: 0.0 };
    }
    let u = u_of(t, x);
    if u >= 700.0 {
        return SeriesValue { value: 0.0, tail_proxy: 0.0 };
    }
    let prefix = -(m0 * m0) / (4.0 * PI.sqrt()) * 0.5f64.powf(1.5) / t.sqrt() * gauss(t, x);
    // sum_{k=0}^{terms-1} C(2k,k) 8^{-k} L_{k+1}(u)
    let mut sum = 0.0;
    let mut last = 0.0;
    let mut b = 1.0; // C(2k,k)/8^k
    let (mut prev, mut cur) = (1.0, 1.0 - u); // L_0, L_1
    for k in 0..terms {
        last = b * cur;
        sum += last;
        b *= (2 * k + 1) as f64 / (4.0 * (k + 1) as f64);
        let n = k + 1;
        let next = ((2 * n + 1) as f64 - u) * cur - n as f64 * prev;
        prev = cur;
        cur = next / (n + 1) as f64;
    }
    SeriesValue {
        value: prefix * sum,
        tail_proxy: (prefix * last).abs(),
    }
}

/// Which expansion terms to stack.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StackFlags {
    pub leading: bool,
    pub moment: bool,
    pub logshift: bool,
    pub j1: bool,
}

impl StackFlags {
    pub const LEADING: StackFlags =
        StackFlags { leading: true, moment: false, logshift: false, j1: false };
    pub const WITH_MOMENT: StackFlags =
        StackFlags { leading: true, moment: true, logshift: false, j1: false };

    /// Everything the model admits: log shift only for CD/CD2, J₁ for CD/CD2/FR.
    pub fn full(kind: ModelKind) -> StackFlags {
        match kind {
            ModelKind::Qg => StackFlags::WITH_MOMENT,
            ModelKind::Cd | ModelKind::Cd2 => {
                StackFlags { leading: true, moment: true, logshift: true, j1: true }
            }
            ModelKind::Fr => StackFlags { leading: true, moment: true, logshift: false, j1: true },
        }
    }
}

/// Parameters of an expansion stack evaluation.
#[derive(Debug, Clone, Copy)]
pub struct StackParams {
    pub m0: f64,
    pub m1: [f64; 2],
    pub a: [f64; 2],
    pub terms: usize,
}

/// Sample the selected expansion terms on a grid.
///
/// Rejects flag/model mismatches: the log shift and J₁ are provably absent for
/// the quasi-geostrophic model, and the log shift vanishes for forward-Riesz.
pub fn expansion_stack(
    kind: ModelKind,
    t: f64,
    grid: &Grid,
    params: &StackParams,
    flags: StackFlags,
) -> Result<Field> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("stack time must be positive, got {t}")));
    }
    if flags.logshift && !matches!(kind, ModelKind::Cd | ModelKind::Cd2) {
        return Err(Error::InvalidArgument(format!(
            "log-shift term does not exist for model '{}'",
            kind.name()
        )));
    }
    if flags.j1 && kind == ModelKind::Qg {
        return Err(Error::InvalidArgument(
            "the quasi-geostrophic distortion vanishes identically; no J1 term to stack".into(),
        ));
    }
    let coef = kind.mass_coefficient(params.m0);
    let field = Field::from_fn(grid, |x, y| {
        let p = [x, y];
        let mut v = 0.0;
        if flags.leading {
            v += leading_term(t, p, params.m0);
        }
        if flags.moment {
            v += moment_term(t, p, params.m1);
        }
        if flags.logshift {
            v += logshift_term(kind, t, p, params.m0, params.a);
        }
        if flags.j1 {
            v += match kind {
                ModelKind::Cd | ModelKind::Cd2 => {
                    j1_cd_with_coef(t, p, coef, params.a, params.terms).value
                }
                ModelKind::Fr => j1_fr(t, p, params.m0, params.terms).value,
                ModelKind::Qg => unreachable!(),
            };
        }
        v
    });
    Ok(field)
}
