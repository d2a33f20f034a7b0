//! Model selection: which PDE and which drift parameters.

use crate::error::{Error, Result};

/// The four evolution models. All read ∂_t u = Δu + ∇·f[u]:
///
/// * `Qg`:  f[u] = −u·ℛ⊥u
/// * `Cd`:  f[u] = a·|u|u
/// * `Cd2`: f[u] = a·u²
/// * `Fr`:  f[u] = u·ℛu
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Qg,
    Cd,
    Cd2,
    Fr,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Qg => "qg",
            ModelKind::Cd => "cd",
            ModelKind::Cd2 => "cd2",
            ModelKind::Fr => "fr",
        }
    }

    pub fn parse(s: &str) -> Result<ModelKind> {
        match s.to_ascii_lowercase().as_str() {
            "qg" => Ok(ModelKind::Qg),
            "cd" => Ok(ModelKind::Cd),
            "cd2" => Ok(ModelKind::Cd2),
            "fr" => Ok(ModelKind::Fr),
            other => Err(Error::InvalidConfig(format!("unknown model kind '{other}'"))),
        }
    }

    /// Does the model carry a drift vector a?
    pub fn uses_drift(&self) -> bool {
        matches!(self, ModelKind::Cd | ModelKind::Cd2)
    }

    /// Quadratic mass coefficient entering log-shift and distortion terms:
    /// |M₀|M₀ for the signed nonlinearity, M₀² for the squared one.
    pub fn mass_coefficient(&self, m0: f64) -> f64 {
        match self {
            ModelKind::Cd => m0.abs() * m0,
            ModelKind::Cd2 | ModelKind::Fr | ModelKind::Qg => m0 * m0,
        }
    }
}

/// Model kind plus drift vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub a: [f64; 2],
}

impl ModelSpec {
    /// `a` must be zero (or omitted) unless the model is convective.
    pub fn new(kind: ModelKind, a: [f64; 2]) -> Result<ModelSpec> {
        if !(a[0].is_finite() && a[1].is_finite()) {
            return Err(Error::InvalidConfig("drift vector must be finite".into()));
        }
        if !kind.uses_drift() && (a[0] != 0.0 || a[1] != 0.0) {
            return Err(Error::InvalidConfig(format!(
                "model '{}' takes no drift vector, got a = ({}, {})",
                kind.name(),
                a[0],
                a[1]
            )));
        }
        Ok(ModelSpec { kind, a })
    }
}
