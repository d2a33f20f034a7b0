//! Fourier-multiplier operators on periodic fields.
//!
//! Scalar symbols act bin-wise on the spectrum; vector operators are pairs of
//! signed scalar components. Odd symbols (derivatives, Riesz transforms) are
//! zeroed on the unpaired Nyquist row/column to keep outputs exactly real and
//! the discrete skew-adjointness exact; the Riesz symbols take the value 0 at
//! ξ = 0 (the principal-value convention for constants).

use crate::error::Result;
use crate::field::{same_grid, Field, Spectrum};
use rustfft::num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    fn pick(self, k: [f64; 2]) -> f64 {
        match self {
            Axis::X => k[0],
            Axis::Y => k[1],
        }
    }
}

/// Scalar Fourier symbols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarOp {
    /// Heat semigroup e^{−t|ξ|²}.
    Heat { t: f64 },
    /// Λ = (−Δ)^{1/2}, symbol |ξ|.
    Lambda,
    /// −Δ, symbol |ξ|².
    NegLaplacian,
    /// |ξ|^{2k} e^{−t|ξ|²} (heat-smoothed Laplacian power).
    LapPowHeat { k: u32, t: f64 },
    /// ∂_j, symbol iξ_j.
    Deriv(Axis),
    /// ℛ_j = ∂_j(−Δ)^{−1/2}, symbol iξ_j/|ξ|, 0 at ξ = 0.
    Riesz(Axis),
}

impl ScalarOp {
    /// Odd symbols change sign under ξ → −ξ and must vanish at Nyquist.
    pub fn is_odd(&self) -> bool {
        matches!(self, ScalarOp::Deriv(_) | ScalarOp::Riesz(_))
    }

    pub fn symbol(&self, k: [f64; 2]) -> Complex64 {
        let k2 = k[0] * k[0] + k[1] * k[1];
        match *self {
            ScalarOp::Heat { t } => Complex64::new((-t * k2).exp(), 0.0),
            ScalarOp::Lambda => Complex64::new(k2.sqrt(), 0.0),
            ScalarOp::NegLaplacian => Complex64::new(k2, 0.0),
            ScalarOp::LapPowHeat { k: p, t } => {
                if p == 0 {
                    Complex64::new((-t * k2).exp(), 0.0)
                } else {
                    Complex64::new(k2.powi(p as i32) * (-t * k2).exp(), 0.0)
                }
            }
            ScalarOp::Deriv(ax) => Complex64::new(0.0, ax.pick(k)),
            ScalarOp::Riesz(ax) => {
                if k2 == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, ax.pick(k) / k2.sqrt())
                }
            }
        }
    }
}

/// Vector operators as signed pairs of scalar components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorOp {
    /// ∇ = (∂₁, ∂₂)
    Grad,
    /// ∇⊥ = (−∂₂, ∂₁)
    GradPerp,
    /// ℛ = (ℛ₁, ℛ₂)
    Riesz,
    /// ℛ⊥ = (−ℛ₂, ℛ₁)
    RieszPerp,
}

impl VectorOp {
    pub fn components(&self) -> [(f64, ScalarOp); 2] {
        match self {
            VectorOp::Grad => [(1.0, ScalarOp::Deriv(Axis::X)), (1.0, ScalarOp::Deriv(Axis::Y))],
            VectorOp::GradPerp => {
                [(-1.0, ScalarOp::Deriv(Axis::Y)), (1.0, ScalarOp::Deriv(Axis::X))]
            }
            VectorOp::Riesz => [(1.0, ScalarOp::Riesz(Axis::X)), (1.0, ScalarOp::Riesz(Axis::Y))],
            VectorOp::RieszPerp => {
                [(-1.0, ScalarOp::Riesz(Axis::Y)), (1.0, ScalarOp::Riesz(Axis::X))]
            }
        }
    }
}

/// Multiply a spectrum by a scalar symbol (optionally pre-scaled).
pub fn apply_to_spectrum(op: &ScalarOp, scale: f64, s: &Spectrum) -> Spectrum {
    let grid = s.grid().clone();
    let n = grid.n();
    let ks: Vec<f64> = grid.wavenumbers();
    let mut out = s.clone();
    let odd = op.is_odd();
    let c = out.coeffs_mut();
    for i in 0..n {
        for j in 0..n {
            let zero_nyq = odd && (grid.is_nyquist(i) || grid.is_nyquist(j));
            let sym = if zero_nyq {
                Complex64::new(0.0, 0.0)
            } else {
                op.symbol([ks[i], ks[j]])
            };
            c[[i, j]] *= sym * scale;
        }
    }
    out
}

/// Apply a scalar multiplier to a field (forward transform, multiply, inverse).
pub fn apply(op: &ScalarOp, f: &Field) -> Field {
    apply_to_spectrum(op, 1.0, &f.spectrum()).field()
}

/// Apply a vector multiplier, returning both component fields.
pub fn apply_vector(op: &VectorOp, f: &Field) -> [Field; 2] {
    let s = f.spectrum();
    let [(s0, c0), (s1, c1)] = op.components();
    [
        apply_to_spectrum(&c0, s0, &s).field(),
        apply_to_spectrum(&c1, s1, &s).field(),
    ]
}

/// Vector apply at spectrum level (no inverse transform).
pub fn apply_vector_to_spectrum(op: &VectorOp, s: &Spectrum) -> [Spectrum; 2] {
    let [(s0, c0), (s1, c1)] = op.components();
    [apply_to_spectrum(&c0, s0, s), apply_to_spectrum(&c1, s1, s)]
}

/// ∫ f·(op g) dx by rectangle-rule quadrature.
///
/// For op = ℛ_j this pairing is exactly antisymmetric in (f, g) on the discrete
/// grid (odd symbol, Nyquist zeroed), the discrete form of skew-adjointness.
pub fn skew_pairing(f: &Field, g: &Field, op: &ScalarOp) -> Result<f64> {
    same_grid(f.grid(), g.grid())?;
    let og = apply(op, g);
    let mut acc = 0.0;
    for (a, b) in f.values().iter().zip(og.values().iter()) {
        acc += a * b;
    }
    Ok(acc * f.grid().cell_area())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::ladder::gauss;
    use crate::testing::random_smooth_field;
    use std::f64::consts::PI;

    fn single_mode_field(grid: &Grid, fx: i64, fy: i64) -> Field {
        // real field cos(k.x) built from a conjugate pair of bins
        let kx = 2.0 * PI / grid.side() * fx as f64;
        let ky = 2.0 * PI / grid.side() * fy as f64;
        Field::from_fn(grid, |x, y| (kx * x + ky * y).cos())
    }

    #[test]
    fn riesz_phase_on_single_mode() {
        // R applied to cos(k.x) with k = (k1, 0): component 1 is i-phase => -sin, component 2 is 0
        let grid = Grid::new(32, 2.0 * PI).unwrap();
        let f = single_mode_field(&grid, 1, 0);
        let [r1, r2] = apply_vector(&VectorOp::Riesz, &f);
        let want = Field::from_fn(&grid, |x, _| -(x).sin());
        for ((a, b), z) in r1.values().iter().zip(want.values().iter()).zip(r2.values().iter()) {
            assert!((a - b).abs() < 1e-12);
            assert!(z.abs() < 1e-12);
        }
    }

    #[test]
    fn riesz_perp_on_single_mode() {
        // R_perp = (-R_2, R_1): on k = (k1, 0) component 1 is 0, component 2 gets the i-phase
        let grid = Grid::new(32, 2.0 * PI).unwrap();
        let f = single_mode_field(&grid, 1, 0);
        let [r1, r2] = apply_vector(&VectorOp::RieszPerp, &f);
        let want = Field::from_fn(&grid, |x, _| -(x).sin());
        for ((a, b), z) in r2.values().iter().zip(want.values().iter()).zip(r1.values().iter()) {
            assert!((a - b).abs() < 1e-12);
            assert!(z.abs() < 1e-12);
        }
    }

    #[test]
    fn heat_multiplier_on_delta_matches_closed_form() {
        let grid = Grid::new(256, 40.0).unwrap();
        let delta = Field::delta(&grid);
        let dx = grid.dx();
        // probe times strictly inside [4 dx, L/16] in sqrt(t); the right endpoint
        // itself picks up a periodic-image contribution of order e^{-16}
        for &rt in &[4.0 * dx, grid.side() / 32.0, grid.side() / 20.0] {
            let t = rt * rt;
            let heated = apply(&ScalarOp::Heat { t }, &delta);
            let exact = Field::from_fn(&grid, |x, y| gauss(t, [x, y]));
            let scale = exact.linf();
            let mut err = 0.0f64;
            for (a, b) in heated.values().iter().zip(exact.values().iter()) {
                err = err.max((a - b).abs());
            }
            assert!(err <= 1e-8 * scale, "sqrt(t)={rt}: rel err {}", err / scale);
        }
    }

    #[test]
    fn grad_and_grad_perp_symbols_are_orthogonal() {
        // xi . xi_perp = 0 exactly at every grid wavenumber
        let grid = Grid::new(64, 11.0).unwrap();
        for i in 0..64 {
            for j in 0..64 {
                let k = [grid.wavenumber(i), grid.wavenumber(j)];
                let g = VectorOp::Grad.components();
                let p = VectorOp::GradPerp.components();
                let dot: Complex64 = (0..2)
                    .map(|c| {
                        let (sg, og) = g[c];
                        let (sp, op) = p[c];
                        og.symbol(k) * sg * op.symbol(k) * sp
                    })
                    .sum();
                assert_eq!(dot, Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn riesz_involution_symbol_identity() {
        // R1^2 + R2^2 = -1 on nonzero modes, to roundoff in symbol arithmetic
        let grid = Grid::new(64, 7.0).unwrap();
        for i in 0..64 {
            for j in 0..64 {
                if i == 0 && j == 0 {
                    continue;
                }
                let k = [grid.wavenumber(i), grid.wavenumber(j)];
                let r1 = ScalarOp::Riesz(Axis::X).symbol(k);
                let r2 = ScalarOp::Riesz(Axis::Y).symbol(k);
                let s = r1 * r1 + r2 * r2;
                assert!((s.re + 1.0).abs() <= 1e-12 && s.im.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn skew_pairing_antisymmetric_on_random_fields() {
        let grid = Grid::new(64, 25.0).unwrap();
        for seed in 0..20u64 {
            let f = random_smooth_field(&grid, seed);
            let g = random_smooth_field(&grid, seed + 1000);
            for op in [ScalarOp::Riesz(Axis::X), ScalarOp::Riesz(Axis::Y)] {
                let fg = skew_pairing(&f, &g, &op).unwrap();
                let gf = skew_pairing(&g, &f, &op).unwrap();
                assert!((fg + gf).abs() <= 1e-10, "seed {seed}: {fg} vs {gf}");
            }
        }
    }

    #[test]
    fn pairing_diagonal_vanishes_on_gauss() {
        let grid = Grid::new(128, 40.0).unwrap();
        let g = Field::from_fn(&grid, |x, y| gauss(1.0, [x, y]));
        let p = skew_pairing(&g, &g, &ScalarOp::Riesz(Axis::X)).unwrap();
        assert!(p.abs() <= 1e-10);
    }

    #[test]
    fn lambda_pairing_nonnegative() {
        let grid = Grid::new(64, 15.0).unwrap();
        for seed in [3u64, 17, 40] {
            let f = random_smooth_field(&grid, seed);
            let p = skew_pairing(&f, &f, &ScalarOp::Lambda).unwrap();
            assert!(p >= -1e-12, "seed {seed}: {p}");
        }
    }
}
