//! Rectangle-rule quadrature: L^q norms, moments, and inner products.
//!
//! On a periodic grid the rectangle rule is spectrally accurate for smooth
//! integrands, so no higher-order rule is used anywhere.

use crate::error::{Error, Result};
use crate::field::{same_grid, Field};

/// Moments of a field, x measured from the box center.
///
/// `m1` is stored in the sign convention M₁ = −∫x·u dx, so it can be plugged
/// directly into the moment term M₁·∇G of the large-time expansions.
#[derive(Debug, Clone, Copy)]
pub struct MomentSet {
    /// M₀ = ∫u dx.
    pub m0: f64,
    /// M₁ = −∫x u dx (note the sign).
    pub m1: [f64; 2],
    /// Second absolute moment ∫|x|²|u| dx.
    pub m2: f64,
    /// Fraction of ∫|u| living in the outer 10% frame of the box.
    pub tail_mass: f64,
}

impl MomentSet {
    /// Moments are boundary-contaminated once the tail carries real mass.
    pub fn boundary_contaminated(&self) -> bool {
        self.tail_mass > 1e-6
    }
}

/// (∫|f|^q dx)^{1/q}; q = ∞ gives the sup norm. Requires q ∈ [1, ∞].
pub fn lq_norm(f: &Field, q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidArgument(format!("q must be in [1, inf], got {q}")));
    }
    if q.is_infinite() {
        return Ok(f.linf());
    }
    let mut acc = 0.0;
    if q == 1.0 {
        for v in f.values().iter() {
            acc += v.abs();
        }
    } else if q == 2.0 {
        for v in f.values().iter() {
            acc += v * v;
        }
    } else {
        for v in f.values().iter() {
            acc += v.abs().powf(q);
        }
    }
    let val = (acc * f.grid().cell_area()).powf(1.0 / q);
    debug_assert!(val.is_finite());
    Ok(val)
}

/// ∫ f g dx.
pub fn inner(f: &Field, g: &Field) -> Result<f64> {
    same_grid(f.grid(), g.grid())?;
    let mut acc = 0.0;
    for (a, b) in f.values().iter().zip(g.values().iter()) {
        acc += a * b;
    }
    Ok(acc * f.grid().cell_area())
}

/// ∫ f dx.
pub fn integral(f: &Field) -> f64 {
    f.values().iter().sum::<f64>() * f.grid().cell_area()
}

pub fn moments(f: &Field) -> MomentSet {
    let grid = f.grid();
    let n = grid.n();
    let edge = 0.45 * grid.side();
    let (mut m0, mut m1x, mut m1y, mut m2, mut abs_total, mut abs_tail) =
        (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for ((i, j), &v) in f.values().indexed_iter() {
        let x = grid.coord(i);
        let y = grid.coord(j);
        m0 += v;
        m1x += x * v;
        m1y += y * v;
        let a = v.abs();
        m2 += (x * x + y * y) * a;
        abs_total += a;
        if x.abs() >= edge || y.abs() >= edge {
            abs_tail += a;
        }
    }
    let _ = n;
    let da = grid.cell_area();
    MomentSet {
        m0: m0 * da,
        m1: [-m1x * da, -m1y * da],
        m2: m2 * da,
        tail_mass: if abs_total > 0.0 { abs_tail / abs_total } else { 0.0 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::ladder::{gauss, grad_gauss};
    use std::f64::consts::PI;

    fn gauss_field(grid: &Grid, t: f64, c: [f64; 2]) -> Field {
        Field::from_fn(grid, |x, y| gauss(t, [x - c[0], y - c[1]]))
    }

    #[test]
    fn heat_kernel_norms() {
        let grid = Grid::new(256, 40.0).unwrap();
        let g = gauss_field(&grid, 1.0, [0.0, 0.0]);
        assert!((lq_norm(&g, 1.0).unwrap() - 1.0).abs() < 1e-6);
        assert!((lq_norm(&g, f64::INFINITY).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-8);
        // squared kernel integrates to 1/(8 pi)
        let g2 = g.map(|v| v * v);
        assert!((lq_norm(&g2, 1.0).unwrap() - 1.0 / (8.0 * PI)).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_exponent() {
        let grid = Grid::new(8, 1.0).unwrap();
        let f = Field::zeros(&grid);
        assert!(lq_norm(&f, 0.5).is_err());
        assert!(lq_norm(&f, f64::NAN).is_err());
    }

    #[test]
    fn centered_kernel_moments() {
        let grid = Grid::new(256, 40.0).unwrap();
        let g = gauss_field(&grid, 1.0, [0.0, 0.0]);
        let m = moments(&g);
        assert!((m.m0 - 1.0).abs() < 1e-6);
        assert!(m.m1[0].abs() < 1e-8 && m.m1[1].abs() < 1e-8);
        assert!(!m.boundary_contaminated());
    }

    #[test]
    fn shifted_kernel_first_moment_sign() {
        let grid = Grid::new(256, 40.0).unwrap();
        let g = gauss_field(&grid, 1.0, [1.0, 0.0]);
        let m = moments(&g);
        assert!((m.m1[0] + 1.0).abs() < 1e-6, "m1 = {:?}", m.m1);
        assert!(m.m1[1].abs() < 1e-6);
    }

    #[test]
    fn derivative_field_moments() {
        // f = d/dx1 G(1,.): M0 = 0 and, in the stored sign convention, M1 = (+1, 0)
        let grid = Grid::new(256, 40.0).unwrap();
        let f = Field::from_fn(&grid, |x, y| grad_gauss(1.0, [x, y])[0]);
        let m = moments(&f);
        assert!(m.m0.abs() < 1e-8);
        assert!((m.m1[0] - 1.0).abs() < 1e-6, "m1 = {:?}", m.m1);
        assert!(m.m1[1].abs() < 1e-8);
    }

    #[test]
    fn parseval_l2() {
        let grid = Grid::new(64, 12.0).unwrap();
        let f = crate::testing::random_smooth_field(&grid, 7);
        let quad = lq_norm(&f, 2.0).unwrap();
        let s = f.spectrum();
        let mut acc = 0.0;
        for z in s.coeffs().iter() {
            acc += z.norm_sqr();
        }
        let nn = (grid.n() * grid.n()) as f64;
        let spectral = (acc / nn * grid.cell_area()).sqrt();
        assert!((quad - spectral).abs() <= 1e-10 * quad.max(1e-30));
    }

    #[test]
    fn tail_mass_flags_offcenter_kernel() {
        let grid = Grid::new(128, 20.0).unwrap();
        let near_edge = gauss_field(&grid, 1.0, [8.0, 0.0]);
        assert!(moments(&near_edge).boundary_contaminated());
        let centered = gauss_field(&grid, 1.0, [0.0, 0.0]);
        assert!(!moments(&centered).boundary_contaminated());
    }
}
