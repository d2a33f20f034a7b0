//! Real scalar fields on a [`Grid`] and their spectral companions.
//!
//! A [`Field`] is an immutable value: every operation returns a new one, so
//! fields are safe to share across threads and evaluate concurrently.

use crate::error::{Error, Result};
use crate::fft2::fft2;
use crate::grid::Grid;
use ndarray::Array2;
use rustfft::num_complex::Complex64;

/// Real samples of a scalar function on the grid's physical nodes.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Grid,
    values: Array2<f64>,
}

/// DFT coefficients of a field, in FFT bin order on both axes.
#[derive(Debug, Clone)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Array2<Complex64>,
}

impl Field {
    pub fn zeros(grid: &Grid) -> Field {
        Field {
            grid: grid.clone(),
            values: Array2::zeros((grid.n(), grid.n())),
        }
    }

    /// Build from raw samples; rejects shape mismatch and non-finite entries.
    pub fn from_values(grid: &Grid, values: Array2<f64>) -> Result<Field> {
        if values.nrows() != grid.n() || values.ncols() != grid.n() {
            return Err(Error::InvalidArgument(format!(
                "field shape {:?} does not match grid {}",
                values.dim(),
                grid.n()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument("field contains non-finite samples".into()));
        }
        Ok(Field {
            grid: grid.clone(),
            values,
        })
    }

    /// Sample a function of the physical coordinates (x₁, x₂).
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Field {
        let n = grid.n();
        let values = Array2::from_shape_fn((n, n), |(i, j)| f(grid.coord(i), grid.coord(j)));
        Field {
            grid: grid.clone(),
            values,
        }
    }

    /// Discrete delta of unit quadrature mass at the center node.
    pub fn delta(grid: &Grid) -> Field {
        let mut values = Array2::zeros((grid.n(), grid.n()));
        let c = grid.n() / 2;
        values[[c, c]] = 1.0 / grid.cell_area();
        Field {
            grid: grid.clone(),
            values,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn linf(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Forward transform.
    pub fn spectrum(&self) -> Spectrum {
        let mut coeffs = self.values.mapv(|v| Complex64::new(v, 0.0));
        fft2(&mut coeffs, false);
        Spectrum {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Result<Field> {
        same_grid(&self.grid, &other.grid)?;
        let mut values = self.values.clone();
        values.zip_mut_with(&other.values, |a, &b| *a = f(*a, b));
        Ok(Field {
            grid: self.grid.clone(),
            values,
        })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.values.mapv(f),
        }
    }
}

impl Spectrum {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &Array2<Complex64> {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.coeffs
    }

    pub fn from_coeffs(grid: &Grid, coeffs: Array2<Complex64>) -> Spectrum {
        assert_eq!(coeffs.nrows(), grid.n());
        assert_eq!(coeffs.ncols(), grid.n());
        Spectrum {
            grid: grid.clone(),
            coeffs,
        }
    }

    /// Inverse transform back to physical samples.
    ///
    /// The imaginary residue must be conjugate-symmetry roundoff only; a residue
    /// above 1e−10 of the sup norm means some applied symbol was not
    /// conjugate-symmetric and is a bug, so this asserts rather than returns.
    pub fn field(&self) -> Field {
        let mut c = self.coeffs.clone();
        fft2(&mut c, true);
        let mut re_max = 0.0f64;
        let mut im_max = 0.0f64;
        for z in c.iter() {
            re_max = re_max.max(z.re.abs());
            im_max = im_max.max(z.im.abs());
        }
        assert!(
            im_max <= 1e-10 * re_max.max(1e-30),
            "imaginary residue {im_max:.3e} vs sup {re_max:.3e}: non-conjugate-symmetric symbol"
        );
        Field {
            grid: self.grid.clone(),
            values: c.mapv(|z| z.re),
        }
    }

    /// Two-thirds-rule dealiasing: zero every bin with |freq| > n/3 on either axis.
    pub fn dealias(&mut self) {
        let g = self.grid.clone();
        for ((i, j), z) in self.coeffs.indexed_iter_mut() {
            if !g.dealias_keep(i) || !g.dealias_keep(j) {
                *z = Complex64::new(0.0, 0.0);
            }
        }
    }
}

pub(crate) fn same_grid(a: &Grid, b: &Grid) -> Result<()> {
    if a != b {
        return Err(Error::GridMismatch(a.n(), a.side(), b.n(), b.side()));
    }
    Ok(())
}

/// Sample a field whose *continuous* Fourier transform is `fhat`.
///
/// With the plain convention û(ξ) = ∫u(x)e^{−iξ·x}dx, the box-periodized field
/// is u(x_m) = L^{−2} Σ_k û(k) e^{ik·x_m}; because x starts at −L/2 this is an
/// inverse DFT of (−1)^{i+j} û(k_ij)/dx².
pub fn field_from_spectrum_fn(
    grid: &Grid,
    fhat: impl Fn(f64, f64) -> Complex64,
) -> Field {
    let n = grid.n();
    let mut coeffs = Array2::zeros((n, n));
    for i in 0..n {
        let ki = grid.wavenumber(i);
        for j in 0..n {
            coeffs[[i, j]] = fhat(ki, grid.wavenumber(j));
        }
    }
    field_from_continuous_coeffs(grid, coeffs)
}

/// Same as [`field_from_spectrum_fn`] but from precomputed û(k_ij) values.
pub fn field_from_continuous_coeffs(grid: &Grid, mut coeffs: Array2<Complex64>) -> Field {
    let inv_cell = 1.0 / grid.cell_area();
    for ((i, j), z) in coeffs.indexed_iter_mut() {
        let sign = if (grid.freq(i) + grid.freq(j)) % 2 == 0 { 1.0 } else { -1.0 };
        *z *= sign * inv_cell;
    }
    Spectrum::from_coeffs(grid, coeffs).field()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::gauss;

    #[test]
    fn roundtrip_reproduces_samples() {
        let grid = Grid::new(64, 20.0).unwrap();
        let f = Field::from_fn(&grid, |x, y| (0.3 * x).sin() * (-0.1 * y * y).exp());
        let back = f.spectrum().field();
        let scale = f.linf();
        for (a, b) in f.values().iter().zip(back.values().iter()) {
            assert!((a - b).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn rejects_non_finite() {
        let grid = Grid::new(8, 1.0).unwrap();
        let mut v = Array2::zeros((8, 8));
        v[[0, 0]] = f64::NAN;
        assert!(Field::from_values(&grid, v).is_err());
    }

    #[test]
    fn dealias_zeroes_exactly_the_high_block() {
        let grid = Grid::new(8, 1.0).unwrap();
        // all-ones spectrum; after dealias only |freq| <= 2 survives on each axis
        let coeffs = Array2::from_elem((8, 8), Complex64::new(1.0, 0.0));
        let mut s = Spectrum::from_coeffs(&grid, coeffs);
        s.dealias();
        let mut survivors = 0;
        for ((i, j), z) in s.coeffs().indexed_iter() {
            let keep = grid.freq(i).abs() <= 2 && grid.freq(j).abs() <= 2;
            assert_eq!(z.norm() > 0.0, keep, "bin ({i},{j})");
            if keep {
                survivors += 1;
            }
        }
        assert_eq!(survivors, 25); // (2*2+1)^2
    }

    #[test]
    fn field_from_continuous_spectrum_samples_heat_kernel() {
        // u with uhat = e^{-t|xi|^2} is G(t, .)
        let grid = Grid::new(128, 40.0).unwrap();
        let t = 2.0;
        let f = field_from_spectrum_fn(&grid, |kx, ky| {
            Complex64::new((-t * (kx * kx + ky * ky)).exp(), 0.0)
        });
        let exact = Field::from_fn(&grid, |x, y| gauss(t, [x, y]));
        let scale = exact.linf();
        for (a, b) in f.values().iter().zip(exact.values().iter()) {
            assert!((a - b).abs() <= 1e-10 * scale);
        }
    }
}
