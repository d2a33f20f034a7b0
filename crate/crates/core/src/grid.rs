//! Periodic N×N computational box [−L/2, L/2)² with its wavenumber tables.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Uniform periodic grid. `n` points per axis (power of two), box side `l`.
///
/// Physical nodes are x_i = (i − n/2)·dx with dx = l/n, so x = 0 is always a
/// node and reflection x → −x is the exact index map i → (n − i) mod n.
/// Wavenumbers are k_j = (2π/l)·j for j ∈ {−n/2, …, n/2−1} in FFT order; the
/// table is symmetric apart from the unpaired mode at j = −n/2.
#[derive(Debug, Clone)]
pub struct Grid {
    n: usize,
    l: f64,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.l == other.l
    }
}

impl Grid {
    pub fn new(n: usize, l: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n must be a power of two >= 8, got {n}"
            )));
        }
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidGrid(format!("box side must be positive, got {l}")));
        }
        Ok(Grid { n, l })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Box side length L.
    pub fn side(&self) -> f64 {
        self.l
    }

    /// Cell width dx = L/N (exact: dx·N = L).
    pub fn dx(&self) -> f64 {
        self.l / self.n as f64
    }

    /// Quadrature weight dx² of one cell.
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dx()
    }

    /// Physical coordinate of index i, measured from the box center.
    pub fn coord(&self, i: usize) -> f64 {
        (i as f64 - (self.n / 2) as f64) * self.dx()
    }

    /// Signed integer frequency of FFT bin i: 0,…,n/2−1,−n/2,…,−1.
    pub fn freq(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Wavenumber of FFT bin i: (2π/L)·freq(i).
    pub fn wavenumber(&self, i: usize) -> f64 {
        2.0 * PI / self.l * self.freq(i) as f64
    }

    /// Full wavenumber table in FFT bin order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.wavenumber(i)).collect()
    }

    /// The unpaired Nyquist bin (frequency −n/2).
    pub fn is_nyquist(&self, i: usize) -> bool {
        i == self.n / 2
    }

    /// Two-thirds-rule dealiasing keeps |freq| ≤ n/3.
    pub fn dealias_keep(&self, i: usize) -> bool {
        self.freq(i).unsigned_abs() as usize <= self.n / 3
    }
}
