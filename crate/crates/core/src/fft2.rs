//! Thin 2D complex FFT layer over rustfft with plan caching.
//!
//! Forward is the plain DFT sum; inverse is normalized by 1/N² so that
//! inverse(forward(x)) == x.

use ndarray::Array2;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::{Arc, Mutex, OnceLock};

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut p = planner().lock().unwrap();
    if inverse {
        p.plan_fft_inverse(n)
    } else {
        p.plan_fft_forward(n)
    }
}

fn pass_rows(a: &mut Array2<Complex64>, fft: &Arc<dyn Fft<f64>>) {
    let n = a.nrows();
    let data = a.as_slice_mut().expect("standard layout");
    for row in data.chunks_exact_mut(n) {
        fft.process(row);
    }
}

fn transpose(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    let mut out = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            out[[j, i]] = a[[i, j]];
        }
    }
    out
}

/// In-place 2D transform over both axes of a square array.
pub fn fft2(a: &mut Array2<Complex64>, inverse: bool) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "fft2 expects a square array");
    let fft = plan(n, inverse);
    pass_rows(a, &fft);
    let mut t = transpose(a);
    pass_rows(&mut t, &fft);
    *a = transpose(&t);
    if inverse {
        let s = 1.0 / (n * n) as f64;
        a.mapv_inplace(|z| z * s);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_identity() {
        let n = 16;
        let mut a = Array2::from_shape_fn((n, n), |(i, j)| {
            Complex64::new((i * 7 + j) as f64 * 0.1, (j * 3) as f64 - 1.0)
        });
        let orig = a.clone();
        fft2(&mut a, false);
        fft2(&mut a, true);
        for (x, y) in a.iter().zip(orig.iter()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn single_mode_transforms_to_plane_wave() {
        let n = 8;
        let mut a = Array2::zeros((n, n));
        a[[1, 0]] = Complex64::new(1.0, 0.0);
        fft2(&mut a, true);
        // inverse of a delta at bin (1,0) is exp(2*pi*i*ix/n)/n^2
        for ix in 0..n {
            for iy in 0..n {
                let phase = 2.0 * std::f64::consts::PI * ix as f64 / n as f64;
                let want = Complex64::new(phase.cos(), phase.sin()) / (n * n) as f64;
                assert!((a[[ix, iy]] - want).norm() < 1e-14);
            }
        }
    }
}
