//! Deterministic helpers shared by unit and integration tests.

use crate::field::Field;
use crate::grid::Grid;

/// xorshift64* — tiny deterministic generator, uniform in [-1, 1).
pub struct SplitRng(u64);

impl SplitRng {
    pub fn new(seed: u64) -> SplitRng {
        SplitRng(seed.wrapping_mul(2685821657736338717).max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(2685821657736338717)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 52) as f64 * 2.0 - 1.0
    }
}

/// Random band-limited real field: a handful of low modes with random
/// amplitudes under a Gaussian envelope, unit sup norm. Smooth and
/// well-resolved on any grid with n >= 16.
pub fn random_smooth_field(grid: &Grid, seed: u64) -> Field {
    let mut rng = SplitRng::new(seed.wrapping_add(0x9e3779b97f4a7c15));
    let k0 = 2.0 * std::f64::consts::PI / grid.side();
    let mut modes = Vec::new();
    for fx in 0..4i32 {
        for fy in -3..4i32 {
            modes.push((
                fx as f64 * k0,
                fy as f64 * k0,
                rng.uniform(),
                rng.uniform() * std::f64::consts::PI,
            ));
        }
    }
    let w = grid.side() / 6.0;
    let f = Field::from_fn(grid, |x, y| {
        let env = (-(x * x + y * y) / (2.0 * w * w)).exp();
        let mut v = 0.0;
        for &(kx, ky, a, ph) in &modes {
            v += a * (kx * x + ky * y + ph).cos();
        }
        v * env
    });
    let m = f.linf().max(1e-300);
    f.map(|v| v / m)
}
