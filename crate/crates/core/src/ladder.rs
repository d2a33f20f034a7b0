//! Heat kernel G(t,x) = (4πt)^{−1}e^{−|x|²/4t} and its Laplacian-power ladder.
//!
//! Repeated application of −Δ to G stays in a one-parameter family:
//! (−Δ)^k G(t,x) = t^{−k} Q_k(u) G(t,x) with u = |x|²/(4t), where the Q_k are
//! polynomials of degree k. Because ∂_t G = ΔG the ladder is equivalently the
//! time ladder (−Δ)^k G = (−∂_t)^k G, which gives the recurrence
//!
//!   Q₀ = 1,   Q_{k+1}(u) = (k + 1 − u)·Q_k(u) + u·Q_k′(u),
//!
//! so Q₁ = 1 − u, Q₂ = u² − 4u + 2. In fact Q_k = k!·L_k with L_k the Laguerre
//! polynomial, which supplies a numerically stable three-term recurrence for
//! large k (the gradient ladder uses the α = 1 family: ∇(−Δ)^k G =
//! −t^{−k} k! L_k^{(1)}(u) · x/(2t) · G).

/// Exponent beyond which e^{−u} underflows f64; evaluators return exact 0 there.
const EXP_UNDERFLOW: f64 = 700.0;

/// Heat kernel value.
pub fn gauss(t: f64, x: [f64; 2]) -> f64 {
    debug_assert!(t > 0.0);
    let u = (x[0] * x[0] + x[1] * x[1]) / (4.0 * t);
    if u >= EXP_UNDERFLOW {
        return 0.0;
    }
    (-u).exp() / (4.0 * std::f64::consts::PI * t)
}

/// ∇G(t,x) = −x/(2t)·G(t,x).
pub fn grad_gauss(t: f64, x: [f64; 2]) -> [f64; 2] {
    let g = gauss(t, x);
    [-x[0] / (2.0 * t) * g, -x[1] / (2.0 * t) * g]
}

/// Laguerre polynomial L_k(u) by the three-term recurrence.
pub fn laguerre(k: usize, u: f64) -> f64 {
    match k {
        0 => 1.0,
        1 => 1.0 - u,
        _ => {
            let (mut prev, mut cur) = (1.0, 1.0 - u);
            for n in 1..k {
                let next = ((2 * n + 1) as f64 - u) * cur - n as f64 * prev;
                prev = cur;
                cur = next / (n + 1) as f64;
            }
            cur
        }
    }
}

/// Generalized Laguerre L_k^{(1)}(u).
pub fn laguerre1(k: usize, u: f64) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0 - u,
        _ => {
            let (mut prev, mut cur) = (1.0, 2.0 - u);
            for n in 1..k {
                let next = ((2 * n + 2) as f64 - u) * cur - (n + 1) as f64 * prev;
                prev = cur;
                cur = next / (n + 1) as f64;
            }
            cur
        }
    }
}

/// (−Δ)^k G(t,x), closed form via the Laguerre ladder.
pub fn lap_pow_gauss(k: usize, t: f64, x: [f64; 2]) -> f64 {
    debug_assert!(t > 0.0);
    let u = (x[0] * x[0] + x[1] * x[1]) / (4.0 * t);
    if u >= EXP_UNDERFLOW {
        return 0.0;
    }
    let mut fact = 1.0;
    for j in 1..=k {
        fact *= j as f64;
    }
    t.powi(-(k as i32)) * fact * laguerre(k, u) * (-u).exp()
        / (4.0 * std::f64::consts::PI * t)
}

/// Coefficient table of the ladder polynomials Q_k, lowest degree first.
#[derive(Debug, Clone)]
pub struct GaussLadder {
    polys: Vec<Vec<f64>>,
}

impl GaussLadder {
    pub const DEFAULT_K_MAX: usize = 24;

    /// Build the table up to order `k_max` by the derivative recurrence.
    pub fn new(k_max: usize) -> GaussLadder {
        let mut polys: Vec<Vec<f64>> = Vec::with_capacity(k_max + 1);
        polys.push(vec![1.0]);
        for k in 0..k_max {
            let q = &polys[k];
            let mut next = vec![0.0; k + 2];
            // (k+1-u) Q_k
            for (d, &c) in q.iter().enumerate() {
                next[d] += (k as f64 + 1.0) * c;
                next[d + 1] -= c;
            }
            // + u Q_k'
            for (d, &c) in q.iter().enumerate().skip(1) {
                next[d] += d as f64 * c;
            }
            polys.push(next);
        }
        GaussLadder { polys }
    }

    pub fn k_max(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, k: usize) -> &[f64] {
        &self.polys[k]
    }

    /// Horner evaluation of Q_k(u).
    pub fn eval(&self, k: usize, u: f64) -> f64 {
        self.polys[k].iter().rev().fold(0.0, |acc, &c| acc * u + c)
    }

    /// Ladder evaluation of (−Δ)^k G from the table.
    pub fn lap_pow(&self, k: usize, t: f64, x: [f64; 2]) -> f64 {
        let u = (x[0] * x[0] + x[1] * x[1]) / (4.0 * t);
        if u >= EXP_UNDERFLOW {
            return 0.0;
        }
        t.powi(-(k as i32)) * self.eval(k, u) * (-u).exp() / (4.0 * std::f64::consts::PI * t)
    }
}
