//! Seeded Poisson deployments on the half-line and the grid, plus Gamma moments.
//!
//! Sensor `i` of a Poisson deployment with rate `λ` sits at the sum of `i`
//! i.i.d. `Exp(λ)` gaps, so its position is `Gamma(i, λ)` distributed.
//! Every deployment is a pure function of `(n, rate, seed)`: the seed keys a
//! ChaCha stream, and the two axes of a grid draw from disjoint streams of
//! the same key.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{contract, invalid, Result};

const LINE_STREAM: u64 = 0;
const GRID_X_STREAM: u64 = 1;
const GRID_Y_STREAM: u64 = 2;

/// Sorted sensor positions on `[0, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deployment1D {
    positions: Vec<f64>,
    rate: f64,
    seed: u64,
}

impl Deployment1D {
    /// Wraps hand-picked positions. They must be non-empty, finite,
    /// non-negative and non-decreasing. The seed is recorded as 0.
    pub fn from_positions(positions: Vec<f64>, rate: f64) -> Result<Self> {
        if positions.is_empty() {
            return Err(invalid("a deployment needs at least one sensor"));
        }
        if !(rate > 0.0) {
            return Err(invalid(format!("rate must be positive, got {rate}")));
        }
        if positions.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(contract("positions must be finite and non-negative"));
        }
        if positions.windows(2).any(|w| w[0] > w[1]) {
            return Err(contract("positions must be sorted ascending"));
        }
        Ok(Self {
            positions,
            rate,
            seed: 0,
        })
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Position of the rightmost sensor.
    pub fn last(&self) -> f64 {
        *self.positions.last().expect("deployments are non-empty")
    }
}

/// `m × m` grid: sensor `(i1, i2)` starts at `(xs[i1], ys[i2])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDeployment2D {
    xs: Deployment1D,
    ys: Deployment1D,
}

impl GridDeployment2D {
    pub fn from_axes(xs: Deployment1D, ys: Deployment1D) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(contract(format!(
                "grid axes differ in length: {} vs {}",
                xs.len(),
                ys.len()
            )));
        }
        Ok(Self { xs, ys })
    }

    pub fn xs(&self) -> &Deployment1D {
        &self.xs
    }

    pub fn ys(&self) -> &Deployment1D {
        &self.ys
    }

    /// Sensors per axis.
    pub fn side(&self) -> usize {
        self.xs.len()
    }

    /// Total sensor count `m²`.
    pub fn n(&self) -> usize {
        self.side() * self.side()
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Cumulative sums of `n` exponential gaps drawn by inverse CDF.
fn arrivals_from<R: Rng>(rng: &mut R, n: usize, rate: f64) -> Vec<f64> {
    let mut at = 0.0;
    (0..n)
        .map(|_| {
            // random() is in [0, 1); flip it so ln never sees 0
            let u = 1.0 - rng.random::<f64>();
            at += -u.ln() / rate;
            at
        })
        .collect()
}

fn check_count_and_rate(n: usize, rate: f64) -> Result<()> {
    if n < 1 {
        return Err(invalid("sensor count must be at least 1"));
    }
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(invalid(format!(
            "rate must be positive and finite, got {rate}"
        )));
    }
    Ok(())
}

/// Samples the first `n` arrivals of a rate-`rate` Poisson process.
pub fn sample_poisson_arrivals(n: usize, rate: f64, seed: u64) -> Result<Deployment1D> {
    check_count_and_rate(n, rate)?;
    let mut rng = stream_rng(seed, LINE_STREAM);
    Ok(Deployment1D {
        positions: arrivals_from(&mut rng, n, rate),
        rate,
        seed,
    })
}

/// Samples an `m × m` grid from two independent Poisson processes.
pub fn sample_grid(m: usize, rate: f64, seed: u64) -> Result<GridDeployment2D> {
    check_count_and_rate(m, rate)?;
    let xs = Deployment1D {
        positions: arrivals_from(&mut stream_rng(seed, GRID_X_STREAM), m, rate),
        rate,
        seed,
    };
    let ys = Deployment1D {
        positions: arrivals_from(&mut stream_rng(seed, GRID_Y_STREAM), m, rate),
        rate,
        seed,
    };
    Ok(GridDeployment2D { xs, ys })
}

/// `E[X_k^a]` for `X_k ~ Gamma(k, rate)`, i.e. `Γ(k+a) / (Γ(k) · rate^a)`.
///
/// Evaluated in log space so `k` in the millions does not overflow.
pub fn gamma_moment(k: u64, a: f64, rate: f64) -> Result<f64> {
    if k < 1 {
        return Err(invalid("moment index k must be at least 1"));
    }
    if !(a > 0.0) {
        return Err(invalid(format!("moment order must be positive, got {a}")));
    }
    if !(rate > 0.0) {
        return Err(invalid(format!("rate must be positive, got {rate}")));
    }
    let k = k as f64;
    Ok((ln_gamma(k + a) - ln_gamma(k) - a * rate.ln()).exp())
}

/// Mixes `(master, n, trial)` into a per-trial seed. Distinct tuples map to
/// distinct seeds with overwhelming probability, and the result depends on
/// nothing else, so trials can run in any order.
pub fn derive_seed(master: u64, n: u64, trial: u64) -> u64 {
    let mut s = splitmix64(master);
    s = splitmix64(s ^ n);
    splitmix64(s ^ trial.rotate_left(32))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
