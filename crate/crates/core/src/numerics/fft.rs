use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `X_k = N^{-1/2} Σ_j x_j e^{-2πi jk/N}`
    Forward,
    /// `x_j = N^{-1/2} Σ_k X_k e^{+2πi jk/N}`
    Inverse,
}

/// Unitary DFT of a power-of-two length sequence.
pub fn fft_1d(samples: &[C64], direction: Direction) -> Result<Vec<C64>> {
    let n = samples.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::Parameter(format!("fft length {n} is not a power of two")));
    }
    let mut planner = FftPlanner::<f64>::new();
    let plan = match direction {
        Direction::Forward => planner.plan_fft_forward(n),
        Direction::Inverse => planner.plan_fft_inverse(n),
    };
    let mut buf = samples.to_vec();
    plan.process(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    buf.iter_mut().for_each(|z| *z *= scale);
    Ok(buf)
}
