use crate::{Error, Result};

// B_2, B_4, ..., B_20
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Riemann zeta function for real `s > 1`, by Euler–Maclaurin summation
/// with a head of 20 terms and ten Bernoulli corrections.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::Domain(format!("riemann_zeta needs s > 1, got {s}")));
    }
    const N: usize = 20;
    let n = N as f64;
    let mut acc = super::Kahan::new();
    for k in 1..N {
        acc.add((k as f64).powf(-s));
    }
    acc.add(n.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * n.powf(-s));
    // term_k = B_2k / (2k)! * s(s+1)...(s+2k-2) * N^(-s-2k+1)
    let mut rising = s;
    let mut fact = 2.0;
    let mut npow = n.powf(-s - 1.0);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        acc.add(b / fact * rising * npow);
        let m = 2.0 * (k as f64 + 1.0);
        rising *= (s + m - 1.0) * (s + m);
        fact *= (m + 1.0) * (m + 2.0);
        npow /= n * n;
    }
    Ok(acc.value())
}
