#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinmatch::{SquareMatrix, SymmetricMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries uniform in [-1, 1].
pub fn random_square(rng: &mut impl Rng, n: usize) -> SquareMatrix {
    SquareMatrix::from_fn(n, |_, _| rng.random_range(-1.0..1.0))
}

/// Symmetric, entries uniform in [-1, 1], diagonal included.
pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> SymmetricMatrix {
    SymmetricMatrix::from_upper(n, |_, _| rng.random_range(-1.0..1.0))
}

/// Symmetric with a zero diagonal.
pub fn random_zero_diagonal(rng: &mut impl Rng, n: usize) -> SymmetricMatrix {
    SymmetricMatrix::from_upper(n, |i, j| {
        if i == j {
            0.0
        } else {
            rng.random_range(-1.0..1.0)
        }
    })
}

/// Symmetric with every diagonal entry nonzero: |A_ii| in [0.5, 1.5], random sign.
pub fn random_full_diagonal(rng: &mut impl Rng, n: usize) -> SymmetricMatrix {
    SymmetricMatrix::from_upper(n, |i, j| {
        if i == j {
            let mag = rng.random_range(0.5..1.5);
            if rng.random_bool(0.5) {
                mag
            } else {
                -mag
            }
        } else {
            rng.random_range(-1.0..1.0)
        }
    })
}

/// Symmetric with exactly `p` nonzero diagonal entries (the first `p`).
pub fn random_with_p_diagonal(rng: &mut impl Rng, n: usize, p: usize) -> SymmetricMatrix {
    SymmetricMatrix::from_upper(n, |i, j| {
        if i == j {
            if i < p {
                rng.random_range(0.5..1.5)
            } else {
                0.0
            }
        } else {
            rng.random_range(-1.0..1.0)
        }
    })
}

/// Relative difference, absolute when `want` is 0.
pub fn rel(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        (got - want).abs()
    } else {
        (got - want).abs() / want.abs()
    }
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// Least-squares slope of log(err) against log(t).
pub fn loglog_slope(ts: &[f64], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Zero diagonal, off-diagonal entries uniform in [0.5, 1.5].
pub fn random_bounded_zero_diagonal(rng: &mut impl Rng, n: usize) -> SymmetricMatrix {
    SymmetricMatrix::from_upper(n, |i, j| {
        if i == j {
            0.0
        } else {
            rng.random_range(0.5..1.5)
        }
    })
}

/// In-place Walsh-Hadamard transform, unnormalized.
fn walsh(v: &mut [num_complex::Complex64]) {
    let mut h = 1;
    while h < v.len() {
        for block in (0..v.len()).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (v[i], v[i + h]);
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// `exp(-iHt)ψ` for `H = Σ c X_i X_j`, computed in the basis where every
/// term is diagonal.
pub fn evolve_walsh(
    terms: &[spinmatch::XXTerm],
    t: f64,
    psi: &[num_complex::Complex64],
) -> Vec<num_complex::Complex64> {
    let mut v = psi.to_vec();
    walsh(&mut v);
    for (x, z) in v.iter_mut().enumerate() {
        let energy: f64 = terms
            .iter()
            .map(|term| {
                let parity = (x >> (term.i - 1) ^ x >> (term.j - 1)) & 1;
                if parity == 0 {
                    term.coeff
                } else {
                    -term.coeff
                }
            })
            .sum();
        *z *= num_complex::Complex64::from_polar(1.0, -energy * t);
    }
    walsh(&mut v);
    let scale = 1.0 / psi.len() as f64;
    v.iter().map(|z| z * scale).collect()
}
