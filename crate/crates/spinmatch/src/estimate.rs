//! Loop-hafnian estimation from short-time overlaps, shot-noise sampling of the
//! overlap, and the fixed-weight submatrix distribution.
//!
//! The overlap `⟨φ₁|exp(-iHt)|0^{4N}⟩` equals `(-it)^N / L_N · lhaf(A)` up to
//! a relative `O(t²)` correction, so `L_N · overlap / (-it)^N` estimates
//! `lhaf(A)`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matfun::loop_hafnian;
use crate::matrix::SymmetricMatrix;
use crate::spinham::{build_full, build_h1, one_norm, XXHamiltonian};
use crate::statesim::{basis_state, evolve, overlap, MAX_SPINS};
use crate::subset::{masks_with_popcount, SubsetIndex};
use crate::targetstates::{normalization, phi1_state};

/// Floor on the denominator of [`EstimateReport::rel_error`].
pub const REL_ERROR_FLOOR: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Overlap {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Overlap {
    fn from(z: Complex64) -> Self {
        Overlap { re: z.re, im: z.im }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub t: f64,
    pub raw_overlap: Overlap,
    /// Real part of `L_N · overlap / (-it)^N`.
    pub estimate: f64,
    /// Imaginary part of the same quantity; zero up to rounding.
    pub imag_residue: f64,
    /// `lhaf(A)` computed directly.
    pub oracle: f64,
    pub rel_error: f64,
}

/// Default evolution time `0.1 / max(‖H‖₁, 1)`.
pub fn default_time(h: &XXHamiltonian) -> f64 {
    0.1 / one_norm(h).max(1.0)
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::NonFinite("evolution time"));
    }
    if t == 0.0 {
        return Err(Error::InvalidArgument(
            "evolution time must be nonzero".into(),
        ));
    }
    Ok(())
}

fn check_model(a: &SymmetricMatrix) -> Result<usize> {
    if a.dim() % 2 == 1 {
        return Err(Error::OddDimension(a.dim()));
    }
    if a.dim() == 0 {
        return Err(Error::InvalidArgument("matrix is empty".into()));
    }
    if 2 * a.dim() > MAX_SPINS {
        return Err(Error::SizeLimit {
            what: "full model (4N spins)",
            size: 2 * a.dim(),
            limit: MAX_SPINS,
        });
    }
    Ok(a.dim() / 2)
}

/// The exact overlap `⟨φ₁|exp(-iHt)|0^{4N}⟩` for the full model of `a`.
pub fn phi1_overlap(a: &SymmetricMatrix, t: f64) -> Result<Complex64> {
    let n = check_model(a)?;
    let h = build_full(a)?;
    let evolved = evolve(&h, t, &basis_state(h.num_spins(), SubsetIndex::EMPTY)?)?;
    overlap(&phi1_state(n)?, &evolved)
}

/// `L_N · overlap / (-it)^N`.
pub fn lhaf_from_overlap_value(n: usize, t: f64, z: Complex64) -> Complex64 {
    let scale = Complex64::new(0.0, -t).powu(n as u32);
    z * normalization(n).value / scale
}

/// Estimates `lhaf(a)` from the exact overlap at time `t`.
pub fn lhaf_from_overlap(a: &SymmetricMatrix, t: f64) -> Result<EstimateReport> {
    check_time(t)?;
    let n = check_model(a)?;
    let z = phi1_overlap(a, t)?;
    let est = lhaf_from_overlap_value(n, t, z);
    let oracle = loop_hafnian(a)?;
    Ok(EstimateReport {
        t,
        raw_overlap: z.into(),
        estimate: est.re,
        imag_residue: est.im,
        oracle,
        rel_error: (est.re - oracle).abs() / oracle.abs().max(REL_ERROR_FLOOR),
    })
}

/// Outcome of a simulated Hadamard test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HadamardSample {
    pub shots: u64,
    pub re: f64,
    pub im: f64,
    pub re_stderr: f64,
    pub im_stderr: f64,
}

impl HadamardSample {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// Larger of the two standard errors.
    pub fn stderr(&self) -> f64 {
        self.re_stderr.max(self.im_stderr)
    }
}

fn bernoulli_estimate(rng: &mut ChaCha8Rng, shots: u64, mean: f64) -> (f64, f64) {
    let p0 = ((1.0 + mean) / 2.0).clamp(0.0, 1.0);
    let zeros = Binomial::new(shots, p0)
        .expect("probability is clamped to [0, 1]")
        .sample(rng);
    let freq = zeros as f64 / shots as f64;
    let stderr = 2.0 * (freq * (1.0 - freq) / shots as f64).sqrt();
    (2.0 * freq - 1.0, stderr)
}

/// Samples the two Hadamard-test circuits for `z`: outcome 0 occurs with
/// probability `(1 + Re z)/2`, and `(1 + Im z)/2` for the phase-shifted variant.
pub fn hadamard_test_from_overlap(z: Complex64, shots: u64, seed: u64) -> Result<HadamardSample> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (re, re_stderr) = bernoulli_estimate(&mut rng, shots, z.re);
    let (im, im_stderr) = bernoulli_estimate(&mut rng, shots, z.im);
    Ok(HadamardSample {
        shots,
        re,
        im,
        re_stderr,
        im_stderr,
    })
}

/// Hadamard-test estimate of `⟨φ₁|exp(-iHt)|0^{4N}⟩`. Deterministic for a
/// fixed seed.
pub fn hadamard_test_sample(
    a: &SymmetricMatrix,
    t: f64,
    shots: u64,
    seed: u64,
) -> Result<HadamardSample> {
    check_time(t)?;
    hadamard_test_from_overlap(phi1_overlap(a, t)?, shots, seed)
}

/// Probabilities over the weight-`2k` sector after evolving `|∅⟩` under `H₁`,
/// renormalized within the sector.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorDistribution {
    pub k: usize,
    pub t: f64,
    pub probs: BTreeMap<SubsetIndex, f64>,
}

#[derive(Serialize)]
struct DistributionDump {
    k: usize,
    t: f64,
    probs: BTreeMap<u64, f64>,
}

impl SectorDistribution {
    pub fn prob(&self, s: SubsetIndex) -> f64 {
        self.probs.get(&s).copied().unwrap_or(0.0)
    }

    /// `{"k": …, "t": …, "probs": {"<mask>": p}}` with decimal masks.
    pub fn to_json(&self) -> String {
        let dump = DistributionDump {
            k: self.k,
            t: self.t,
            probs: self.probs.iter().map(|(s, p)| (s.mask(), *p)).collect(),
        };
        serde_json::to_string(&dump).expect("distribution serialization is infallible")
    }
}

/// Fixed-weight submatrix distribution for a zero-diagonal `a`.
///
/// To leading order in `t`, `P(S) ∝ |haf(A_S)|²` within the sector.
pub fn submatrix_distribution(a: &SymmetricMatrix, t: f64, k: usize) -> Result<SectorDistribution> {
    if let Some(i) = (0..a.dim()).find(|&i| a.get(i, i) != 0.0) {
        return Err(Error::NonzeroDiagonal(i + 1));
    }
    if a.dim() % 2 == 1 {
        return Err(Error::OddDimension(a.dim()));
    }
    let n = a.dim() / 2;
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "sector k = {k} outside 1..={n}"
        )));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("evolution time"));
    }
    let h = build_h1(a)?;
    let psi = evolve(&h, t, &basis_state(h.num_spins(), SubsetIndex::EMPTY)?)?;
    let weights: Vec<(SubsetIndex, f64)> = masks_with_popcount(a.dim(), 2 * k)
        .map(|m| {
            let s = SubsetIndex::from_mask(m);
            (s, psi.amplitude(s).norm_sqr())
        })
        .collect();
    let mass: f64 = weights.iter().map(|(_, w)| w).sum();
    if mass <= 0.0 || !mass.is_finite() {
        return Err(Error::DegenerateSector { weight: 2 * k, t });
    }
    Ok(SectorDistribution {
        k,
        t,
        probs: weights.into_iter().map(|(s, w)| (s, w / mass)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SquareMatrix;

    #[test]
    fn two_spin_estimate_tends_to_coupling() {
        let a = SymmetricMatrix::from_rows(&[[0.0, 1.7], [1.7, 0.0]]).unwrap();
        let t = 1e-4;
        let r = lhaf_from_overlap(&a, t).unwrap();
        // Estimate is sin(at)/t exactly.
        assert!((r.estimate - (1.7 * t).sin() / t).abs() < 1e-12);
        assert_eq!(r.oracle, 1.7);
        assert!(r.rel_error < 1e-8);
        assert!(r.imag_residue.abs() < 1e-12);
    }

    #[test]
    fn rejects_zero_time() {
        let a = SymmetricMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!(lhaf_from_overlap(&a, 0.0).is_err());
        let big = SymmetricMatrix::new(SquareMatrix::identity(14)).unwrap();
        assert!(matches!(
            lhaf_from_overlap(&big, 0.1),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn hadamard_is_seed_deterministic() {
        let z = Complex64::new(0.3, -0.2);
        let a = hadamard_test_from_overlap(z, 10_000, 7).unwrap();
        let b = hadamard_test_from_overlap(z, 10_000, 7).unwrap();
        assert_eq!(a, b);
        assert!(hadamard_test_from_overlap(z, 0, 7).is_err());
    }

    #[test]
    fn hadamard_converges_with_shots() {
        let z = Complex64::new(0.3, -0.2);
        let s = hadamard_test_from_overlap(z, 100_000_000, 1).unwrap();
        assert!((s.value() - z).norm() < 1e-3);
    }

    #[test]
    fn distribution_guards() {
        let diag = SymmetricMatrix::from_rows(&[[1.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!(matches!(
            submatrix_distribution(&diag, 0.1, 1),
            Err(Error::NonzeroDiagonal(1))
        ));
        let zero = SymmetricMatrix::new(SquareMatrix::zeros(4)).unwrap();
        assert!(matches!(
            submatrix_distribution(&zero, 0.1, 1),
            Err(Error::DegenerateSector { weight: 2, .. })
        ));
        let a = SymmetricMatrix::from_upper(4, |i, j| if i == j { 0.0 } else { 1.0 });
        assert!(submatrix_distribution(&a, 0.1, 0).is_err());
        assert!(submatrix_distribution(&a, 0.1, 3).is_err());
    }

    #[test]
    fn distribution_sums_to_one_and_dumps() {
        let a =
            SymmetricMatrix::from_upper(4, |i, j| if i == j { 0.0 } else { 1.0 + (i + j) as f64 });
        let d = submatrix_distribution(&a, 0.05, 1).unwrap();
        assert_eq!(d.probs.len(), 6);
        assert!((d.probs.values().sum::<f64>() - 1.0).abs() < 1e-14);
        let json = d.to_json();
        assert!(json.starts_with(r#"{"k":1,"t":0.05,"probs":{"#));
        assert!(json.contains(r#""3":"#));
    }
}
