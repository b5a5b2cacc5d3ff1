//! The loop-hafnian readout state `|φ₁⟩`, its truncated variant, Dicke states
//! and the normalization constants.
//!
//! With `I = {1..2N}`,
//!
//! ```text
//! |φ₁⟩ = (1/L_N) Σ_{k=0}^{N} 1/(2(N-k)-1)!! Σ_{|S|=2k} |S, Sᶜ⟩
//! L_{N,l}² = Σ_{k=0}^{l} C(2N, 2k) / [(2k-1)!!]²,      L_N = L_{N,N}
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;
use crate::statesim::{pair_mask, StateVector, MAX_SPINS};
use crate::subset::{masks_with_popcount, SubsetIndex};

/// `m!!` with `(-1)!! = 0!! = 1`.
pub fn double_factorial(m: i64) -> Result<u128> {
    if m < -1 {
        return Err(Error::InvalidArgument(format!(
            "double factorial of {m} is undefined"
        )));
    }
    let mut acc: u128 = 1;
    let mut x = m;
    while x > 1 {
        acc = acc.checked_mul(x as u128).ok_or(Error::SizeLimit {
            what: "double factorial",
            size: m as usize,
            limit: 57,
        })?;
        x -= 2;
    }
    Ok(acc)
}

/// `(2j - 1)!!` as a float, for `j ≥ 0`.
fn odd_double_factorial(j: usize) -> f64 {
    (1..=j).map(|x| (2 * x - 1) as f64).product()
}

/// `C(n, k)` as a float.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k)
        .fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
        .round()
}

/// `L_{N,l}`; `l = N` gives the untruncated `L_N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizationFactor {
    pub value: f64,
    pub n: usize,
    pub l: usize,
}

/// `L_N`.
pub fn normalization(n: usize) -> NormalizationFactor {
    normalization_truncated(n, n).expect("l = N is always in range")
}

/// `L_{N,l}` for `0 ≤ l ≤ N`.
pub fn normalization_truncated(n: usize, l: usize) -> Result<NormalizationFactor> {
    if l > n {
        return Err(Error::InvalidArgument(format!(
            "truncation level {l} exceeds N = {n}"
        )));
    }
    let sq: f64 = (0..=l)
        .map(|k| binomial(2 * n, 2 * k) / odd_double_factorial(k).powi(2))
        .sum();
    Ok(NormalizationFactor {
        value: sq.sqrt(),
        n,
        l,
    })
}

/// `⌈p/2⌉`, the number of diagonal tiers kept for `p` nonzero diagonal entries.
pub fn truncation_level(p: usize) -> usize {
    p.div_ceil(2)
}

fn check_register(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    if 4 * n > MAX_SPINS {
        return Err(Error::SizeLimit {
            what: "phi1 register (4N spins)",
            size: 4 * n,
            limit: MAX_SPINS,
        });
    }
    Ok(())
}

/// `Σ_{k=k_min}^{N} 1/(2(N-k)-1)!! Σ_{|S|=2k} |S, Sᶜ⟩`, before normalization.
fn phi1_tiers(n: usize, k_min: usize) -> Vec<Complex64> {
    let two_n = 2 * n;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << (2 * two_n)];
    for k in k_min..=n {
        let w = 1.0 / odd_double_factorial(n - k);
        for s in masks_with_popcount(two_n, 2 * k) {
            amps[pair_mask(SubsetIndex::from_mask(s), two_n).mask() as usize] =
                Complex64::new(w, 0.0);
        }
    }
    amps
}

/// The unnormalized sum behind `|φ₁⟩`; its squared norm is `L_N²`.
pub fn phi1_unnormalized(n: usize) -> Result<StateVector> {
    check_register(n)?;
    let mut v = StateVector::zeros(4 * n)?;
    v.amplitudes_mut().copy_from_slice(&phi1_tiers(n, 0));
    Ok(v)
}

/// `|φ₁⟩` on `4N` spins.
pub fn phi1_state(n: usize) -> Result<StateVector> {
    phi1_state_truncated(n, 2 * n)
}

/// `|φ₁⟩` keeping only the tiers `k = N - ⌈p/2⌉ ..= N`, normalized by
/// `L_{N,⌈p/2⌉}`. Suited to matrices with `p` nonzero diagonal entries;
/// `p = 0` gives `|I, ∅⟩`.
pub fn phi1_state_truncated(n: usize, p: usize) -> Result<StateVector> {
    check_register(n)?;
    if p > 2 * n {
        return Err(Error::InvalidArgument(format!(
            "p = {p} exceeds the matrix dimension {}",
            2 * n
        )));
    }
    let l = truncation_level(p);
    let norm = normalization_truncated(n, l)?.value;
    let mut amps = phi1_tiers(n, n - l);
    amps.iter_mut().for_each(|a| *a /= norm);
    StateVector::from_amplitudes(4 * n, amps)
}

/// The Dicke state `C(n, w)^{-1/2} Σ_{|S|=w} |S⟩`.
pub fn dicke_state(n: usize, w: usize) -> Result<StateVector> {
    if w > n {
        return Err(Error::InvalidArgument(format!(
            "Dicke weight {w} exceeds {n} qubits"
        )));
    }
    let mut v = StateVector::zeros(n)?;
    let a = Complex64::new(binomial(n, w).sqrt().recip(), 0.0);
    for m in masks_with_popcount(n, w) {
        v.amplitudes_mut()[m as usize] = a;
    }
    Ok(v.normalized())
}

/// Number of diagonal entries that are not exactly zero.
pub fn count_nonzero_diagonal(a: &SymmetricMatrix) -> usize {
    (0..a.dim()).filter(|&i| a.get(i, i) != 0.0).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SquareMatrix;

    #[test]
    fn double_factorial_values() {
        assert_eq!(double_factorial(-1).unwrap(), 1);
        assert_eq!(double_factorial(0).unwrap(), 1);
        assert_eq!(double_factorial(5).unwrap(), 15);
        assert_eq!(double_factorial(7).unwrap(), 105);
        assert_eq!(double_factorial(8).unwrap(), 384);
        assert!(double_factorial(-3).is_err());
        assert!(double_factorial(301).is_err());
    }

    #[test]
    fn normalization_values() {
        assert_eq!(normalization(0).value, 1.0);
        assert!((normalization(1).value - 2f64.sqrt()).abs() < 1e-15);
        // 1 + C(4,2)/1 + C(4,4)/9
        assert!((normalization(2).value - (7.0f64 + 1.0 / 9.0).sqrt()).abs() < 1e-14);
        assert_eq!(normalization_truncated(3, 0).unwrap().value, 1.0);
        assert!((normalization_truncated(2, 1).unwrap().value - 7f64.sqrt()).abs() < 1e-15);
        assert_eq!(normalization_truncated(4, 4).unwrap(), normalization(4));
        assert!(normalization_truncated(2, 3).is_err());
    }

    #[test]
    fn phi1_for_one_pair() {
        let phi = phi1_state(1).unwrap();
        let h = 0.5f64.sqrt();
        // |∅, I⟩ = mask 0b1100 and |I, ∅⟩ = mask 0b0011.
        assert_eq!(phi.support().collect::<Vec<_>>(), vec![0b0011, 0b1100]);
        assert!((phi.amplitudes()[0b0011].re - h).abs() < 1e-15);
        assert!((phi.amplitudes()[0b1100].re - h).abs() < 1e-15);
    }

    #[test]
    fn phi1_is_normalized_with_weight_2n_support() {
        for n in 1..=3 {
            let phi = phi1_state(n).unwrap();
            assert!((phi.norm_sqr() - 1.0).abs() < 1e-12);
            let two_n = 2 * n;
            for m in phi.support() {
                assert_eq!(m.count_ones() as usize, two_n);
                let low = m & ((1 << two_n) - 1);
                assert_eq!(m >> two_n, !low & ((1 << two_n) - 1));
            }
        }
        assert!(phi1_state(0).is_err());
        assert!(phi1_state(7).is_err());
    }

    #[test]
    fn truncated_phi1_edges() {
        let n = 2;
        let p0 = phi1_state_truncated(n, 0).unwrap();
        assert_eq!(p0.support().collect::<Vec<_>>(), vec![0b1111]);
        assert_eq!(p0.amplitudes()[0b1111].re, 1.0);
        assert_eq!(phi1_state_truncated(n, 4).unwrap(), phi1_state(n).unwrap());
        for p in 0..=4 {
            let v = phi1_state_truncated(n, p).unwrap();
            assert!((v.norm_sqr() - 1.0).abs() < 1e-12, "p={p}");
        }
        assert!(phi1_state_truncated(n, 5).is_err());
    }

    #[test]
    fn dicke_states() {
        let d = dicke_state(3, 0).unwrap();
        assert_eq!(d.support().collect::<Vec<_>>(), vec![0]);
        let d = dicke_state(2, 1).unwrap();
        assert_eq!(d.support().collect::<Vec<_>>(), vec![1, 2]);
        assert!((d.amplitudes()[1].re - 0.5f64.sqrt()).abs() < 1e-15);
        let d = dicke_state(4, 2).unwrap();
        assert_eq!(d.support().count(), 6);
        for m in d.support() {
            assert!((d.amplitudes()[m as usize].re - 6f64.sqrt().recip()).abs() < 1e-15);
        }
        assert!(dicke_state(2, 3).is_err());
    }

    #[test]
    fn nonzero_diagonal_count() {
        let z = SymmetricMatrix::new(SquareMatrix::zeros(4)).unwrap();
        assert_eq!(count_nonzero_diagonal(&z), 0);
        let id = SymmetricMatrix::new(SquareMatrix::identity(4)).unwrap();
        assert_eq!(count_nonzero_diagonal(&id), 4);
        let d = [1.0, 0.0, 2.0, 0.0];
        let m = SymmetricMatrix::from_upper(4, |i, j| if i == j { d[i] } else { 0.0 });
        assert_eq!(count_nonzero_diagonal(&m), 2);
    }
}
