//! Dense statevector kernels over the full `2^n`-dimensional spin space.
//!
//! Spin `i` (1-based) is bit `i - 1` of the basis index; bit set means spin up.
//! On `4N` spins, `|S, T⟩` keeps `S` in bits `0..2N` and `T` in bits `2N..4N`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matfun::HafnianTable;
use crate::matrix::SymmetricMatrix;
use crate::spinham::{build_full, XXHamiltonian};
use crate::subset::SubsetIndex;

/// Largest supported register.
pub const MAX_SPINS: usize = 26;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Amplitudes over the computational basis.
///
/// Vectors produced by [`apply_h`] are unnormalized accumulators; everything
/// else is a state and keeps unit norm.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_spins: usize,
    amps: Vec<Complex64>,
    accumulator: bool,
}

fn check_width(num_spins: usize) -> Result<()> {
    if num_spins > MAX_SPINS {
        return Err(Error::SizeLimit {
            what: "statevector spins",
            size: num_spins,
            limit: MAX_SPINS,
        });
    }
    Ok(())
}

fn check_match(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

impl StateVector {
    /// The all-zero vector (an accumulator).
    pub fn zeros(num_spins: usize) -> Result<Self> {
        check_width(num_spins)?;
        Ok(StateVector {
            num_spins,
            amps: vec![ZERO; 1 << num_spins],
            accumulator: true,
        })
    }

    /// `|S⟩`.
    pub fn basis(num_spins: usize, s: SubsetIndex) -> Result<Self> {
        check_width(num_spins)?;
        s.check_within(num_spins)?;
        let mut amps = vec![ZERO; 1 << num_spins];
        amps[s.mask() as usize] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            num_spins,
            amps,
            accumulator: false,
        })
    }

    /// Wraps raw amplitudes as a state (`accumulator = false`) without
    /// normalizing them.
    pub fn from_amplitudes(num_spins: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_width(num_spins)?;
        check_match(1 << num_spins, amps.len())?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("amplitude"));
        }
        Ok(StateVector {
            num_spins,
            amps,
            accumulator: false,
        })
    }

    pub(crate) fn from_parts(num_spins: usize, amps: Vec<Complex64>, accumulator: bool) -> Self {
        debug_assert_eq!(amps.len(), 1 << num_spins);
        StateVector {
            num_spins,
            amps,
            accumulator,
        }
    }

    pub fn num_spins(&self) -> usize {
        self.num_spins
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn amplitude(&self, s: SubsetIndex) -> Complex64 {
        self.amps[s.mask() as usize]
    }

    /// Whether this vector is an unnormalized accumulator rather than a state.
    pub fn is_accumulator(&self) -> bool {
        self.accumulator
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Scales to unit norm and marks the vector as a state.
    pub fn normalized(mut self) -> Self {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= norm);
        }
        self.accumulator = false;
        self
    }

    /// Basis masks carrying a nonzero amplitude.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != ZERO)
            .map(|(m, _)| m as u64)
    }

    /// `max_m |self[m] - other[m]|`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.num_spins, other.num_spins);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(overlap(self, other)?.norm_sqr())
    }
}

/// `|S⟩` on `num_spins` spins.
pub fn basis_state(num_spins: usize, s: SubsetIndex) -> Result<StateVector> {
    StateVector::basis(num_spins, s)
}

/// `H|ψ⟩`, returned as an unnormalized accumulator.
pub fn apply_h(h: &XXHamiltonian, psi: &StateVector) -> Result<StateVector> {
    check_match(h.num_spins(), psi.num_spins)?;
    let mut out = vec![ZERO; psi.amps.len()];
    for term in h.terms() {
        let flip = term.flip_mask() as usize;
        for (m, slot) in out.iter_mut().enumerate() {
            *slot += term.coeff * psi.amps[m ^ flip];
        }
    }
    Ok(StateVector::from_parts(psi.num_spins, out, true))
}

/// `Hᵏ|ψ⟩` by `k` successive applications.
pub fn apply_h_power(h: &XXHamiltonian, k: usize, psi: &StateVector) -> Result<StateVector> {
    check_match(h.num_spins(), psi.num_spins)?;
    let mut cur = psi.clone();
    for _ in 0..k {
        cur = apply_h(h, &cur)?;
    }
    Ok(cur)
}

fn real_part(z: Complex64) -> Result<f64> {
    if z.im.abs() > 1e-12 * z.re.abs().max(1.0) {
        return Err(Error::ImaginaryResidue(z.im));
    }
    Ok(z.re)
}

/// `⟨bra|Hᵏ|ket⟩` for basis states. Real because the coefficients are real.
pub fn transition_amplitude(
    h: &XXHamiltonian,
    k: usize,
    bra: SubsetIndex,
    ket: SubsetIndex,
) -> Result<f64> {
    bra.check_within(h.num_spins())?;
    let psi = apply_h_power(h, k, &basis_state(h.num_spins(), ket)?)?;
    real_part(psi.amplitude(bra))
}

/// `⟨S, Sᶜ|H^N|∅, ∅⟩` for the full `4N`-spin model of a `2N × 2N` matrix.
pub fn transition_amplitude_4n(a: &SymmetricMatrix, s: SubsetIndex) -> Result<f64> {
    let two_n = a.dim();
    if s.len() % 2 == 1 {
        return Err(Error::OddSubset(s.len()));
    }
    s.check_within(two_n)?;
    let h = build_full(a)?;
    transition_amplitude(&h, two_n / 2, pair_mask(s, two_n), SubsetIndex::EMPTY)
}

/// `|S, T⟩` as one mask on `2 · two_n` spins, with `T = Sᶜ`.
pub fn pair_mask(s: SubsetIndex, two_n: usize) -> SubsetIndex {
    SubsetIndex::from_mask(s.mask() | (s.complement(two_n).mask() << two_n))
}

/// `exp(-iHt)|ψ⟩`, exact.
///
/// Each term `c X_i X_j` acts on the amplitude pairs `(m, m ⊕ flip)` as
/// `(u, v) ↦ (cos(ct) u - i sin(ct) v, -i sin(ct) u + cos(ct) v)`. The terms
/// commute, so their order does not matter.
pub fn evolve(h: &XXHamiltonian, t: f64, psi: &StateVector) -> Result<StateVector> {
    check_match(h.num_spins(), psi.num_spins)?;
    if !t.is_finite() {
        return Err(Error::NonFinite("evolution time"));
    }
    let mut out = psi.clone();
    for term in h.terms() {
        rotate_pairs(
            &mut out.amps,
            term.i,
            term.flip_mask() as usize,
            term.coeff * t,
        );
    }
    Ok(out)
}

/// Applies `exp(-i φ X_a X_b)` where `flip` has bits `a - 1` and `b - 1` set.
pub(crate) fn rotate_pairs(amps: &mut [Complex64], a: usize, flip: usize, phi: f64) {
    let (s, c) = phi.sin_cos();
    let low = 1usize << (a - 1);
    let mis = Complex64::new(0.0, -s);
    for m in 0..amps.len() {
        if m & low != 0 {
            continue;
        }
        let p = m ^ flip;
        let (u, v) = (amps[m], amps[p]);
        amps[m] = c * u + mis * v;
        amps[p] = mis * u + c * v;
    }
}

/// `⟨bra|ket⟩ = Σ conj(bra) · ket`.
pub fn overlap(bra: &StateVector, ket: &StateVector) -> Result<Complex64> {
    check_match(bra.num_spins, ket.num_spins)?;
    Ok(bra
        .amps
        .iter()
        .zip(&ket.amps)
        .map(|(b, k)| b.conj() * k)
        .sum())
}

/// `k! · haf(A_S)` from a prebuilt table: the value `⟨S|H₁ᵏ|∅⟩` must take
/// when `|S| = 2k`.
pub fn expected_hafnian_amplitude(table: &HafnianTable, s: SubsetIndex) -> f64 {
    let k = s.len() / 2;
    factorial(k) * table.get(s)
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}
