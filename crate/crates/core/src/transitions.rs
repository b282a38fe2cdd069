//! Multipole oscillator strengths between radial eigenstates.
//!
//! `f^(k) = 2(2ℓ'+1)/(2k+1) · ΔE · |⟨r^k⟩|² · (ℓ' k ℓ; 0 0 0)²`, with the
//! magnetic sums already carried out, so no `m` appears anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::potentials::{ConfinementGeometry, PotentialModel};
use crate::solver::{RadialSolution, Spectrum};

pub fn ell_letter(ell: u32) -> char {
    const LETTERS: &[u8] = b"spdfghiklmnoqrtuvwxyz";
    LETTERS.get(ell as usize).map(|&c| c as char).unwrap_or('?')
}

/// Final orbital quantum numbers reachable from `ell` by a `2^k`-pole transition.
pub fn selection_final_ells(k: u32, ell: u32) -> Vec<u32> {
    (ell.abs_diff(k)..=ell + k).filter(|lp| (ell + lp + k).is_multiple_of(2)).collect()
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Exact `(ℓ' k ℓ; 0 0 0)²`.
pub fn wigner3j_zero_sq(ell_p: u32, k: u32, ell: u32) -> BigRational {
    let j = ell_p + k + ell;
    let triangle = ell_p <= k + ell && k <= ell_p + ell && ell <= ell_p + k;
    if j % 2 == 1 || !triangle {
        return BigRational::from_integer(0.into());
    }
    let g = j / 2;
    let delta = BigRational::new(
        factorial(j - 2 * ell_p) * factorial(j - 2 * k) * factorial(j - 2 * ell),
        factorial(j + 1),
    );
    let ratio = BigRational::new(factorial(g), factorial(g - ell_p) * factorial(g - k) * factorial(g - ell));
    delta * &ratio * &ratio
}

pub fn wigner3j_zero_sq_f64(ell_p: u32, k: u32, ell: u32) -> f64 {
    wigner3j_zero_sq(ell_p, k, ell).to_f64().unwrap_or(f64::NAN)
}

/// `∫ u_a r^k u_b dr` on the common grid.
pub fn radial_matrix_element(a: &RadialSolution, b: &RadialSolution, k: i32) -> Result<f64> {
    if !a.shares_grid(b) {
        return Err(Error::GridMismatch);
    }
    Ok(a.u_values
        .iter()
        .zip(&b.u_values)
        .zip(a.radii().iter().zip(a.weights()))
        .map(|((ua, ub), (r, w))| w * ua * ub * r.powi(k))
        .sum())
}

/// Identifies one end of a transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateLabel {
    pub state_index: usize,
    pub ell: u32,
    pub energy: f64,
}

impl StateLabel {
    pub fn of(s: &RadialSolution) -> Self {
        Self { state_index: s.state_index, ell: s.ell, energy: s.energy }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionRecord {
    pub k: u32,
    pub initial: StateLabel,
    pub final_state: StateLabel,
    pub geometry: ConfinementGeometry,
    pub model: PotentialModel,
    /// `E_final − E_initial` (hartree).
    pub delta_e: f64,
    pub radial_element: f64,
    pub f_value: f64,
    /// The selection rule excludes the `(ℓ, k, ℓ')` triple.
    pub forbidden: bool,
}

pub fn oscillator_strength(k: u32, initial: &RadialSolution, final_state: &RadialSolution) -> Result<TransitionRecord> {
    if !(1..=4).contains(&k) {
        return Err(Error::Invalid(format!("multipole order must be 1..=4, got {k}")));
    }
    let radial_element = radial_matrix_element(initial, final_state, k as i32)?;
    let delta_e = final_state.energy - initial.energy;
    let (ell, ell_p) = (initial.ell, final_state.ell);
    let forbidden = !selection_final_ells(k, ell).contains(&ell_p);
    let f_value = if forbidden {
        0.0
    } else {
        let angular = wigner3j_zero_sq_f64(ell_p, k, ell);
        2.0 * (2 * ell_p + 1) as f64 / (2 * k + 1) as f64 * delta_e * radial_element * radial_element * angular
    };
    Ok(TransitionRecord {
        k,
        initial: StateLabel::of(initial),
        final_state: StateLabel::of(final_state),
        geometry: *initial.geometry(),
        model: initial.model,
        delta_e,
        radial_element,
        f_value,
        forbidden,
    })
}

/// Both sides of `Σ_n f^(k)_{ni} = k ⟨r^{2k−2}⟩_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumRule {
    pub lhs: f64,
    pub rhs: f64,
}

impl SumRule {
    pub fn relative_error(&self) -> f64 {
        ((self.lhs - self.rhs) / self.rhs).abs()
    }
}

/// Sums `f^(k)` over every pseudostate of every allowed final channel.
/// `spectra` must contain a complete spectrum for each `ℓ'` in the selection set.
pub fn sum_rule(k: u32, initial: &RadialSolution, spectra: &[Spectrum]) -> Result<SumRule> {
    let mut lhs = 0.0;
    for ell_p in selection_final_ells(k, initial.ell) {
        let spectrum = spectra
            .iter()
            .find(|s| s.ell == ell_p)
            .ok_or_else(|| Error::StateNotFound(format!("no spectrum supplied for final l = {ell_p}")))?;
        for fin in &spectrum.solutions {
            lhs += oscillator_strength(k, initial, fin)?.f_value;
        }
    }
    let rhs = k as f64 * radial_matrix_element(initial, initial, 2 * k as i32 - 2)?;
    Ok(SumRule { lhs, rhs })
}
