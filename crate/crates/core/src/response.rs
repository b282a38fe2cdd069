//! Static multipole polarizabilities by summing over the discrete pseudospectrum.
//!
//! For bounded shells the spectrum is purely discrete and the sum is exact up
//! to discretization. Without an outer wall, the positive-energy pseudostates of
//! the truncated domain stand in for the continuum.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::potentials::{classify, ConfinementGeometry, PotentialModel, Regime};
use crate::solver::{build_grid, solve_on_grid, GridSpec, RadialSolution, Spectrum};
use crate::transitions::{ell_letter, oscillator_strength, selection_final_ells, StateLabel};

/// Pseudostates this close in energy to the initial state are skipped (hartree).
pub const DEGENERACY_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub final_ell: u32,
    pub label: String,
}

/// Final-ℓ channels of `α^(k)` for an initial state of angular momentum `ell`.
pub fn channel_decomposition(k: u32, ell: u32) -> Vec<Channel> {
    selection_final_ells(k, ell)
        .into_iter()
        .map(|final_ell| Channel { final_ell, label: format!("{}-channel", ell_letter(final_ell)) })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultipoleResponse {
    pub k: u32,
    pub initial: StateLabel,
    pub geometry: ConfinementGeometry,
    pub model: PotentialModel,
    /// `(ℓ', contribution)` in ascending `ℓ'`.
    pub per_channel: Vec<(u32, f64)>,
    pub total: f64,
    pub n_pseudostates_used: usize,
    /// Pairs skipped by the degeneracy floor.
    pub n_excluded: usize,
    /// Effective infinity when the outer edge is unbounded.
    pub truncation_radius: Option<f64>,
}

/// Free-atom partners in the same shell `n = state_index + ℓ + 1`. Screening
/// lifts their hydrogenic degeneracy only slightly, and the resulting `1/ΔE`
/// term is dropped as it is for the exactly degenerate Coulomb shell.
fn same_shell(a: &RadialSolution, b: &RadialSolution) -> bool {
    a.state_index as u32 + a.ell == b.state_index as u32 + b.ell
}

/// `α^(k)` of `initial` from precomputed complete spectra of every allowed channel.
pub fn polarizability_from_spectra(k: u32, initial: &RadialSolution, spectra: &[Spectrum]) -> Result<MultipoleResponse> {
    let free = classify(initial.geometry()) == Regime::Fha;
    let mut per_channel = Vec::new();
    let mut used = 0;
    let mut excluded = 0;
    for ch in channel_decomposition(k, initial.ell) {
        let spectrum = spectra
            .iter()
            .find(|s| s.ell == ch.final_ell)
            .ok_or_else(|| Error::StateNotFound(format!("no spectrum supplied for final l = {}", ch.final_ell)))?;
        let mut partial = 0.0;
        for fin in &spectrum.solutions {
            let de = fin.energy - initial.energy;
            if de.abs() < DEGENERACY_FLOOR || (free && same_shell(initial, fin)) {
                excluded += 1;
                continue;
            }
            let rec = oscillator_strength(k, initial, fin)?;
            partial += rec.f_value / (de * de);
            used += 1;
        }
        per_channel.push((ch.final_ell, partial));
    }
    let geometry = *initial.geometry();
    let truncation_radius = geometry.r_outer().is_unbounded().then(|| initial.grid().spec().r_max_truncation);
    Ok(MultipoleResponse {
        k,
        initial: StateLabel::of(initial),
        geometry,
        model: initial.model,
        total: per_channel.iter().map(|(_, a)| a).sum(),
        per_channel,
        n_pseudostates_used: used,
        n_excluded: excluded,
        truncation_radius,
    })
}

/// Complete spectra for `ell` and all of its `2^k`-pole partner channels on one shared grid.
pub fn channel_spectra(
    k: u32,
    ell: u32,
    geometry: &ConfinementGeometry,
    model: &PotentialModel,
    spec: &GridSpec,
) -> Result<Vec<Spectrum>> {
    let grid = Arc::new(build_grid(geometry, spec)?);
    let mut ells = selection_final_ells(k, ell);
    if !ells.contains(&ell) {
        ells.push(ell);
    }
    ells.sort_unstable();
    ells.into_iter().map(|l| solve_on_grid(Arc::clone(&grid), model, l, None)).collect()
}

/// `α^(k)` of the state `(ell, state_index)`.
pub fn polarizability(
    k: u32,
    ell: u32,
    state_index: usize,
    geometry: &ConfinementGeometry,
    model: &PotentialModel,
    spec: &GridSpec,
) -> Result<MultipoleResponse> {
    if !(1..=4).contains(&k) {
        return Err(Error::Invalid(format!("multipole order must be 1..=4, got {k}")));
    }
    let spectra = channel_spectra(k, ell, geometry, model, spec)?;
    let own = spectra.iter().find(|s| s.ell == ell).expect("initial channel is always solved");
    let initial = own.get(state_index)?;
    polarizability_from_spectra(k, initial, &spectra)
}

/// Dipole polarizability of the magnetic sublevel `m` along the quantization
/// axis, from the m-averaged channel decomposition of a `k = 1` response.
pub fn dipole_sublevel(response: &MultipoleResponse, m: i32) -> Result<f64> {
    if response.k != 1 {
        return Err(Error::Invalid(format!("sublevel resolution needs k = 1, got {}", response.k)));
    }
    let ell = response.initial.ell as i32;
    if m.abs() > ell {
        return Err(Error::Invalid(format!("|m| = {} exceeds l = {ell}", m.abs())));
    }
    let (l, m2) = (ell as f64, (m * m) as f64);
    Ok(response
        .per_channel
        .iter()
        .map(|&(lp, part)| {
            let weight = if lp as i32 > ell {
                3.0 * ((l + 1.0).powi(2) - m2) / ((2.0 * l + 3.0) * (l + 1.0))
            } else {
                3.0 * (l * l - m2) / ((2.0 * l - 1.0) * l)
            };
            weight * part
        })
        .sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub geometry: ConfinementGeometry,
    pub ell: u32,
    pub state_index: usize,
    pub alpha: f64,
    pub negative: bool,
}

/// Dipole polarizability of each `(ell, state_index)` at each geometry, in input order.
pub fn negative_polarizability_scan(
    states: &[(u32, usize)],
    geometries: &[ConfinementGeometry],
    model: &PotentialModel,
    spec: &GridSpec,
) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::with_capacity(states.len() * geometries.len());
    for geometry in geometries {
        for &(ell, state_index) in states {
            let alpha = polarizability(1, ell, state_index, geometry, model, spec)?.total;
            rows.push(ScanRow { geometry: *geometry, ell, state_index, alpha, negative: alpha < 0.0 });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transitions::oscillator_strength;
    use approx::assert_relative_eq;

    #[test]
    fn decomposition_examples() {
        let p: Vec<u32> = channel_decomposition(1, 1).iter().map(|c| c.final_ell).collect();
        assert_eq!(p, vec![0, 2]);
        assert_eq!(channel_decomposition(1, 1)[0].label, "s-channel");
        let d: Vec<u32> = channel_decomposition(3, 2).iter().map(|c| c.final_ell).collect();
        assert_eq!(d, vec![1, 3, 5]);
        let s: Vec<u32> = channel_decomposition(4, 0).iter().map(|c| c.final_ell).collect();
        assert_eq!(s, vec![4]);
    }

    #[test]
    fn free_ground_state() {
        let spec = GridSpec::default().with_truncation(400.0);
        let r = polarizability(1, 0, 0, &ConfinementGeometry::free(), &PotentialModel::coulomb(1.0), &spec).unwrap();
        assert_relative_eq!(r.total, 4.5, max_relative = 1e-3);
        assert_eq!(r.truncation_radius, Some(400.0));
        assert_eq!(r.per_channel.len(), 1);
    }

    #[test]
    fn cavity_values() {
        let m = PotentialModel::coulomb(1.0);
        let spec = GridSpec::default().with_points(100);
        let r = polarizability(1, 0, 0, &ConfinementGeometry::cavity(1.0).unwrap(), &m, &spec).unwrap();
        assert!((r.total - 0.02879202).abs() < 1e-5);
        assert_eq!(r.truncation_radius, None);
        let r = polarizability(1, 0, 0, &ConfinementGeometry::shell(1.0, 2.0).unwrap(), &m, &spec).unwrap();
        assert_relative_eq!(r.total, 3.22129727, max_relative = 1e-4);
    }

    #[test]
    fn total_equals_sum_of_records() {
        let m = PotentialModel::coulomb(1.0);
        let g = ConfinementGeometry::cavity(3.0).unwrap();
        let spectra = channel_spectra(2, 1, &g, &m, &GridSpec::default().with_points(60)).unwrap();
        let initial = &spectra.iter().find(|s| s.ell == 1).unwrap().solutions[0];
        let r = polarizability_from_spectra(2, initial, &spectra).unwrap();
        let mut manual = 0.0;
        for s in &spectra {
            if s.ell == 1 || s.ell == 3 {
                for fin in &s.solutions {
                    let de = fin.energy - initial.energy;
                    if de.abs() >= DEGENERACY_FLOOR {
                        manual += oscillator_strength(2, initial, fin).unwrap().f_value / (de * de);
                    }
                }
            }
        }
        assert_relative_eq!(r.total, manual, max_relative = 1e-12);
        assert_eq!(r.n_excluded, 1);
        assert_relative_eq!(r.total, r.per_channel.iter().map(|c| c.1).sum::<f64>(), max_relative = 1e-15);
    }

    #[test]
    fn negative_flag() {
        let m = PotentialModel::coulomb(1.0);
        let rows = negative_polarizability_scan(
            &[(0, 1)],
            &[ConfinementGeometry::cavity(5.0).unwrap()],
            &m,
            &GridSpec::default().with_points(100),
        )
        .unwrap();
        assert!(rows[0].negative);
        assert_relative_eq!(rows[0].alpha, -21.10657309, max_relative = 1e-3);
    }

    #[test]
    fn sublevels_average_to_scalar() {
        let m = PotentialModel::coulomb(1.0);
        let spec = GridSpec::default().with_truncation(400.0);
        for ell in 1..=3 {
            let r = polarizability(1, ell, 0, &ConfinementGeometry::free(), &m, &spec).unwrap();
            let mean: f64 = (-(ell as i32)..=ell as i32).map(|mm| dipole_sublevel(&r, mm).unwrap()).sum::<f64>() / (2 * ell + 1) as f64;
            assert_relative_eq!(mean, r.total, max_relative = 1e-12);
        }
        // stretched 2p: only the d channel, at 9/10 of its averaged weight
        let r = polarizability(1, 1, 0, &ConfinementGeometry::free(), &m, &spec).unwrap();
        assert_relative_eq!(dipole_sublevel(&r, 1).unwrap(), 0.9 * r.per_channel[1].1, max_relative = 1e-12);
        let s = polarizability(1, 0, 0, &ConfinementGeometry::free(), &m, &spec).unwrap();
        assert_eq!(dipole_sublevel(&s, 0).unwrap(), s.total);
        assert!(dipole_sublevel(&s, 1).is_err());
    }

    #[test]
    fn screened_free_shell_partner_is_dropped() {
        let spec = GridSpec::default();
        let m = PotentialModel::debye(1.0, 0.01);
        let r = polarizability(1, 0, 1, &ConfinementGeometry::free(), &m, &spec).unwrap();
        assert_eq!(r.n_excluded, 1);
        assert!((r.total - 120.5848668).abs() < 1e-3, "{}", r.total);
    }

    #[test]
    fn rejects_missing_state() {
        let m = PotentialModel::coulomb(1.0);
        let spec = GridSpec::default().with_points(20);
        assert!(polarizability(1, 0, 500, &ConfinementGeometry::cavity(1.0).unwrap(), &m, &spec).is_err());
        assert!(polarizability(5, 0, 0, &ConfinementGeometry::cavity(1.0).unwrap(), &m, &spec).is_err());
    }
}
