//! Herzfeld metallicity: a shell turns metallic once its dipole polarizability
//! reaches the volume parameter `V = R_b³ − R_a³`.

use crate::error::{Error, Result};
use crate::potentials::{ConfinementGeometry, PotentialModel};
use crate::response::polarizability;
use crate::solver::GridSpec;

/// Bracket width at which the threshold search stops (bohr).
pub const RM_TOLERANCE: f64 = 1e-4;
/// Closest approach of the inner wall to the outer one during the search (bohr).
pub const MIN_SHELL_WIDTH: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetallicityPoint {
    pub geometry: ConfinementGeometry,
    pub volume_param: f64,
    pub alpha1: f64,
    pub metallic: bool,
}

pub fn herzfeld_check(
    geometry: &ConfinementGeometry,
    ell: u32,
    state_index: usize,
    model: &PotentialModel,
    spec: &GridSpec,
) -> Result<MetallicityPoint> {
    let volume_param = geometry
        .volume_param()
        .ok_or_else(|| Error::Geometry(format!("volume parameter undefined for unbounded {geometry}")))?;
    let alpha1 = polarizability(1, ell, state_index, geometry, model, spec)?.total;
    Ok(MetallicityPoint { geometry: *geometry, volume_param, alpha1, metallic: volume_param <= alpha1 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    /// Inner radius `R_m` where `α^(1) = V`.
    Root(f64),
    /// `α^(1) ≥ V` across the whole probed range of `R_a`.
    AlwaysMetallic,
    /// `α^(1) < V` across the whole probed range of `R_a`.
    NeverMetallic,
}

impl Threshold {
    pub fn root(self) -> Option<f64> {
        match self {
            Threshold::Root(r) => Some(r),
            _ => None,
        }
    }
}

/// `α^(1) − V` at inner radius `r_inner`.
fn excess(r_inner: f64, r_outer: f64, ell: u32, state_index: usize, model: &PotentialModel, spec: &GridSpec) -> Result<f64> {
    let point = herzfeld_check(&ConfinementGeometry::shell(r_inner, r_outer)?, ell, state_index, model, spec)?;
    Ok(point.alpha1 - point.volume_param)
}

/// Threshold inner radius for an s state of the shell with outer radius `r_outer`,
/// by bisection on `R_a ∈ [0, r_outer − MIN_SHELL_WIDTH]`. Each probe is a full re-solve.
pub fn find_rm(r_outer: f64, state_index: usize, model: &PotentialModel, spec: &GridSpec) -> Result<Threshold> {
    if r_outer.is_nan() || r_outer <= MIN_SHELL_WIDTH {
        return Err(Error::Geometry(format!("outer radius {r_outer} too small")));
    }
    bracket_root(|ra| excess(ra, r_outer, 0, state_index, model, spec), 0.0, r_outer - MIN_SHELL_WIDTH)
}

fn bracket_root(g: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<Threshold> {
    let (g_lo, g_hi) = (g(lo)?, g(hi)?);
    match (g_lo >= 0.0, g_hi >= 0.0) {
        (true, true) => return Ok(Threshold::AlwaysMetallic),
        (false, false) => return Ok(Threshold::NeverMetallic),
        _ => {}
    }
    let rising = g_hi >= 0.0;
    while hi - lo > RM_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if (g(mid)? >= 0.0) == rising {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Threshold::Root(0.5 * (lo + hi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn coulomb() -> PotentialModel {
        PotentialModel::coulomb(1.0)
    }

    #[test]
    fn herzfeld_examples() {
        let spec = GridSpec::default().with_points(100);
        let p = herzfeld_check(&ConfinementGeometry::shell(1.8, 2.0).unwrap(), 0, 0, &coulomb(), &spec).unwrap();
        assert!(p.metallic);
        assert_abs_diff_eq!(p.volume_param, 2.168, epsilon = 1e-12);
        assert!((p.alpha1 - 8.67861281).abs() < 1e-4 * 8.67861281);
        let p = herzfeld_check(&ConfinementGeometry::cavity(1.0).unwrap(), 0, 0, &coulomb(), &spec).unwrap();
        assert!(!p.metallic);
        let p = herzfeld_check(&ConfinementGeometry::shell(0.999, 1.0).unwrap(), 0, 0, &coulomb(), &spec).unwrap();
        assert!(p.alpha1 > 0.0 && p.metallic);
    }

    #[test]
    fn unbounded_geometry_is_rejected() {
        let spec = GridSpec::default().with_points(60);
        assert!(matches!(
            herzfeld_check(&ConfinementGeometry::left(1.0).unwrap(), 0, 0, &coulomb(), &spec),
            Err(Error::Geometry(_))
        ));
        assert!(herzfeld_check(&ConfinementGeometry::free(), 0, 0, &coulomb(), &spec).is_err());
    }

    #[test]
    fn unit_shell_threshold() {
        let spec = GridSpec::default().with_points(100);
        let rm = find_rm(1.0, 0, &coulomb(), &spec).unwrap().root().unwrap();
        assert_abs_diff_eq!(rm, 0.81776350, epsilon = 2e-3);
        // defining equation at the root
        let p = herzfeld_check(&ConfinementGeometry::shell(rm, 1.0).unwrap(), 0, 0, &coulomb(), &spec).unwrap();
        assert!((p.alpha1 - p.volume_param).abs() / p.volume_param < 1e-3);
    }

    #[test]
    fn outcomes_are_classified() {
        assert_eq!(bracket_root(|x| Ok(x + 1.0), 0.0, 1.0).unwrap(), Threshold::AlwaysMetallic);
        assert_eq!(bracket_root(|x| Ok(x - 2.0), 0.0, 1.0).unwrap(), Threshold::NeverMetallic);
        let r = bracket_root(|x| Ok(0.3 - x), 0.0, 1.0).unwrap().root().unwrap();
        assert_abs_diff_eq!(r, 0.3, epsilon = RM_TOLERANCE);
        assert!(bracket_root(|_| Err(Error::Invalid("probe".into())), 0.0, 1.0).is_err());
        let spec = GridSpec::default().with_points(60);
        assert!(find_rm(0.0, 0, &coulomb(), &spec).is_err());
    }
}
