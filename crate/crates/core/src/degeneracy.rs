//! Incidental degeneracy: confined states whose energy equals a free level
//! because the walls sit exactly on the free state's radial nodes.

use std::fmt;

use crate::error::{Error, Result};
use crate::hydrogen::{bisect, radial_nodes, HydrogenState};
use crate::information::shannon_position;
use crate::parallel::par_map;
use crate::potentials::{classify, ConfinementGeometry, OuterRadius, PotentialKind, PotentialModel, Regime};
use crate::response::{dipole_sublevel, polarizability};
use crate::solver::{solve_radial, GridSpec};
use crate::transitions::ell_letter;

/// Tolerance on `|E_confined − E_parent|` (hartree).
pub const ATLAS_TOLERANCE: f64 = 1e-6;

/// Number of degenerate states associated with free level `n`: `n(n+1)(n+2)/6`.
pub fn count_total(n: u32) -> u64 {
    let n = n as u64;
    n * (n + 1) * (n + 2) / 6
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CategoryCounts {
    pub fha: u64,
    pub cha: u64,
    pub scha: u64,
    pub lcha: u64,
}

impl CategoryCounts {
    pub fn total(&self) -> u64 {
        self.fha + self.cha + self.scha + self.lcha
    }

    pub fn get(&self, regime: Regime) -> u64 {
        match regime {
            Regime::Fha => self.fha,
            Regime::Cha => self.cha,
            Regime::Scha => self.scha,
            Regime::Lcha => self.lcha,
        }
    }
}

pub fn count_by_category(n: u32) -> CategoryCounts {
    let n = n as u64;
    let pairs = n * n.saturating_sub(1) / 2;
    CategoryCounts { fha: n, cha: pairs, scha: n * n.saturating_sub(1) * n.saturating_sub(2) / 6, lcha: pairs }
}

/// Degenerate states contributed by angular momentum `ell`: `(n−ℓ)(n−ℓ+1)/2`.
pub fn count_for_ell(n: u32, ell: u32) -> u64 {
    if ell >= n {
        return 0;
    }
    let m = (n - ell) as u64;
    m * (m + 1) / 2
}

/// A wall pair drawn from `{0, nodes…, ∞}` and the confined state it hosts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeGeometry {
    pub geometry: ConfinementGeometry,
    /// Parent nodes strictly inside the geometry, equal to the confined `state_index`.
    pub interior_nodes: usize,
}

/// Every geometry whose walls are two members of `{0, nodes…, ∞}`.
pub fn node_geometries(nodes: &[f64]) -> Result<Vec<NodeGeometry>> {
    let mut points: Vec<Option<f64>> = vec![Some(0.0)];
    points.extend(nodes.iter().map(|&r| Some(r)));
    points.push(None);
    let mut out = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let inner = points[i].expect("only the last point is unbounded");
            let outer = match points[j] {
                Some(r) => OuterRadius::Finite(r),
                None => OuterRadius::Unbounded,
            };
            out.push(NodeGeometry { geometry: ConfinementGeometry::new(inner, outer)?, interior_nodes: j - i - 1 });
        }
    }
    Ok(out)
}

/// Radial nodes of the free `(n, ℓ)` state of a screened potential, from the
/// solved eigenvector: sign changes on the grid refined on the spectral interpolant.
pub fn find_nodes_numeric(model: &PotentialModel, n: u32, ell: u32, spec: &GridSpec) -> Result<Vec<f64>> {
    if ell >= n {
        return Err(Error::Invalid(format!("need l < n, got n = {n}, l = {ell}")));
    }
    let index = (n - ell - 1) as usize;
    let spectrum = solve_radial(&ConfinementGeometry::free(), model, ell, index + 1, spec)?;
    let state = spectrum.get(index)?;
    if state.energy >= 0.0 {
        return Err(Error::Unbound(format!("{n}{} has E = {} for {model:?}", ell_letter(ell), state.energy)));
    }
    let peak = state.u_values.iter().fold(0.0f64, |m, u| m.max(u.abs()));
    let floor = 1e-9 * peak;
    let radii = state.radii();
    let mut nodes = Vec::with_capacity(index);
    let mut last: Option<(f64, f64)> = None;
    for (&r, &u) in radii.iter().zip(&state.u_values) {
        if u.abs() <= floor {
            continue;
        }
        if let Some((r0, u0)) = last {
            if u0.signum() != u.signum() {
                nodes.push(bisect(&|x| state.u_at(x), r0, r, 1e-12));
            }
        }
        last = Some((r, u));
    }
    if nodes.len() != index {
        return Err(Error::Invalid(format!("found {} nodes for {n}{}, expected {index}", nodes.len(), ell_letter(ell))));
    }
    Ok(nodes)
}

/// Parent free state `(n, ℓ)` and its energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeState {
    pub n: u32,
    pub ell: u32,
    pub energy: f64,
}

impl fmt::Display for FreeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.n, ell_letter(self.ell))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtlasRow {
    /// `a, b, c, …` in table order.
    pub serial: String,
    pub state_index: usize,
    pub ell: u32,
    pub geometry: ConfinementGeometry,
    pub energy: f64,
    pub parent: FreeState,
    pub regime: Regime,
    /// m-averaged dipole polarizability.
    pub alpha: Option<f64>,
    /// Dipole polarizability of the stretched sublevel `m = ℓ`.
    pub alpha_stretched: Option<f64>,
    /// Full position-space Shannon entropy.
    pub s_r: Option<f64>,
}

impl AtlasRow {
    /// Confined-state label counting nodes from the lowest state of each ℓ, e.g. `2s`.
    pub fn label(&self) -> String {
        format!("{}{}", self.state_index as u32 + self.ell + 1, ell_letter(self.ell))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AtlasOptions {
    pub spec: GridSpec,
    /// Restrict to these ℓ; `None` takes every `ℓ < n`.
    pub ells: Option<Vec<u32>>,
    pub with_alpha: bool,
    pub with_entropy: bool,
}

/// Free-state energy and nodes: analytic for Coulomb, solved otherwise.
pub fn free_state(model: &PotentialModel, n: u32, ell: u32, spec: &GridSpec) -> Result<(FreeState, Vec<f64>)> {
    if model.kind() == PotentialKind::Coulomb {
        let h = HydrogenState::new(n, ell, model.z())?;
        return Ok((FreeState { n, ell, energy: h.energy() }, radial_nodes(&h)));
    }
    let nodes = find_nodes_numeric(model, n, ell, spec)?;
    let energy = crate::solver::state_energy(&ConfinementGeometry::free(), model, ell, (n - ell - 1) as usize, spec)?;
    Ok((FreeState { n, ell, energy }, nodes))
}

/// All confined states degenerate with the free level `n`, verified against
/// the parent energy and sorted by `(ℓ, state_index, R_a, R_b)`.
pub fn enumerate_atlas(n: u32, model: &PotentialModel, options: &AtlasOptions) -> Result<Vec<AtlasRow>> {
    if n == 0 {
        return Err(Error::Invalid("n must be >= 1".into()));
    }
    let ells: Vec<u32> = match &options.ells {
        Some(list) => list.iter().copied().filter(|&l| l < n).collect(),
        None => (0..n).collect(),
    };
    let mut jobs = Vec::new();
    for ell in ells {
        let (parent, nodes) = free_state(model, n, ell, &options.spec)?;
        for g in node_geometries(&nodes)? {
            jobs.push((parent, ell, g));
        }
    }
    jobs.sort_by(|a, b| {
        let key = |(_, ell, g): &(FreeState, u32, NodeGeometry)| {
            (*ell, g.interior_nodes, g.geometry.r_inner(), g.geometry.r_outer().finite().unwrap_or(f64::INFINITY))
        };
        key(a).partial_cmp(&key(b)).expect("finite radii")
    });
    let rows = par_map(&jobs, |(parent, ell, g)| solve_row(*parent, *ell, g, model, options));
    rows.into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.map(|mut r| {
                r.serial = serial(i);
                r
            })
        })
        .collect()
}

fn solve_row(parent: FreeState, ell: u32, g: &NodeGeometry, model: &PotentialModel, options: &AtlasOptions) -> Result<AtlasRow> {
    let state_index = g.interior_nodes;
    let spectrum = solve_radial(&g.geometry, model, ell, state_index + 1, &options.spec)?;
    let solution = spectrum.get(state_index)?;
    let mut row = AtlasRow {
        serial: String::new(),
        state_index,
        ell,
        geometry: g.geometry,
        energy: solution.energy,
        parent,
        regime: classify(&g.geometry),
        alpha: None,
        alpha_stretched: None,
        s_r: None,
    };
    if (row.energy - parent.energy).abs() >= ATLAS_TOLERANCE {
        return Err(Error::AtlasMismatch {
            label: row.label(),
            r_inner: g.geometry.r_inner(),
            r_outer: g.geometry.r_outer().to_string(),
            energy: row.energy,
            expected: parent.energy,
        });
    }
    if options.with_alpha {
        let response = polarizability(1, ell, state_index, &g.geometry, model, &options.spec)?;
        row.alpha = Some(response.total);
        row.alpha_stretched = Some(dipole_sublevel(&response, ell as i32)?);
    }
    if options.with_entropy {
        row.s_r = Some(shannon_position(solution).full);
    }
    Ok(row)
}

/// `a … z`, then `aa, ab, …`.
fn serial(i: usize) -> String {
    let letter = |k: usize| (b'a' + k as u8) as char;
    if i < 26 {
        letter(i).to_string()
    } else {
        format!("{}{}", letter(i / 26 - 1), letter(i % 26))
    }
}
