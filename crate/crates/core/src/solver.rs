//! Generalized pseudospectral discretization of the radial equation
//!
//! ```text
//! [−½ d²/dr² + ℓ(ℓ+1)/2r² + v(r)] u(r) = E u(r),   u(r_inner) = u(r_outer) = 0
//! ```
//!
//! The reduced function `u = rR` is expanded in Lagrange polynomials on
//! Gauss–Lobatto points of `[−1, 1]`, mapped onto the radial domain. Finite
//! domains use the linear map; an unbounded outer edge uses the algebraic map
//! `r = r_inner + L(1+x)/(1−x+β)` truncated at `r_max`. The kinetic operator is
//! taken in weak form with Lobatto quadrature and symmetrized with the mapped
//! weights, so the discrete Hamiltonian is exactly symmetric. Dirichlet walls
//! are imposed by dropping the two endpoint nodes.

use std::sync::Arc;

use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};
use crate::potentials::{ConfinementGeometry, OuterRadius, PotentialModel};
use crate::quadrature::{barycentric_eval, barycentric_weights, gauss_lobatto, lobatto_derivative_matrix};

/// Smallest permitted domain width (bohr).
pub const MIN_DOMAIN_WIDTH: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Interior collocation points.
    pub n_points: usize,
    /// Mapping length `L` for unbounded domains (bohr).
    pub map_scale: f64,
    /// Effective infinity for unbounded domains (bohr).
    pub r_max_truncation: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { n_points: 200, map_scale: 10.0, r_max_truncation: 200.0 }
    }
}

impl GridSpec {
    pub fn with_points(mut self, n_points: usize) -> Self {
        self.n_points = n_points;
        self
    }

    pub fn with_truncation(mut self, r_max: f64) -> Self {
        self.r_max_truncation = r_max;
        self
    }

    pub fn with_map_scale(mut self, map_scale: f64) -> Self {
        self.map_scale = map_scale;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_points < 16 {
            return Err(Error::GridSpec(format!("n_points must be >= 16, got {}", self.n_points)));
        }
        if !(self.map_scale.is_finite() && self.map_scale > 0.0) {
            return Err(Error::GridSpec(format!("map_scale must be > 0, got {}", self.map_scale)));
        }
        if !(self.r_max_truncation.is_finite() && self.r_max_truncation > 0.0) {
            return Err(Error::GridSpec(format!(
                "r_max_truncation must be > 0, got {}",
                self.r_max_truncation
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Mapping {
    Linear { a: f64, half_width: f64 },
    Algebraic { a: f64, scale: f64, beta: f64 },
}

impl Mapping {
    fn r(&self, x: f64) -> f64 {
        match *self {
            Mapping::Linear { a, half_width } => a + half_width * (1.0 + x),
            Mapping::Algebraic { a, scale, beta } => a + scale * (1.0 + x) / (1.0 - x + beta),
        }
    }

    fn dr_dx(&self, x: f64) -> f64 {
        match *self {
            Mapping::Linear { half_width, .. } => half_width,
            Mapping::Algebraic { scale, beta, .. } => {
                let den = 1.0 - x + beta;
                scale * (2.0 + beta) / (den * den)
            }
        }
    }

    fn x(&self, r: f64) -> f64 {
        match *self {
            Mapping::Linear { a, half_width } => (r - a) / half_width - 1.0,
            Mapping::Algebraic { a, scale, beta } => {
                let s = r - a;
                (s * (1.0 + beta) - scale) / (s + scale)
            }
        }
    }
}

/// Collocation grid with quadrature and interpolation data.
#[derive(Debug, Clone)]
pub struct Grid {
    geometry: ConfinementGeometry,
    spec: GridSpec,
    mapping: Mapping,
    /// All Lobatto nodes, endpoints included.
    nodes: Vec<f64>,
    node_weights: Vec<f64>,
    jacobian: Vec<f64>,
    bary: Vec<f64>,
    radii: Vec<f64>,
    weights: Vec<f64>,
}

impl Grid {
    pub fn geometry(&self) -> &ConfinementGeometry {
        &self.geometry
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// Interior collocation radii (bohr), ascending.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Quadrature weights (bohr) belonging to `radii`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// All mapped Lobatto radii, walls included.
    pub fn full_radii(&self) -> Vec<f64> {
        self.nodes.iter().map(|&x| self.mapping.r(x)).collect()
    }

    /// Quadrature weights belonging to `full_radii`; exact for polynomials in the
    /// mapped coordinate up to degree `2·(n_points + 1) − 1`.
    pub fn full_weights(&self) -> Vec<f64> {
        self.node_weights.iter().zip(&self.jacobian).map(|(w, j)| w * j).collect()
    }

    /// Left and right edge of the discretized domain (the truncation radius on the right
    /// for unbounded geometries).
    pub fn domain(&self) -> (f64, f64) {
        (self.mapping.r(-1.0), self.mapping.r(1.0))
    }

    /// Interpolates interior values (zero at both walls) to an arbitrary radius.
    pub fn interpolate(&self, values: &[f64], r: f64) -> f64 {
        let (lo, hi) = self.domain();
        if r <= lo || r >= hi {
            return 0.0;
        }
        let mut full = Vec::with_capacity(self.nodes.len());
        full.push(0.0);
        full.extend_from_slice(values);
        full.push(0.0);
        barycentric_eval(&self.nodes, &self.bary, &full, self.mapping.x(r))
    }

    fn same_as(&self, other: &Grid) -> bool {
        self.geometry == other.geometry && self.spec == other.spec
    }
}

/// Builds the mapped Lobatto grid for `geometry`.
pub fn build_grid(geometry: &ConfinementGeometry, spec: &GridSpec) -> Result<Grid> {
    spec.validate()?;
    let a = geometry.r_inner();
    let mapping = match geometry.r_outer() {
        OuterRadius::Finite(b) => {
            if b - a < MIN_DOMAIN_WIDTH {
                return Err(Error::Geometry(format!("degenerate domain [{a}, {b}]")));
            }
            Mapping::Linear { a, half_width: 0.5 * (b - a) }
        }
        OuterRadius::Unbounded => {
            let span = spec.r_max_truncation - a;
            if span < MIN_DOMAIN_WIDTH {
                return Err(Error::GridSpec(format!(
                    "r_max_truncation ({}) must exceed r_inner ({a})",
                    spec.r_max_truncation
                )));
            }
            Mapping::Algebraic { a, scale: spec.map_scale, beta: 2.0 * spec.map_scale / span }
        }
    };
    let (nodes, node_weights) = gauss_lobatto(spec.n_points + 1);
    let jacobian: Vec<f64> = nodes.iter().map(|&x| mapping.dr_dx(x)).collect();
    let m = nodes.len();
    let radii: Vec<f64> = nodes[1..m - 1].iter().map(|&x| mapping.r(x)).collect();
    let weights: Vec<f64> = (1..m - 1).map(|i| node_weights[i] * jacobian[i]).collect();
    let bary = barycentric_weights(&nodes);
    Ok(Grid { geometry: *geometry, spec: *spec, mapping, nodes, node_weights, jacobian, bary, radii, weights })
}

/// Symmetric discrete Hamiltonian (row-major, `n × n` with `n = grid.len()`).
///
/// Eigenvectors `c` relate to the reduced radial function by `u_i = c_i / sqrt(W_i)`
/// with `W_i` the radial quadrature weights.
pub fn assemble_hamiltonian(model: &PotentialModel, ell: u32, grid: &Grid) -> Vec<f64> {
    let m = grid.nodes.len();
    let n = m - 2;
    let d = lobatto_derivative_matrix(&grid.nodes);
    // column-major copy of the interior derivative columns scaled by w_k / r'_k
    let mut h = vec![0.0; n * n];
    let scaled: Vec<f64> = (0..m).map(|k| grid.node_weights[k] / grid.jacobian[k]).collect();
    for i in 0..n {
        for j in i..n {
            let mut t = 0.0;
            for k in 0..m {
                t += scaled[k] * d[k][i + 1] * d[k][j + 1];
            }
            let t = 0.5 * t / (grid.weights[i] * grid.weights[j]).sqrt();
            h[i * n + j] = t;
            h[j * n + i] = t;
        }
    }
    let centrifugal = 0.5 * (ell as f64) * (ell as f64 + 1.0);
    for (i, &r) in grid.radii.iter().enumerate() {
        h[i * n + i] += centrifugal / (r * r) + model.value(r);
    }
    h
}

/// One eigenpair of the radial problem.
#[derive(Debug, Clone)]
pub struct RadialSolution {
    /// Position in the ascending spectrum; equals the number of interior nodes.
    pub state_index: usize,
    pub ell: u32,
    /// Hartree.
    pub energy: f64,
    /// Reduced radial function `u = rR` at the grid radii, unit-normalized.
    pub u_values: Vec<f64>,
    pub model: PotentialModel,
    grid: Arc<Grid>,
}

impl RadialSolution {
    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn radii(&self) -> &[f64] {
        self.grid.radii()
    }

    pub fn weights(&self) -> &[f64] {
        self.grid.weights()
    }

    pub fn geometry(&self) -> &ConfinementGeometry {
        self.grid.geometry()
    }

    /// `R(r) = u(r)/r` at the grid radii.
    pub fn r_values(&self) -> Vec<f64> {
        self.u_values.iter().zip(self.grid.radii()).map(|(u, r)| u / r).collect()
    }

    /// `u` at an arbitrary radius, by spectral interpolation.
    pub fn u_at(&self, r: f64) -> f64 {
        self.grid.interpolate(&self.u_values, r)
    }

    pub fn norm(&self) -> f64 {
        self.u_values.iter().zip(self.grid.weights()).map(|(u, w)| w * u * u).sum()
    }

    /// Strict sign changes of `u`, ignoring amplitudes below `1e−9` of the peak.
    pub fn node_count(&self) -> usize {
        let peak = self.u_values.iter().fold(0.0f64, |m, u| m.max(u.abs()));
        let floor = 1e-9 * peak;
        let mut count = 0;
        let mut last = 0.0f64;
        for &u in &self.u_values {
            if u.abs() <= floor {
                continue;
            }
            if last != 0.0 && u.signum() != last.signum() {
                count += 1;
            }
            last = u;
        }
        count
    }

    pub fn shares_grid(&self, other: &RadialSolution) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || self.grid.same_as(&other.grid)
    }
}

/// Lowest eigenpairs of one `(geometry, model, ℓ)` problem, ascending in energy.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub ell: u32,
    pub model: PotentialModel,
    pub solutions: Vec<RadialSolution>,
    grid: Arc<Grid>,
}

impl Spectrum {
    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn geometry(&self) -> &ConfinementGeometry {
        self.grid.geometry()
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn get(&self, state_index: usize) -> Result<&RadialSolution> {
        self.solutions.get(state_index).ok_or_else(|| {
            Error::StateNotFound(format!("state_index {state_index} with l = {} in {}", self.ell, self.geometry()))
        })
    }

    pub fn energies(&self) -> Vec<f64> {
        self.solutions.iter().map(|s| s.energy).collect()
    }
}

/// Diagonalizes on a shared grid, keeping `n_states` (or all, if `None`) lowest states.
pub fn solve_on_grid(
    grid: Arc<Grid>,
    model: &PotentialModel,
    ell: u32,
    n_states: Option<usize>,
) -> Result<Spectrum> {
    let n = grid.len();
    let h = assemble_hamiltonian(model, ell, &grid);
    let h_rev: Vec<f64> = (0..n * n).map(|idx| h[(n - 1 - idx / n) * n + (n - 1 - idx % n)]).collect();
    let mut eig = symmetric_eigen(&h_rev, n)?;
    eig.vectors.iter_mut().for_each(|v| v.reverse());
    // variational floor for the potentials supported here
    let floor = -10.0 * model.z() * model.z();
    let first = eig.values.iter().position(|&e| e >= floor).unwrap_or(n);
    let available = n - first;
    let take = n_states.unwrap_or(available);
    if take > available {
        return Err(Error::TooManyStates { requested: take, available });
    }
    let solutions = (first..first + take)
        .map(|j| {
            let mut u: Vec<f64> =
                eig.vectors[j].iter().zip(grid.weights()).map(|(c, w)| c / w.sqrt()).collect();
            let peak = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let lead = u.iter().find(|x| x.abs() > 1e-3 * peak).copied().unwrap_or(1.0);
            if lead < 0.0 {
                u.iter_mut().for_each(|x| *x = -*x);
            }
            RadialSolution {
                state_index: j - first,
                ell,
                energy: eig.values[j],
                u_values: u,
                model: *model,
                grid: Arc::clone(&grid),
            }
        })
        .collect();
    Ok(Spectrum { ell, model: *model, solutions, grid })
}

/// The `n_states` lowest eigenpairs of the radial problem.
pub fn solve_radial(
    geometry: &ConfinementGeometry,
    model: &PotentialModel,
    ell: u32,
    n_states: usize,
    spec: &GridSpec,
) -> Result<Spectrum> {
    if n_states > spec.n_points {
        return Err(Error::TooManyStates { requested: n_states, available: spec.n_points });
    }
    let grid = Arc::new(build_grid(geometry, spec)?);
    solve_on_grid(grid, model, ell, Some(n_states))
}

/// The complete discrete pseudospectrum (every retained eigenpair).
pub fn solve_full(
    geometry: &ConfinementGeometry,
    model: &PotentialModel,
    ell: u32,
    spec: &GridSpec,
) -> Result<Spectrum> {
    let grid = Arc::new(build_grid(geometry, spec)?);
    solve_on_grid(grid, model, ell, None)
}

/// Energy of a single state.
pub fn state_energy(
    geometry: &ConfinementGeometry,
    model: &PotentialModel,
    ell: u32,
    state_index: usize,
    spec: &GridSpec,
) -> Result<f64> {
    let spectrum = solve_radial(geometry, model, ell, state_index + 1, spec)?;
    Ok(spectrum.get(state_index)?.energy)
}

/// `Σ w_i f_i`.
pub fn quadrature_integral(values: &[f64], weights: &[f64]) -> Result<f64> {
    if values.len() != weights.len() {
        return Err(Error::LengthMismatch { left: values.len(), right: weights.len() });
    }
    Ok(values.iter().zip(weights).map(|(f, w)| f * w).sum())
}
