//! Shannon entropy and Onicescu energy in position and momentum space.
//!
//! Densities factor as `ρ(r) |Y_ℓ0|²`, so every measure splits into a radial
//! part and an angular part (`m = 0` throughout). Entropies add the two parts,
//! Onicescu energies multiply them.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::potentials::{ConfinementGeometry, PotentialModel};
use crate::quadrature::{gauss_legendre, legendre};
use crate::solver::{solve_radial, GridSpec, RadialSolution};

/// Spherical Bessel function of the first kind `j_ℓ(x)`, `x ≥ 0`.
pub fn spherical_bessel_j(ell: u32, x: f64) -> f64 {
    let l = ell as f64;
    if x < l + 1.0 {
        // power series; terms stay O(1) in this range
        let x2 = 0.5 * x * x;
        let mut lead = 1.0;
        for k in 1..=ell {
            lead *= x / (2 * k + 1) as f64;
        }
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..200 {
            term *= -x2 / (k as f64 * (2.0 * l + 2.0 * k as f64 + 1.0));
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        return lead * sum;
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    if ell == 0 {
        return j0;
    }
    let mut prev = j0;
    let mut cur = s / (x * x) - c / x;
    for k in 1..ell {
        let next = (2 * k + 1) as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Momentum grid `[0, p_max]` sampled by Gauss–Legendre panels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumGridSpec {
    pub p_max: f64,
    pub n_points: usize,
}

impl Default for MomentumGridSpec {
    fn default() -> Self {
        Self { p_max: 30.0, n_points: 400 }
    }
}

/// Neglected momentum norm targeted by [`MomentumGridSpec::adaptive`].
pub const TAIL_TARGET: f64 = 5e-9;
/// Norm that must be captured before a transform is accepted.
pub const NORM_CAPTURE: f64 = 1.0 - 1e-5;

const PANEL_ORDER: usize = 16;

impl MomentumGridSpec {
    /// Chooses `p_max` from the wall slopes and `n_points` from the outer extent,
    /// which sets the oscillation period `2π/b` of `ψ(p)`.
    ///
    /// A wall where `u'` stays finite leaves a `p⁻⁶` tail in the momentum
    /// density, carrying norm `(u'(a)² + u'(b)²)/(3π p³)` beyond `p`.
    pub fn adaptive(solution: &RadialSolution) -> Self {
        let (_, b) = support(solution);
        let (da, db) = wall_slopes(solution);
        let p_tail = ((da * da + db * db) / (3.0 * PI * TAIL_TARGET)).cbrt();
        let p_max = p_tail.clamp(60.0, 4000.0);
        // eight panels per oscillation keep the kinks of ρ ln ρ at the zeros of ψ resolved
        let panels = (4.0 * p_max * (b + 1.0) / PI).ceil().max(25.0) as usize;
        Self { p_max, n_points: panels * PANEL_ORDER }
    }
}

fn wall_slopes(solution: &RadialSolution) -> (f64, f64) {
    let geometry = solution.geometry();
    let a = geometry.r_inner();
    let h = 1e-5 * (solution.radii()[0] - a).max(1e-3);
    // one-sided second-order differences on the spectral interpolant, with u = 0 at the wall
    let left = if a > 0.0 { (4.0 * solution.u_at(a + h) - solution.u_at(a + 2.0 * h)) / (2.0 * h) } else { 0.0 };
    let right = match geometry.r_outer().finite() {
        Some(b) => {
            let h = 1e-5 * (b - solution.radii()[solution.radii().len() - 1]).max(1e-3);
            (4.0 * solution.u_at(b - h) - solution.u_at(b - 2.0 * h)) / (2.0 * h)
        }
        None => 0.0,
    };
    (left, right)
}

/// Radial interval outside which `|u|` is negligible.
fn support(solution: &RadialSolution) -> (f64, f64) {
    let geometry = solution.geometry();
    let a = geometry.r_inner();
    let b = match geometry.r_outer().finite() {
        Some(b) => b,
        None => {
            let peak = solution.u_values.iter().fold(0.0f64, |m, u| m.max(u.abs()));
            let radii = solution.radii();
            let last = solution.u_values.iter().rposition(|u| u.abs() > 1e-13 * peak).unwrap_or(radii.len() - 1);
            radii[(last + 1).min(radii.len() - 1)]
        }
    };
    (a, b)
}

/// Composite Gauss–Legendre rule on `[lo, hi]` with `panels` equal panels.
fn panel_rule(lo: f64, hi: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(PANEL_ORDER);
    let h = (hi - lo) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * PANEL_ORDER);
    let mut weights = Vec::with_capacity(panels * PANEL_ORDER);
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(mid + 0.5 * h * xi);
            weights.push(0.5 * h * wi);
        }
    }
    (nodes, weights)
}

/// `j_0(x) ..= j_n(x)` into `out`; downward recurrence from the series below
/// the turning point, upward above it.
fn spherical_bessel_all(x: f64, out: &mut [f64]) {
    let n = out.len() - 1;
    if n == 0 || x < 1e-300 {
        out.fill(0.0);
        out[0] = spherical_bessel_j(0, x);
        return;
    }
    if x >= n as f64 + 1.0 {
        let (s, c) = x.sin_cos();
        out[0] = s / x;
        out[1] = s / (x * x) - c / x;
        for k in 1..n {
            out[k + 1] = (2 * k + 1) as f64 / x * out[k] - out[k - 1];
        }
    } else {
        out[n] = spherical_bessel_j(n as u32, x);
        out[n - 1] = spherical_bessel_j(n as u32 - 1, x);
        for k in (1..n).rev() {
            out[k - 1] = (2 * k + 1) as f64 / x * out[k] - out[k + 1];
        }
    }
}

/// Oscillatory-integral representation of one radial function.
///
/// On each panel `f(r) r^{-k}` is expanded in Legendre polynomials, and
/// `∫ P_j(t) e^{iωt} dt = 2 i^j j_j(ω)` integrates each term against `e^{ipr}`
/// exactly. With `j_ℓ(x)` written as sines and cosines times powers of `1/x`,
/// the cost per momentum point no longer depends on `p`.
struct BesselTransform {
    ell: u32,
    mids: Vec<f64>,
    half: f64,
    /// `coeffs[k][panel][j]` for `f r^{-k}`, `k = 0..=ℓ`.
    coeffs: Vec<Vec<[f64; PANEL_ORDER]>>,
    nodes: Vec<f64>,
    /// `w u r` at the panel nodes, for the direct rule at small `p`.
    direct: Vec<f64>,
}

impl BesselTransform {
    fn new(solution: &RadialSolution, a: f64, b: f64) -> Self {
        let panels = ((2.0 * (b - a)).ceil() as usize).max(64);
        let h = (b - a) / panels as f64;
        let (x, w) = gauss_legendre(PANEL_ORDER);
        let legendre_table: Vec<[f64; PANEL_ORDER]> =
            x.iter().map(|&t| std::array::from_fn(|j| legendre(j, t))).collect();
        let (nodes, weights) = panel_rule(a, b, panels);
        let u: Vec<f64> = nodes.iter().map(|&r| solution.u_at(r)).collect();
        let ell = solution.ell;
        let coeffs = (0..=ell as i32)
            .map(|k| {
                (0..panels)
                    .map(|pnl| {
                        std::array::from_fn(|j| {
                            let sum: f64 = (0..PANEL_ORDER)
                                .map(|i| {
                                    let idx = pnl * PANEL_ORDER + i;
                                    w[i] * u[idx] * nodes[idx].powi(-k) * legendre_table[i][j]
                                })
                                .sum();
                            0.5 * (2 * j + 1) as f64 * sum
                        })
                    })
                    .collect()
            })
            .collect();
        let direct = nodes.iter().zip(&weights).zip(&u).map(|((r, w), u)| w * u * r).collect();
        let mids = (0..panels).map(|p| a + (p as f64 + 0.5) * h).collect();
        Self { ell, mids, half: 0.5 * h, coeffs, nodes, direct }
    }

    fn eval(&self, p: f64, moments: &mut [f64; PANEL_ORDER]) -> f64 {
        let c = (2.0 / PI).sqrt();
        if p * self.half <= 1.0 {
            // smooth integrand; the trigonometric split would cancel here
            return c * self.nodes.iter().zip(&self.direct).map(|(&r, f)| f * spherical_bessel_j(self.ell, p * r)).sum::<f64>();
        }
        spherical_bessel_all(p * self.half, moments);
        // 2 i^j j_j(ω) split into real and imaginary parts
        let mut m_re = [0.0; PANEL_ORDER];
        let mut m_im = [0.0; PANEL_ORDER];
        for j in 0..PANEL_ORDER {
            let v = 2.0 * moments[j];
            match j % 4 {
                0 => m_re[j] = v,
                1 => m_im[j] = v,
                2 => m_re[j] = -v,
                _ => m_im[j] = -v,
            }
        }
        let phases: Vec<(f64, f64)> = self.mids.iter().map(|&m| (p * m).sin_cos()).collect();
        let ell = self.ell as i32;
        let (shift_s, shift_c) = (-(ell as f64) * PI / 2.0).sin_cos();
        let mut total = 0.0;
        for (k, panels) in self.coeffs.iter().enumerate() {
            let (mut re, mut im) = (0.0, 0.0);
            for (cf, &(s, cs)) in panels.iter().zip(&phases) {
                let (mut pr, mut pi) = (0.0, 0.0);
                for j in 0..PANEL_ORDER {
                    pr += cf[j] * m_re[j];
                    pi += cf[j] * m_im[j];
                }
                re += cs * pr - s * pi;
                im += cs * pi + s * pr;
            }
            // ∫ f r^{-k} e^{i(pr − ℓπ/2)} dr
            let (re, im) = (self.half * (re * shift_c - im * shift_s), self.half * (re * shift_s + im * shift_c));
            let k = k as i32;
            let a_k = bessel_coefficient(ell, k);
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let trig = if k % 2 == 0 { im } else { re };
            total += sign * a_k * trig * p.powi(-k - 1);
        }
        c * total
    }
}

/// `(ℓ+k)! / (2^k k! (ℓ−k)!)`.
fn bessel_coefficient(ell: i32, k: i32) -> f64 {
    let mut v = 1.0;
    for i in (ell - k + 1)..=(ell + k) {
        v *= i as f64;
    }
    for i in 1..=k {
        v /= 2.0 * i as f64;
    }
    v
}

/// Radial momentum wavefunction `ψ(p)` with `∫ ψ² p² dp = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumWavefunction {
    pub ell: u32,
    pub momenta: Vec<f64>,
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
}

impl MomentumWavefunction {
    pub fn norm(&self) -> f64 {
        self.momenta.iter().zip(&self.values).zip(&self.weights).map(|((p, v), w)| w * v * v * p * p).sum()
    }
}

/// `ψ(p) = sqrt(2/π) ∫ u(r) j_ℓ(pr) r dr`.
pub fn momentum_transform(solution: &RadialSolution, spec: &MomentumGridSpec) -> Result<MomentumWavefunction> {
    if spec.p_max.is_nan() || spec.p_max <= 0.0 || spec.n_points < PANEL_ORDER {
        return Err(Error::Invalid(format!("bad momentum grid {spec:?}")));
    }
    let (a, b) = support(solution);
    let transform = BesselTransform::new(solution, a, b);
    let (momenta, weights) = panel_rule(0.0, spec.p_max, spec.n_points.div_ceil(PANEL_ORDER));
    let mut moments = [0.0; PANEL_ORDER];
    let values = momenta.iter().map(|&p| transform.eval(p, &mut moments)).collect();
    let wf = MomentumWavefunction { ell: solution.ell, momenta, values, weights };
    let captured = wf.norm();
    if captured < NORM_CAPTURE {
        return Err(Error::MomentumCutoff { captured, p_max: spec.p_max });
    }
    Ok(wf)
}

fn xlnx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// `(radial, angular, full)` split of an information measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measure {
    pub radial: f64,
    pub angular: f64,
    pub full: f64,
}

/// Composite rule on `[−1, 1]` with panel breaks at the zeros of `P_ℓ`,
/// where `P_ℓ² ln P_ℓ²` is not smooth.
fn angular_rule(ell: u32) -> (Vec<f64>, Vec<f64>) {
    let mut breaks = vec![-1.0];
    breaks.extend(gauss_legendre(ell as usize).0);
    breaks.push(1.0);
    let (x, w) = gauss_legendre(64);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for pair in breaks.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(0.5 * (lo + hi) + 0.5 * (hi - lo) * xi);
            weights.push(0.5 * (hi - lo) * wi);
        }
    }
    (nodes, weights)
}

/// `−∫ |Y_ℓ0|² ln |Y_ℓ0|² dΩ`.
pub fn angular_entropy(ell: u32) -> f64 {
    let norm = (2 * ell + 1) as f64 / (4.0 * PI);
    let (x, w) = angular_rule(ell);
    -2.0 * PI * x.iter().zip(&w).map(|(&t, &wt)| wt * xlnx(norm * legendre(ell as usize, t).powi(2))).sum::<f64>()
}

/// `∫ |Y_ℓ0|⁴ dΩ`.
pub fn angular_onicescu(ell: u32) -> f64 {
    let norm = (2 * ell + 1) as f64 / (4.0 * PI);
    let (x, w) = gauss_legendre(2 * ell as usize + 2);
    2.0 * PI * x.iter().zip(&w).map(|(&t, &wt)| wt * (norm * legendre(ell as usize, t).powi(2)).powi(2)).sum::<f64>()
}

/// Samples of a radial density on a quadrature: `(ρ, q² weight)`.
struct RadialDensity {
    rho: Vec<f64>,
    measure: Vec<f64>,
}

impl RadialDensity {
    fn position(solution: &RadialSolution) -> Self {
        let rho = solution.u_values.iter().zip(solution.radii()).map(|(u, r)| (u / r).powi(2)).collect();
        let measure = solution.radii().iter().zip(solution.weights()).map(|(r, w)| w * r * r).collect();
        Self { rho, measure }
    }

    fn momentum(wf: &MomentumWavefunction) -> Self {
        let rho = wf.values.iter().map(|v| v * v).collect();
        let measure = wf.momenta.iter().zip(&wf.weights).map(|(p, w)| w * p * p).collect();
        Self { rho, measure }
    }

    fn entropy(&self) -> f64 {
        -self.rho.iter().zip(&self.measure).map(|(&r, &m)| m * xlnx(r)).sum::<f64>()
    }

    fn onicescu(&self) -> f64 {
        self.rho.iter().zip(&self.measure).map(|(&r, &m)| m * r * r).sum()
    }
}

pub fn shannon_position(solution: &RadialSolution) -> Measure {
    let radial = RadialDensity::position(solution).entropy();
    let angular = angular_entropy(solution.ell);
    Measure { radial, angular, full: radial + angular }
}

pub fn shannon_momentum(wf: &MomentumWavefunction) -> Measure {
    let radial = RadialDensity::momentum(wf).entropy();
    let angular = angular_entropy(wf.ell);
    Measure { radial, angular, full: radial + angular }
}

pub fn onicescu_position(solution: &RadialSolution) -> Measure {
    let radial = RadialDensity::position(solution).onicescu();
    let angular = angular_onicescu(solution.ell);
    Measure { radial, angular, full: radial * angular }
}

pub fn onicescu_momentum(wf: &MomentumWavefunction) -> Measure {
    let radial = RadialDensity::momentum(wf).onicescu();
    let angular = angular_onicescu(wf.ell);
    Measure { radial, angular, full: radial * angular }
}

/// Lower bound on `S_r + S_p` for any three-dimensional density.
pub fn bbm_bound() -> f64 {
    3.0 * (1.0 + PI.ln())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub s_r_full: f64,
    pub s_p_full: f64,
    pub s_total: f64,
    pub e_r_full: f64,
    pub e_p_full: f64,
    pub e_total: f64,
    pub angular_s: f64,
    pub angular_e: f64,
    /// Momentum grid actually used.
    pub momentum_grid: MomentumGridSpec,
}

/// Measures for one solved state, with the momentum grid chosen adaptively unless given.
pub fn report_for(solution: &RadialSolution, momentum: Option<MomentumGridSpec>) -> Result<EntropyReport> {
    let grid = momentum.unwrap_or_else(|| MomentumGridSpec::adaptive(solution));
    let wf = momentum_transform(solution, &grid)?;
    let sr = shannon_position(solution);
    let sp = shannon_momentum(&wf);
    let er = onicescu_position(solution);
    let ep = onicescu_momentum(&wf);
    Ok(EntropyReport {
        s_r_full: sr.full,
        s_p_full: sp.full,
        s_total: sr.full + sp.full,
        e_r_full: er.full,
        e_p_full: ep.full,
        e_total: er.full * ep.full,
        angular_s: sr.angular,
        angular_e: er.angular,
        momentum_grid: grid,
    })
}

pub fn entropy_report(
    geometry: &ConfinementGeometry,
    model: &PotentialModel,
    ell: u32,
    state_index: usize,
    spec: &GridSpec,
    momentum: Option<MomentumGridSpec>,
) -> Result<EntropyReport> {
    let spectrum = solve_radial(geometry, model, ell, state_index + 1, spec)?;
    report_for(spectrum.get(state_index)?, momentum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn ground(geometry: ConfinementGeometry) -> RadialSolution {
        let spec = GridSpec::default();
        solve_radial(&geometry, &PotentialModel::coulomb(1.0), 0, 1, &spec).unwrap().solutions.remove(0)
    }

    #[test]
    fn bessel_values() {
        // closed forms for ℓ = 0..2
        assert_relative_eq!(spherical_bessel_j(1, 1e-6), 1e-6 / 3.0, max_relative = 1e-10);
        assert_relative_eq!(spherical_bessel_j(2, 1e-3), 1e-6 / 15.0, max_relative = 1e-6);
        for &x in &[0.3, 1.0, 2.5, 7.0, 40.0] {
            let (s, c) = f64::sin_cos(x);
            assert_relative_eq!(spherical_bessel_j(0, x), s / x, max_relative = 1e-12);
            assert_relative_eq!(spherical_bessel_j(1, x), s / (x * x) - c / x, max_relative = 1e-8, epsilon = 1e-14);
            let j2 = (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x);
            assert_abs_diff_eq!(spherical_bessel_j(2, x), j2, epsilon = 1e-10);
        }
        assert_eq!(spherical_bessel_j(0, 0.0), 1.0);
        assert_eq!(spherical_bessel_j(3, 0.0), 0.0);
        // continuity across the series/recurrence switch
        for ell in 1..8 {
            let x = ell as f64 + 1.0;
            assert_abs_diff_eq!(spherical_bessel_j(ell, x - 1e-9), spherical_bessel_j(ell, x + 1e-9), epsilon = 1e-8);
        }
    }

    #[test]
    fn angular_parts() {
        assert_relative_eq!(angular_entropy(0), (4.0 * PI).ln(), max_relative = 1e-14);
        assert_relative_eq!(angular_onicescu(0), 1.0 / (4.0 * PI), max_relative = 1e-14);
        // Y_10 = sqrt(3/4π) cos θ: ∫|Y|⁴ dΩ = 9/(16π²)·2π·2/5
        assert_relative_eq!(angular_onicescu(1), 9.0 / (20.0 * PI), max_relative = 1e-13);
        // brute-force midpoint rule for ℓ = 1
        let n = 2_000_000;
        let h = 2.0 / n as f64;
        let brute: f64 = -2.0
            * PI
            * (0..n)
                .map(|i| {
                    let t = -1.0 + (i as f64 + 0.5) * h;
                    h * xlnx(3.0 / (4.0 * PI) * t * t)
                })
                .sum::<f64>();
        assert_relative_eq!(angular_entropy(1), brute, max_relative = 1e-9);
    }

    #[test]
    fn free_ground_state_momentum_density() {
        let s = ground(ConfinementGeometry::free());
        let wf = momentum_transform(&s, &MomentumGridSpec::default()).unwrap();
        for (p, v) in wf.momenta.iter().zip(&wf.values).step_by(37) {
            let exact = 8.0 / (PI * PI * (1.0 + p * p).powi(4));
            // Π(p) = |ψ|²/4π on the sphere for ℓ = 0
            assert_abs_diff_eq!(v * v / (4.0 * PI), exact, epsilon = 1e-6);
        }
        assert_abs_diff_eq!(wf.norm(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn p_state_vanishes_at_zero_momentum() {
        let spec = GridSpec::default();
        let s = solve_radial(&ConfinementGeometry::free(), &PotentialModel::coulomb(1.0), 1, 1, &spec).unwrap();
        let (a, b) = support(&s.solutions[0]);
        let t = BesselTransform::new(&s.solutions[0], a, b);
        let mut m = [0.0; PANEL_ORDER];
        assert_eq!(t.eval(0.0, &mut m), 0.0);
        // linear onset: ψ(p)/p → const
        let slope = t.eval(1e-4, &mut m) / 1e-4;
        assert_relative_eq!(t.eval(2e-4, &mut m) / 2e-4, slope, max_relative = 1e-6);
        // closed-form 2p transform, sign fixed by the eigenvector phase
        let wf = momentum_transform(&s.solutions[0], &MomentumGridSpec::default()).unwrap();
        let phase = wf.values[10].signum();
        for (p, v) in wf.momenta.iter().zip(&wf.values).step_by(23) {
            let exact = 128.0 * p / (3f64.sqrt() * PI.sqrt() * (1.0 + 4.0 * p * p).powi(3));
            assert_abs_diff_eq!(phase * v, exact, epsilon = 1e-7);
        }
        assert_abs_diff_eq!(wf.norm(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn free_ground_state_measures() {
        let r = report_for(&ground(ConfinementGeometry::free()), None).unwrap();
        assert_abs_diff_eq!(r.s_r_full, 3.0 + PI.ln(), epsilon = 1e-8);
        assert_abs_diff_eq!(r.s_p_full, 2.42186234, epsilon = 1e-6);
        assert_abs_diff_eq!(r.e_r_full, 0.5 / (4.0 * PI), epsilon = 1e-9);
        assert_abs_diff_eq!(r.e_p_full, 0.20897494, epsilon = 1e-6);
        assert_abs_diff_eq!(r.e_total, 0.00831484, epsilon = 1e-7);
        assert!(r.s_total >= bbm_bound());
    }

    #[test]
    fn truncated_momentum_grid_is_rejected() {
        let s = ground(ConfinementGeometry::cavity(0.5).unwrap());
        let err = momentum_transform(&s, &MomentumGridSpec { p_max: 5.0, n_points: 64 });
        assert!(matches!(err, Err(Error::MomentumCutoff { .. })));
    }

    #[test]
    fn left_confined_position_entropy() {
        // independent Whittaker-function quadrature at 30 digits
        for (a, exact) in [(1.0, 7.150655469204), (5.0, 9.842026695934)] {
            let s = ground(ConfinementGeometry::left(a).unwrap());
            assert_abs_diff_eq!(shannon_position(&s).full, exact, epsilon = 1e-7);
        }
    }

    // direct Simpson sine transform of the interpolated u for ℓ = 0
    fn brute_momentum_onicescu(s: &RadialSolution, b: f64, p_max: f64, np: usize) -> f64 {
        let a = s.geometry().r_inner();
        let nr = 2000;
        let h = (b - a) / nr as f64;
        let us: Vec<f64> = (0..=nr).map(|i| s.u_at(a + i as f64 * h)).collect();
        let dp = p_max / np as f64;
        let mut ep = 0.0;
        for j in 1..=np {
            let p = j as f64 * dp;
            let mut acc = 0.0;
            for (i, u) in us.iter().enumerate() {
                let c = if i == 0 || i == nr { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                acc += c * u * (p * (a + i as f64 * h)).sin();
            }
            let rho = 2.0 / PI * (acc * h / 3.0 / p).powi(2) / (4.0 * PI);
            ep += dp * 4.0 * PI * p * p * rho * rho;
        }
        ep
    }

    #[test]
    fn thin_shell_momentum_matches_direct_transform() {
        let s = ground(ConfinementGeometry::shell(4.5, 5.0).unwrap());
        let r = report_for(&s, None).unwrap();
        let brute = brute_momentum_onicescu(&s, 5.0, 400.0, 20_000);
        assert_relative_eq!(r.e_p_full, brute, max_relative = 1e-6);
        assert!(r.s_total >= bbm_bound());
    }

    #[test]
    fn momentum_cutoff_doubling_is_stable() {
        for g in [ConfinementGeometry::cavity(1.0).unwrap(), ConfinementGeometry::shell(1.8, 2.0).unwrap(), ConfinementGeometry::free()] {
            let s = ground(g);
            let base = MomentumGridSpec::adaptive(&s);
            let a = report_for(&s, Some(base)).unwrap();
            let b = report_for(&s, Some(MomentumGridSpec { p_max: 2.0 * base.p_max, n_points: 2 * base.n_points })).unwrap();
            assert!((a.s_p_full - b.s_p_full).abs() < 1e-6, "{g}: {} vs {}", a.s_p_full, b.s_p_full);
        }
    }

    #[test]
    fn higher_ell_transform_matches_direct_rule() {
        // the oscillatory split against plain quadrature with exact j_ℓ
        let spec = GridSpec::default();
        for ell in 1..=3 {
            let s = solve_radial(&ConfinementGeometry::shell(0.5, 3.0).unwrap(), &PotentialModel::coulomb(1.0), ell, 1, &spec)
                .unwrap()
                .solutions
                .remove(0);
            let t = BesselTransform::new(&s, 0.5, 3.0);
            let (nodes, weights) = panel_rule(0.5, 3.0, 400);
            let mut m = [0.0; PANEL_ORDER];
            for &p in &[0.7, 3.0, 17.0, 55.0, 140.0] {
                let direct: f64 = (2.0 / PI).sqrt()
                    * nodes.iter().zip(&weights).map(|(&r, &w)| w * s.u_at(r) * r * spherical_bessel_j(ell, p * r)).sum::<f64>();
                assert_abs_diff_eq!(t.eval(p, &mut m), direct, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn bessel_array_matches_single_orders() {
        let mut out = [0.0; PANEL_ORDER];
        for &x in &[0.0, 0.01, 0.9, 5.5, 15.5, 16.5, 60.0] {
            spherical_bessel_all(x, &mut out);
            for (n, v) in out.iter().enumerate() {
                assert_abs_diff_eq!(*v, spherical_bessel_j(n as u32, x), epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn cavity_position_entropy() {
        let r = report_for(&ground(ConfinementGeometry::cavity(1.0).unwrap()), None).unwrap();
        assert_abs_diff_eq!(r.s_r_full, 0.52903053, epsilon = 1e-5);
        assert!(r.s_total >= bbm_bound());
    }
}
