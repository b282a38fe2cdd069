//! Confinement geometry and the central potentials acting inside it.

use std::fmt;

use crate::error::{Error, Result};

/// Outer wall of the confining shell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OuterRadius {
    Finite(f64),
    Unbounded,
}

impl OuterRadius {
    pub fn finite(self) -> Option<f64> {
        match self {
            OuterRadius::Finite(r) => Some(r),
            OuterRadius::Unbounded => None,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, OuterRadius::Unbounded)
    }
}

impl fmt::Display for OuterRadius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OuterRadius::Finite(r) => write!(f, "{r}"),
            OuterRadius::Unbounded => f.write_str("inf"),
        }
    }
}

/// Impenetrable walls at `r_inner` and `r_outer` (bohr).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfinementGeometry {
    r_inner: f64,
    r_outer: OuterRadius,
}

impl ConfinementGeometry {
    pub fn new(r_inner: f64, r_outer: OuterRadius) -> Result<Self> {
        if !r_inner.is_finite() || r_inner < 0.0 {
            return Err(Error::Geometry(format!("r_inner must be finite and >= 0, got {r_inner}")));
        }
        if let OuterRadius::Finite(b) = r_outer {
            if !b.is_finite() || b <= r_inner {
                return Err(Error::Geometry(format!(
                    "r_outer ({b}) must be finite and exceed r_inner ({r_inner})"
                )));
            }
        }
        Ok(Self { r_inner, r_outer })
    }

    /// Free atom: no walls.
    pub fn free() -> Self {
        Self { r_inner: 0.0, r_outer: OuterRadius::Unbounded }
    }

    /// Spherical cavity of radius `r_c`.
    pub fn cavity(r_c: f64) -> Result<Self> {
        Self::new(0.0, OuterRadius::Finite(r_c))
    }

    pub fn shell(r_inner: f64, r_outer: f64) -> Result<Self> {
        Self::new(r_inner, OuterRadius::Finite(r_outer))
    }

    /// Inner wall only.
    pub fn left(r_inner: f64) -> Result<Self> {
        Self::new(r_inner, OuterRadius::Unbounded)
    }

    pub fn r_inner(&self) -> f64 {
        self.r_inner
    }

    pub fn r_outer(&self) -> OuterRadius {
        self.r_outer
    }

    /// Shell volume parameter `r_outer³ − r_inner³`, undefined without an outer wall.
    pub fn volume_param(&self) -> Option<f64> {
        self.r_outer.finite().map(|b| b.powi(3) - self.r_inner.powi(3))
    }

    pub fn regime(&self) -> Regime {
        classify(self)
    }
}

impl fmt::Display for ConfinementGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.r_inner, self.r_outer)
    }
}

/// The four boundary regimes spanned by the two walls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    /// No walls.
    Fha,
    /// Outer wall only.
    Cha,
    /// Both walls.
    Scha,
    /// Inner wall only.
    Lcha,
}

impl Regime {
    pub const ALL: [Regime; 4] = [Regime::Fha, Regime::Cha, Regime::Scha, Regime::Lcha];

    pub fn label(self) -> &'static str {
        match self {
            Regime::Fha => "FHA",
            Regime::Cha => "CHA",
            Regime::Scha => "SCHA",
            Regime::Lcha => "LCHA",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn classify(geometry: &ConfinementGeometry) -> Regime {
    match (geometry.r_inner > 0.0, geometry.r_outer.is_unbounded()) {
        (false, true) => Regime::Fha,
        (false, false) => Regime::Cha,
        (true, false) => Regime::Scha,
        (true, true) => Regime::Lcha,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PotentialKind {
    Coulomb,
    /// Debye-screened Coulomb (weakly coupled plasma).
    Debye,
    /// Exponential-cosine-screened Coulomb.
    ExpCosine,
}

impl PotentialKind {
    pub fn label(self) -> &'static str {
        match self {
            PotentialKind::Coulomb => "coulomb",
            PotentialKind::Debye => "debye",
            PotentialKind::ExpCosine => "expcos",
        }
    }
}

/// Attractive central potential with nuclear charge `z` and screening `lambda` (1/bohr).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialModel {
    kind: PotentialKind,
    z: f64,
    lambda: f64,
}

impl PotentialModel {
    pub fn new(kind: PotentialKind, z: f64, lambda: f64) -> Result<Self> {
        if !(z.is_finite() && z > 0.0) {
            return Err(Error::Invalid(format!("nuclear charge must be > 0, got {z}")));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::Invalid(format!("screening parameter must be >= 0, got {lambda}")));
        }
        Ok(Self { kind, z, lambda })
    }

    pub fn coulomb(z: f64) -> Self {
        Self { kind: PotentialKind::Coulomb, z, lambda: 0.0 }
    }

    pub fn debye(z: f64, lambda: f64) -> Self {
        Self { kind: PotentialKind::Debye, z, lambda }
    }

    pub fn exp_cosine(z: f64, lambda: f64) -> Self {
        Self { kind: PotentialKind::ExpCosine, z, lambda }
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Potential energy (hartree) at `r` > 0.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if r.is_nan() || r <= 0.0 {
            return Err(Error::Domain(r));
        }
        Ok(self.value(r))
    }

    // Unchecked form for the solver, whose grids never touch r = 0.
    pub(crate) fn value(&self, r: f64) -> f64 {
        let coulomb = -self.z / r;
        match self.kind {
            PotentialKind::Coulomb => coulomb,
            PotentialKind::Debye => coulomb * (-self.lambda * r).exp(),
            PotentialKind::ExpCosine => coulomb * (-self.lambda * r).exp() * (self.lambda * r).cos(),
        }
    }
}

impl fmt::Display for PotentialModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PotentialKind::Coulomb => write!(f, "coulomb(Z={})", self.z),
            kind => write!(f, "{}(Z={}, lambda={})", kind.label(), self.z, self.lambda),
        }
    }
}
