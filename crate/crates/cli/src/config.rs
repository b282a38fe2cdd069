//! Flat `key=value` run configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use shellconf_core::{ConfinementGeometry, GridSpec, OuterRadius, PotentialKind, PotentialModel};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Atlas,
    Transitions,
    Polarizability,
    Herzfeld,
    Entropy,
    Sweep,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Solve,
        Command::Atlas,
        Command::Transitions,
        Command::Polarizability,
        Command::Herzfeld,
        Command::Entropy,
        Command::Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Atlas => "atlas",
            Command::Transitions => "transitions",
            Command::Polarizability => "polarizability",
            Command::Herzfeld => "herzfeld",
            Command::Entropy => "entropy",
            Command::Sweep => "sweep",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CliError> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown command '{s}'; expected one of {}", command_names())))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn command_names() -> String {
    Command::ALL.map(|c| c.name()).join(", ")
}

/// Every recognised key with its default and a one-line description.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("potential.kind", "coulomb", "coulomb | debye | expcos"),
    ("potential.z", "1", "nuclear charge"),
    ("potential.lambda", "0", "screening parameter (1/bohr)"),
    ("geometry.r_inner", "0", "inner wall radius (bohr)"),
    ("geometry.r_outer", "inf", "outer wall radius (bohr), or inf / unbounded"),
    ("geometry.list", "", "semicolon-separated r_inner:r_outer pairs; replaces the single geometry"),
    ("state.labels", "1s", "comma-separated state labels such as 1s,2p (node count + l + 1)"),
    ("numerics.n_points", "200", "interior collocation points"),
    ("numerics.map_scale", "10", "mapping length for unbounded domains (bohr)"),
    ("numerics.truncation", "200", "effective infinity for unbounded domains (bohr)"),
    ("numerics.p_max", "auto", "momentum cutoff (1/bohr), or auto"),
    ("numerics.n_momentum", "auto", "momentum points, or auto"),
    ("transition.k", "1", "multipole order 1..4"),
    ("transition.n_final", "3", "lowest final states listed per allowed channel"),
    ("response.k", "1", "multipole order 1..4"),
    ("atlas.n", "4", "free level n, or a comma-separated list"),
    ("atlas.ells", "all", "all, or a comma-separated list of l"),
    ("atlas.alpha", "true", "add dipole polarizability columns"),
    ("atlas.entropy", "true", "add position Shannon entropy column"),
    ("herzfeld.mode", "check", "check (one geometry per row) | threshold (R_m per outer radius)"),
    ("herzfeld.r_outer_list", "1,2,3,4,5,6,7,8,9,10", "outer radii for threshold mode"),
    ("sweep.variable", "r_inner", "r_inner | r_outer | fixed_gap"),
    ("sweep.start", "0", "first value of the swept radius"),
    ("sweep.stop", "1", "last value of the swept radius"),
    ("sweep.step", "0.1", "increment of the swept radius"),
    ("sweep.fixed_gap", "1", "r_outer - r_inner for fixed_gap sweeps"),
    ("sweep.quantities", "energy", "comma list of energy, alpha, s_r, s_p, s_t, e_r, e_p, e_t"),
    ("output.format", "csv", "csv"),
];

/// `2s` → `(ℓ = 0, state_index = 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateLabel {
    pub ell: u32,
    pub state_index: usize,
}

impl StateLabel {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        let bad = || CliError::Config(format!("state.labels: cannot parse '{s}' (expected e.g. 1s, 3d)"));
        let split = s.find(|c: char| !c.is_ascii_digit()).ok_or_else(bad)?;
        let (num, letter) = s.split_at(split);
        let n: u32 = num.parse().map_err(|_| bad())?;
        let ell = match letter {
            "s" => 0,
            "p" => 1,
            "d" => 2,
            "f" => 3,
            "g" => 4,
            "h" => 5,
            _ => return Err(bad()),
        };
        if n <= ell {
            return Err(CliError::Config(format!("state.labels: '{s}' needs n > l")));
        }
        Ok(Self { ell, state_index: (n - ell - 1) as usize })
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.state_index as u32 + self.ell + 1, shellconf_core::transitions::ell_letter(self.ell))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    RInner,
    ROuter,
    FixedGap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub fixed_gap: f64,
    pub quantities: Vec<String>,
}

pub const SWEEP_QUANTITIES: [&str; 8] = ["energy", "alpha", "s_r", "s_p", "s_t", "e_r", "e_p", "e_t"];

impl SweepAxis {
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HerzfeldMode {
    Check,
    Threshold,
}

/// Fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub model: PotentialModel,
    pub geometries: Vec<ConfinementGeometry>,
    pub states: Vec<StateLabel>,
    pub grid: GridSpec,
    pub p_max: Option<f64>,
    pub n_momentum: Option<usize>,
    pub transition_k: u32,
    pub n_final: usize,
    pub response_k: u32,
    pub atlas_n: Vec<u32>,
    pub atlas_ells: Option<Vec<u32>>,
    pub atlas_alpha: bool,
    pub atlas_entropy: bool,
    pub herzfeld_mode: HerzfeldMode,
    pub herzfeld_r_outer: Vec<f64>,
    pub sweep: SweepAxis,
    /// Effective key/value pairs after defaults and overrides, for provenance.
    pub echo: BTreeMap<String, String>,
}

/// Parses `key=value` lines with `#` comments.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key=value, got '{line}'", lineno + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn valid_keys() -> String {
    KEYS.iter().map(|k| k.0).collect::<Vec<_>>().join(", ")
}

/// Merges defaults, the optional config file and flag overrides, in that order.
pub fn parse_config(command: Command, file: Option<&Path>, overrides: &[(String, String)]) -> Result<RunConfig, CliError> {
    let mut map: BTreeMap<String, String> = KEYS.iter().map(|(k, d, _)| (k.to_string(), d.to_string())).collect();
    let mut pairs = Vec::new();
    if let Some(path) = file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        pairs.extend(parse_pairs(&text)?);
    }
    pairs.extend(overrides.iter().cloned());
    for (k, v) in pairs {
        if k == "command" {
            if Command::parse(&v)? != command {
                return Err(CliError::Config(format!("config file is for command '{v}', not '{command}'")));
            }
            continue;
        }
        match map.get_mut(&k) {
            Some(slot) => *slot = v,
            None => return Err(CliError::Config(format!("unknown key '{k}'; valid keys: {}", valid_keys()))),
        }
    }
    build(command, map)
}

fn num<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<T, CliError> {
    let v = &map[key];
    v.parse().map_err(|_| CliError::Config(format!("{key}: cannot parse '{v}'")))
}

fn finite(map: &BTreeMap<String, String>, key: &str) -> Result<f64, CliError> {
    let v: f64 = num(map, key)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{key}: must be finite")))
    }
}

fn list<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Vec<T>, CliError> {
    map[key]
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| CliError::Config(format!("{key}: cannot parse '{s}'"))))
        .collect()
}

fn boolean(map: &BTreeMap<String, String>, key: &str) -> Result<bool, CliError> {
    match map[key].as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        v => Err(CliError::Config(format!("{key}: expected true/false, got '{v}'"))),
    }
}

fn outer(key: &str, v: &str) -> Result<OuterRadius, CliError> {
    match v.trim() {
        "inf" | "unbounded" | "infinity" => Ok(OuterRadius::Unbounded),
        s => s
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(OuterRadius::Finite)
            .ok_or_else(|| CliError::Config(format!("{key}: cannot parse '{s}'"))),
    }
}

fn geometry(key: &str, inner: f64, outer: OuterRadius) -> Result<ConfinementGeometry, CliError> {
    ConfinementGeometry::new(inner, outer).map_err(|e| CliError::Config(format!("{key}: {e}")))
}

fn auto<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError> {
    if map[key] == "auto" {
        Ok(None)
    } else {
        num(map, key).map(Some)
    }
}

fn build(command: Command, map: BTreeMap<String, String>) -> Result<RunConfig, CliError> {
    let kind = match map["potential.kind"].as_str() {
        "coulomb" => PotentialKind::Coulomb,
        "debye" => PotentialKind::Debye,
        "expcos" => PotentialKind::ExpCosine,
        v => return Err(CliError::Config(format!("potential.kind: expected coulomb, debye or expcos, got '{v}'"))),
    };
    let model = PotentialModel::new(kind, finite(&map, "potential.z")?, finite(&map, "potential.lambda")?)
        .map_err(|e| CliError::Config(format!("potential: {e}")))?;

    let geometries = if map["geometry.list"].trim().is_empty() {
        let inner = finite(&map, "geometry.r_inner")?;
        vec![geometry("geometry.r_inner", inner, outer("geometry.r_outer", &map["geometry.r_outer"])?)?]
    } else {
        map["geometry.list"]
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|pair| {
                let (a, b) = pair
                    .split_once(':')
                    .ok_or_else(|| CliError::Config(format!("geometry.list: expected r_inner:r_outer, got '{pair}'")))?;
                let a: f64 = a
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Config(format!("geometry.list: cannot parse '{a}'")))?;
                geometry("geometry.list", a, outer("geometry.list", b)?)
            })
            .collect::<Result<_, _>>()?
    };

    let states = map["state.labels"].split(',').filter(|s| !s.trim().is_empty()).map(StateLabel::parse).collect::<Result<Vec<_>, _>>()?;
    if states.is_empty() {
        return Err(CliError::Config("state.labels: at least one state is required".into()));
    }

    let grid = GridSpec {
        n_points: num(&map, "numerics.n_points")?,
        map_scale: finite(&map, "numerics.map_scale")?,
        r_max_truncation: finite(&map, "numerics.truncation")?,
    };
    grid.validate().map_err(|e| CliError::Config(format!("numerics: {e}")))?;
    let p_max: Option<f64> = auto(&map, "numerics.p_max")?;
    let n_momentum: Option<usize> = auto(&map, "numerics.n_momentum")?;
    if p_max.is_some_and(|p| !(p > 0.0 && p.is_finite())) {
        return Err(CliError::Config("numerics.p_max: must be positive".into()));
    }

    let order = |key: &str| -> Result<u32, CliError> {
        let k: u32 = num(&map, key)?;
        if (1..=4).contains(&k) {
            Ok(k)
        } else {
            Err(CliError::Config(format!("{key}: must be 1..4, got {k}")))
        }
    };
    let transition_k = order("transition.k")?;
    let response_k = order("response.k")?;
    let n_final: usize = num(&map, "transition.n_final")?;

    let atlas_n: Vec<u32> = list(&map, "atlas.n")?;
    if atlas_n.is_empty() || atlas_n.contains(&0) {
        return Err(CliError::Config("atlas.n: levels must be >= 1".into()));
    }
    let atlas_ells = if map["atlas.ells"] == "all" { None } else { Some(list(&map, "atlas.ells")?) };

    let herzfeld_mode = match map["herzfeld.mode"].as_str() {
        "check" => HerzfeldMode::Check,
        "threshold" => HerzfeldMode::Threshold,
        v => return Err(CliError::Config(format!("herzfeld.mode: expected check or threshold, got '{v}'"))),
    };
    let herzfeld_r_outer: Vec<f64> = list(&map, "herzfeld.r_outer_list")?;
    if herzfeld_r_outer.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(CliError::Config("herzfeld.r_outer_list: radii must be positive".into()));
    }

    let sweep = SweepAxis {
        variable: match map["sweep.variable"].as_str() {
            "r_inner" => SweepVariable::RInner,
            "r_outer" => SweepVariable::ROuter,
            "fixed_gap" => SweepVariable::FixedGap,
            v => return Err(CliError::Config(format!("sweep.variable: expected r_inner, r_outer or fixed_gap, got '{v}'"))),
        },
        start: finite(&map, "sweep.start")?,
        stop: finite(&map, "sweep.stop")?,
        step: finite(&map, "sweep.step")?,
        fixed_gap: finite(&map, "sweep.fixed_gap")?,
        quantities: map["sweep.quantities"].split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
    };
    if command == Command::Sweep {
        validate_sweep(&sweep, &geometries)?;
    }
    if map["output.format"] != "csv" {
        return Err(CliError::Config(format!("output.format: only csv is supported, got '{}'", map["output.format"])));
    }

    Ok(RunConfig {
        command,
        model,
        geometries,
        states,
        grid,
        p_max,
        n_momentum,
        transition_k,
        n_final,
        response_k,
        atlas_n,
        atlas_ells,
        atlas_alpha: boolean(&map, "atlas.alpha")?,
        atlas_entropy: boolean(&map, "atlas.entropy")?,
        herzfeld_mode,
        herzfeld_r_outer,
        sweep,
        echo: map,
    })
}

fn validate_sweep(sweep: &SweepAxis, geometries: &[ConfinementGeometry]) -> Result<(), CliError> {
    if sweep.start > sweep.stop {
        return Err(CliError::Config(format!("sweep.start ({}) must not exceed sweep.stop ({})", sweep.start, sweep.stop)));
    }
    if sweep.step.is_nan() || sweep.step <= 0.0 {
        return Err(CliError::Config("sweep.step: must be positive".into()));
    }
    if let Some(q) = sweep.quantities.iter().find(|q| !SWEEP_QUANTITIES.contains(&q.as_str())) {
        return Err(CliError::Config(format!("sweep.quantities: unknown '{q}'; valid: {}", SWEEP_QUANTITIES.join(", "))));
    }
    let base = geometries[0];
    for x in sweep.values() {
        sweep_geometry(sweep, &base, x)?;
    }
    Ok(())
}

/// Geometry at sweep coordinate `x`; the other wall comes from `base`.
pub fn sweep_geometry(sweep: &SweepAxis, base: &ConfinementGeometry, x: f64) -> Result<ConfinementGeometry, CliError> {
    let g = match sweep.variable {
        SweepVariable::RInner => ConfinementGeometry::new(x, base.r_outer()),
        SweepVariable::ROuter => ConfinementGeometry::new(base.r_inner(), OuterRadius::Finite(x)),
        SweepVariable::FixedGap => ConfinementGeometry::new(x, OuterRadius::Finite(x + sweep.fixed_gap)),
    };
    g.map_err(|e| CliError::Config(format!("sweep at {x}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kv(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn unbounded_outer_radius() {
        let c = parse_config(Command::Solve, None, &kv(&[("geometry.r_outer", "inf")])).unwrap();
        assert!(c.geometries[0].r_outer().is_unbounded());
        let c = parse_config(Command::Solve, None, &kv(&[("geometry.r_outer", "unbounded")])).unwrap();
        assert!(c.geometries[0].r_outer().is_unbounded());
    }

    #[test]
    fn documented_defaults() {
        let c = parse_config(Command::Solve, None, &[]).unwrap();
        assert_eq!(c.grid.n_points, 200);
        assert_eq!(c.states, vec![StateLabel { ell: 0, state_index: 0 }]);
        assert_eq!(c.p_max, None);
    }

    #[test]
    fn inverted_sweep_is_rejected() {
        let err = parse_config(Command::Sweep, None, &kv(&[("sweep.start", "2"), ("sweep.stop", "1")]));
        assert!(matches!(err, Err(CliError::Config(m)) if m.contains("sweep.start")));
    }

    #[test]
    fn sweep_respects_geometry_at_every_step() {
        let err = parse_config(
            Command::Sweep,
            None,
            &kv(&[("geometry.r_outer", "2"), ("sweep.start", "0"), ("sweep.stop", "3"), ("sweep.step", "0.5")]),
        );
        assert!(matches!(err, Err(CliError::Config(m)) if m.contains("sweep at")));
    }

    #[test]
    fn unknown_key_lists_valid_keys() {
        let err = parse_config(Command::Solve, None, &kv(&[("geometry.radius", "1")]));
        assert!(matches!(err, Err(CliError::Config(m)) if m.contains("geometry.r_outer")));
    }

    #[test]
    fn invalid_geometry_names_field() {
        let err = parse_config(Command::Solve, None, &kv(&[("geometry.r_inner", "3"), ("geometry.r_outer", "2")]));
        assert!(matches!(err, Err(CliError::Config(m)) if m.starts_with("geometry.r_inner")));
    }

    #[test]
    fn file_then_overrides() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# comment\ncommand=entropy\ngeometry.r_outer = 5 # trailing\nstate.labels=1s,2s\n").unwrap();
        let c = parse_config(Command::Entropy, Some(&path), &kv(&[("geometry.r_outer", "6")])).unwrap();
        assert_eq!(c.geometries[0].r_outer().finite(), Some(6.0));
        assert_eq!(c.states.len(), 2);
        assert!(parse_config(Command::Solve, Some(&path), &[]).is_err());
    }

    #[test]
    fn labels_and_lists() {
        assert_eq!(StateLabel::parse("3d").unwrap(), StateLabel { ell: 2, state_index: 0 });
        assert_eq!(StateLabel::parse("4s").unwrap().to_string(), "4s");
        assert!(StateLabel::parse("2d").is_err());
        assert!(StateLabel::parse("s").is_err());
        let c = parse_config(Command::Solve, None, &kv(&[("geometry.list", "0:1; 1:2 ;5:inf")])).unwrap();
        assert_eq!(c.geometries.len(), 3);
        assert!(c.geometries[2].r_outer().is_unbounded());
    }
}
