//! Command dispatch.

use shellconf_core::degeneracy::{enumerate_atlas, AtlasOptions};
use shellconf_core::information::{bbm_bound, report_for, MomentumGridSpec};
use shellconf_core::metallicity::{find_rm, herzfeld_check, Threshold};
use shellconf_core::parallel::par_map;
use shellconf_core::response::{channel_spectra, dipole_sublevel, polarizability, polarizability_from_spectra};
use shellconf_core::transitions::{ell_letter, oscillator_strength, selection_final_ells};
use shellconf_core::{solve_radial, ConfinementGeometry, RadialSolution};

use crate::config::{sweep_geometry, Command, HerzfeldMode, RunConfig, StateLabel};
use crate::table::{Cell, ResultTable};
use crate::CliError;

/// Runs the configured command and returns its table, without provenance.
pub fn run(config: &RunConfig) -> Result<ResultTable, CliError> {
    match config.command {
        Command::Solve => solve(config),
        Command::Atlas => atlas(config),
        Command::Transitions => transitions(config),
        Command::Polarizability => polarizabilities(config),
        Command::Herzfeld => herzfeld(config),
        Command::Entropy => entropy(config),
        Command::Sweep => sweep(config),
    }
}

/// Every (geometry, state) pair in input order.
fn jobs(config: &RunConfig) -> Vec<(ConfinementGeometry, StateLabel)> {
    config.geometries.iter().flat_map(|g| config.states.iter().map(move |s| (*g, *s))).collect()
}

fn collect<T>(results: Vec<Result<T, CliError>>) -> Result<Vec<T>, CliError> {
    results.into_iter().collect()
}

fn state_of(config: &RunConfig, geometry: &ConfinementGeometry, state: StateLabel) -> Result<RadialSolution, CliError> {
    let mut spectrum = solve_radial(geometry, &config.model, state.ell, state.state_index + 1, &config.grid)?;
    Ok(spectrum.solutions.swap_remove(state.state_index))
}

fn walls(geometry: &ConfinementGeometry) -> [Cell; 2] {
    let outer = match geometry.r_outer().finite() {
        Some(r) => r.into(),
        None => "inf".into(),
    };
    [geometry.r_inner().into(), outer]
}

fn momentum_override(config: &RunConfig, solution: &RadialSolution) -> Option<MomentumGridSpec> {
    if config.p_max.is_none() && config.n_momentum.is_none() {
        return None;
    }
    let adaptive = MomentumGridSpec::adaptive(solution);
    Some(MomentumGridSpec {
        p_max: config.p_max.unwrap_or(adaptive.p_max),
        n_points: config.n_momentum.unwrap_or(adaptive.n_points),
    })
}

fn solve(config: &RunConfig) -> Result<ResultTable, CliError> {
    let mut table = ResultTable::new(&["r_inner", "r_outer", "regime", "state", "ell", "state_index", "energy", "nodes"]);
    let rows = collect(par_map(&jobs(config), |(g, s)| {
        let sol = state_of(config, g, *s)?;
        Ok((*g, *s, sol.energy, sol.node_count()))
    }))?;
    for (g, s, energy, nodes) in rows {
        let [a, b] = walls(&g);
        table.push(vec![a, b, g.regime().label().into(), s.to_string().into(), s.ell.into(), s.state_index.into(), energy.into(), nodes.into()]);
    }
    Ok(table)
}

fn atlas(config: &RunConfig) -> Result<ResultTable, CliError> {
    let mut table = ResultTable::new(&[
        "n", "serial", "state", "ell", "state_index", "r_inner", "r_outer", "regime", "energy", "parent", "alpha", "alpha_stretched", "s_r",
    ]);
    let options = AtlasOptions {
        spec: config.grid,
        ells: config.atlas_ells.clone(),
        with_alpha: config.atlas_alpha,
        with_entropy: config.atlas_entropy,
    };
    for &n in &config.atlas_n {
        for row in enumerate_atlas(n, &config.model, &options)? {
            let [a, b] = walls(&row.geometry);
            table.push(vec![
                n.into(),
                row.serial.clone().into(),
                row.label().into(),
                row.ell.into(),
                row.state_index.into(),
                a,
                b,
                row.regime.label().into(),
                row.energy.into(),
                row.parent.to_string().into(),
                row.alpha.into(),
                row.alpha_stretched.into(),
                row.s_r.into(),
            ]);
        }
    }
    Ok(table)
}

fn transitions(config: &RunConfig) -> Result<ResultTable, CliError> {
    let k = config.transition_k;
    let mut table = ResultTable::new(&["r_inner", "r_outer", "k", "initial", "final", "delta_e", "radial_element", "f"]);
    let blocks = collect(par_map(&jobs(config), |(g, s)| {
        let spectra = channel_spectra(k, s.ell, g, &config.model, &config.grid)?;
        let own = spectra.iter().find(|sp| sp.ell == s.ell).expect("initial channel is solved");
        let initial = own.get(s.state_index)?;
        let mut rows = Vec::new();
        for ell_p in selection_final_ells(k, s.ell) {
            let channel = spectra.iter().find(|sp| sp.ell == ell_p).expect("every allowed channel is solved");
            for fin in channel.solutions.iter().take(config.n_final) {
                let rec = oscillator_strength(k, initial, fin)?;
                let label = format!("{}{}", fin.state_index as u32 + ell_p + 1, ell_letter(ell_p));
                rows.push((label, rec.delta_e, rec.radial_element, rec.f_value));
            }
        }
        Ok((*g, *s, rows))
    }))?;
    for (g, s, rows) in blocks {
        for (fin, de, element, f) in rows {
            let [a, b] = walls(&g);
            table.push(vec![a, b, k.into(), s.to_string().into(), fin.into(), de.into(), element.into(), f.into()]);
        }
    }
    Ok(table)
}

fn polarizabilities(config: &RunConfig) -> Result<ResultTable, CliError> {
    let k = config.response_k;
    let mut table = ResultTable::new(&[
        "r_inner", "r_outer", "regime", "state", "k", "alpha", "alpha_stretched", "negative", "channels", "pseudostates", "excluded", "truncation",
    ]);
    let rows = collect(par_map(&jobs(config), |(g, s)| {
        let resp = polarizability(k, s.ell, s.state_index, g, &config.model, &config.grid)?;
        let stretched = if k == 1 { Some(dipole_sublevel(&resp, s.ell as i32)?) } else { None };
        Ok((*g, *s, resp, stretched))
    }))?;
    for (g, s, resp, stretched) in rows {
        let channels = resp
            .per_channel
            .iter()
            .map(|(l, a)| format!("{}:{}", ell_letter(*l), crate::table::format_float(*a)))
            .collect::<Vec<_>>()
            .join(" ");
        let [a, b] = walls(&g);
        table.push(vec![
            a,
            b,
            g.regime().label().into(),
            s.to_string().into(),
            k.into(),
            resp.total.into(),
            stretched.into(),
            (resp.total < 0.0).into(),
            channels.into(),
            resp.n_pseudostates_used.into(),
            resp.n_excluded.into(),
            resp.truncation_radius.into(),
        ]);
    }
    Ok(table)
}

fn herzfeld(config: &RunConfig) -> Result<ResultTable, CliError> {
    match config.herzfeld_mode {
        HerzfeldMode::Check => {
            let mut table = ResultTable::new(&["r_inner", "r_outer", "state", "volume", "alpha1", "metallic"]);
            let rows = collect(par_map(&jobs(config), |(g, s)| {
                Ok((*s, herzfeld_check(g, s.ell, s.state_index, &config.model, &config.grid)?))
            }))?;
            for (s, p) in rows {
                let [a, b] = walls(&p.geometry);
                table.push(vec![a, b, s.to_string().into(), p.volume_param.into(), p.alpha1.into(), p.metallic.into()]);
            }
            Ok(table)
        }
        HerzfeldMode::Threshold => {
            if let Some(s) = config.states.iter().find(|s| s.ell != 0) {
                return Err(CliError::Config(format!("herzfeld threshold mode supports s states only, got {s}")));
            }
            let items: Vec<(f64, StateLabel)> =
                config.herzfeld_r_outer.iter().flat_map(|r| config.states.iter().map(move |s| (*r, *s))).collect();
            let mut table = ResultTable::new(&["r_outer", "state", "outcome", "r_m"]);
            let rows = collect(par_map(&items, |(r, s)| Ok((*r, *s, find_rm(*r, s.state_index, &config.model, &config.grid)?))))?;
            for (r, s, t) in rows {
                let outcome = match t {
                    Threshold::Root(_) => "root",
                    Threshold::AlwaysMetallic => "always_metallic",
                    Threshold::NeverMetallic => "never_metallic",
                };
                table.push(vec![r.into(), s.to_string().into(), outcome.into(), t.root().into()]);
            }
            Ok(table)
        }
    }
}

fn entropy(config: &RunConfig) -> Result<ResultTable, CliError> {
    let mut table = ResultTable::new(&[
        "r_inner", "r_outer", "regime", "state", "s_r", "s_p", "s_t", "e_r", "e_p", "e_t", "bbm_satisfied", "p_max", "n_momentum",
    ]);
    let rows = collect(par_map(&jobs(config), |(g, s)| {
        let sol = state_of(config, g, *s)?;
        Ok((*g, *s, report_for(&sol, momentum_override(config, &sol))?))
    }))?;
    let bound = bbm_bound();
    for (g, s, r) in rows {
        let [a, b] = walls(&g);
        table.push(vec![
            a,
            b,
            g.regime().label().into(),
            s.to_string().into(),
            r.s_r_full.into(),
            r.s_p_full.into(),
            r.s_total.into(),
            r.e_r_full.into(),
            r.e_p_full.into(),
            r.e_total.into(),
            (r.s_total >= bound).into(),
            r.momentum_grid.p_max.into(),
            r.momentum_grid.n_points.into(),
        ]);
    }
    Ok(table)
}

fn sweep(config: &RunConfig) -> Result<ResultTable, CliError> {
    let axis = &config.sweep;
    let base = config.geometries[0];
    let mut header = vec!["r_inner", "r_outer", "state"];
    header.extend(axis.quantities.iter().map(String::as_str));
    let mut table = ResultTable::new(&header);
    let items: Vec<(f64, StateLabel)> =
        axis.values().into_iter().flat_map(|x| config.states.iter().map(move |s| (x, *s))).collect();
    let wants = |q: &str| axis.quantities.iter().any(|x| x == q);
    let needs_report = ["s_r", "s_p", "s_t", "e_r", "e_p", "e_t"].iter().any(|q| wants(q));
    let rows = collect(par_map(&items, |(x, s)| {
        let g = sweep_geometry(axis, &base, *x)?;
        let spectra = if wants("alpha") {
            channel_spectra(1, s.ell, &g, &config.model, &config.grid)?
        } else {
            vec![solve_radial(&g, &config.model, s.ell, s.state_index + 1, &config.grid)?]
        };
        let own = spectra.iter().find(|sp| sp.ell == s.ell).expect("initial channel is solved");
        let sol = own.get(s.state_index)?;
        let alpha = if wants("alpha") { Some(polarizability_from_spectra(1, sol, &spectra)?.total) } else { None };
        let report = if needs_report { Some(report_for(sol, momentum_override(config, sol))?) } else { None };
        let mut cells = walls(&g).to_vec();
        cells.push(s.to_string().into());
        for q in &axis.quantities {
            let r = report.as_ref();
            cells.push(match q.as_str() {
                "energy" => sol.energy.into(),
                "alpha" => alpha.into(),
                "s_r" => r.map(|r| r.s_r_full).into(),
                "s_p" => r.map(|r| r.s_p_full).into(),
                "s_t" => r.map(|r| r.s_total).into(),
                "e_r" => r.map(|r| r.e_r_full).into(),
                "e_p" => r.map(|r| r.e_p_full).into(),
                "e_t" => r.map(|r| r.e_total).into(),
                _ => unreachable!("quantities are validated"),
            });
        }
        Ok(cells)
    }))?;
    for cells in rows {
        table.push(cells);
    }
    Ok(table)
}
