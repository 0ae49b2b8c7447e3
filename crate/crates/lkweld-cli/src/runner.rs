//! Subcommand implementations.
//!
//! Every command loads the scenario (defaults when no config is given),
//! runs its pipeline, writes CSV files into the output directory, prints
//! a short summary to stdout and optionally renders an SVG. Scenarios run
//! across their t/ε families sequentially unless `--parallel` is set;
//! either way the rows come back in scenario order, so output bytes do
//! not depend on scheduling.

use std::path::Path;

use lkweld_core::evolution::{
    evolve_boundary, regularity_ratios, star_angle_defect, EvolutionConfig,
};
use lkweld_core::fit::{fit_loglog, DEFAULT_NUMERICAL_FLOOR};
use lkweld_core::oracle::{
    solve_exterior, solve_interior, true_welding, MapSolution, TheodorsenParams,
};
use lkweld_core::trig::grid_angles;
use lkweld_core::verify::{
    duality_errors, lebedev_slacks, welding_defects, welding_law_errors, PipelineSettings,
};
use lkweld_core::{asymptotic, BoundaryCurve, FitResult};

use crate::config::Scenario;
use crate::error::CliError;
use crate::output::{format_value, out_file, write_csv, write_fit_csv};
use crate::plot::{line_plot, Series};

/// Flags shared by all commands.
#[derive(Debug, Clone, Copy)]
pub struct RunFlags {
    pub plots: bool,
    pub parallel: bool,
}

fn settings(sc: &Scenario, flags: RunFlags) -> PipelineSettings {
    PipelineSettings { grid: sc.grid, steps: sc.steps, parallel: flags.parallel }
}

/// Curve selection rule of the map/weld commands: an explicit `delta`
/// shape (scaled by ε) wins; otherwise the driving is evolved to t.
fn scenario_curve(sc: &Scenario) -> Result<BoundaryCurve, CliError> {
    if sc.delta_explicit {
        let eps = sc.eps;
        let delta = sc.delta.clone();
        Ok(BoundaryCurve::from_fn(sc.grid, move |psi| eps * delta.eval(psi))?)
    } else {
        let cfg = evolution_config(sc)?;
        Ok(evolve_boundary(&cfg)?.curve)
    }
}

fn evolution_config(sc: &Scenario) -> Result<EvolutionConfig, CliError> {
    let steps = sc.steps.unwrap_or_else(|| lkweld_core::evolution::default_steps(sc.t));
    EvolutionConfig::with_resolution(sc.driving.clone(), sc.t, steps, sc.grid).map_err(Into::into)
}

fn oracle_params(sc: &Scenario) -> TheodorsenParams {
    TheodorsenParams { tol: sc.tol, ..TheodorsenParams::default() }
}

fn oracle_interior(sc: &Scenario, curve: &BoundaryCurve) -> Result<MapSolution, CliError> {
    solve_interior(curve, oracle_params(sc))
        .map_err(|e| CliError::Numerical(format!("oracle-interior: {e}")))
}

fn oracle_exterior(sc: &Scenario, curve: &BoundaryCurve) -> Result<MapSolution, CliError> {
    solve_exterior(curve, oracle_params(sc))
        .map_err(|e| CliError::Numerical(format!("oracle-exterior: {e}")))
}

fn print_fit(name: &str, fit: &FitResult) {
    if fit.degenerate {
        println!("{name}: fit degenerate (errors at the numerical floor)");
    } else {
        println!(
            "{name}: fitted slope {} ± {} ({} points)",
            format_value(fit.slope),
            format_value(fit.slope_half_width),
            fit.used.iter().filter(|&&u| u).count()
        );
    }
}

fn fit_outputs(
    out: &Path,
    stem: &str,
    xs: &[f64],
    errors: &[f64],
    flags: RunFlags,
    x_label: &str,
) -> Result<FitResult, CliError> {
    let fit = fit_loglog(xs, errors, DEFAULT_NUMERICAL_FLOOR);
    write_fit_csv(&out_file(out, &format!("{stem}_fit.csv"))?, &fit)?;
    print_fit(stem, &fit);
    if flags.plots {
        line_plot(
            &out_file(out, &format!("{stem}.svg"))?,
            &format!("{stem}: error vs {x_label} (log-log)"),
            &[Series { label: "error", xs, ys: errors }],
            true,
            true,
        )?;
    }
    Ok(fit)
}

pub fn evolve(sc: &Scenario, flags: RunFlags) -> Result<(), CliError> {
    let cfg = evolution_config(sc)?;
    let res = evolve_boundary(&cfg)?;
    let angles = grid_angles(sc.grid);

    let curve_rows: Vec<Vec<f64>> = (0..sc.grid)
        .map(|j| {
            vec![
                angles[j],
                res.curve.delta().values()[j].re,
                res.curve.delta_deriv().values()[j].re,
                res.curve.delta_deriv2().values()[j].re,
            ]
        })
        .collect();
    write_csv(
        &out_file(&sc.out, "evolve_curve.csv")?,
        &["psi", "delta", "ddelta", "d2delta"],
        &curve_rows,
    )?;

    let map_rows: Vec<Vec<f64>> = (0..sc.grid)
        .map(|j| vec![angles[j], res.angle_map.samples()[j]])
        .collect();
    write_csv(&out_file(&sc.out, "evolve_map.csv")?, &["phi", "psi"], &map_rows)?;

    println!(
        "evolved '{}' to t = {}: epsilon = {}, star defect = {}",
        sc.name,
        format_value(res.t),
        format_value(res.curve.epsilon()),
        format_value(star_angle_defect(&res)),
    );
    if res.t > 0.0 {
        let (r0, r1, r2) = regularity_ratios(&res);
        println!(
            "deficit ratios: sup|d|/t = {}, sup|d'|/t = {}, sup|d''|/t = {}",
            format_value(r0),
            format_value(r1),
            format_value(r2)
        );
    }
    if flags.plots {
        let delta: Vec<f64> = res.curve.delta().values().iter().map(|v| v.re).collect();
        line_plot(
            &out_file(&sc.out, "evolve_curve.svg")?,
            "evolved deficit delta(psi)",
            &[Series { label: "delta", xs: &angles, ys: &delta }],
            false,
            false,
        )?;
    }
    Ok(())
}

fn map_command(sc: &Scenario, flags: RunFlags, exterior: bool) -> Result<(), CliError> {
    let curve = scenario_curve(sc)?;
    let sol = if exterior { oracle_exterior(sc, &curve)? } else { oracle_interior(sc, &curve)? };
    let stem = if exterior { "map_exterior" } else { "map_interior" };
    let angles = grid_angles(sc.grid);
    let rows: Vec<Vec<f64>> = (0..sc.grid)
        .map(|j| vec![angles[j], sol.psi_of_theta.samples()[j]])
        .collect();
    write_csv(&out_file(&sc.out, &format!("{stem}.csv"))?, &["theta", "psi"], &rows)?;
    println!(
        "{stem}: conf_factor = {}, iterations = {}, residual = {}",
        format_value(sol.conf_factor),
        sol.iterations,
        format_value(sol.residual)
    );
    if exterior {
        let (b0, b1) = (sol.b0.unwrap_or_default(), sol.b1.unwrap_or_default());
        println!(
            "tau = {}, b0 = {} + {}i, b1 = {} + {}i",
            format_value(-sol.conf_factor.ln()),
            format_value(b0.re),
            format_value(b0.im),
            format_value(b1.re),
            format_value(b1.im)
        );
    }
    if flags.plots {
        let displacement: Vec<f64> = sol
            .psi_of_theta
            .samples()
            .iter()
            .zip(&angles)
            .map(|(p, t)| p - t)
            .collect();
        line_plot(
            &out_file(&sc.out, &format!("{stem}.svg"))?,
            &format!("{stem}: boundary correspondence psi(theta) - theta"),
            &[Series { label: "psi - theta", xs: &angles, ys: &displacement }],
            false,
            false,
        )?;
    }
    Ok(())
}

pub fn map_interior(sc: &Scenario, flags: RunFlags) -> Result<(), CliError> {
    map_command(sc, flags, false)
}

pub fn map_exterior(sc: &Scenario, flags: RunFlags) -> Result<(), CliError> {
    map_command(sc, flags, true)
}

pub fn weld_oracle(sc: &Scenario, flags: RunFlags) -> Result<(), CliError> {
    let curve = scenario_curve(sc)?;
    let int = oracle_interior(sc, &curve)?;
    let ext = oracle_exterior(sc, &curve)?;
    let weld =
        true_welding(&int, &ext).map_err(|e| CliError::Numerical(format!("welding: {e}")))?;
    let angles = grid_angles(sc.grid);
    let rows: Vec<Vec<f64>> = (0..sc.grid)
        .map(|j| vec![angles[j], weld.samples()[j]])
        .collect();
    write_csv(&out_file(&sc.out, "weld_oracle.csv")?, &["s", "sigma"], &rows)?;
    println!("weld_oracle: max displacement = {}", format_value(weld.max_deviation()));
    if flags.plots {
        let displacement: Vec<f64> =
            weld.samples().iter().zip(&angles).map(|(v, s)| v - s).collect();
        line_plot(
            &out_file(&sc.out, "weld_oracle.svg")?,
            "oracle welding displacement sigma(s) - s",
            &[Series { label: "sigma - s", xs: &angles, ys: &displacement }],
            false,
            false,
        )?;
    }
    Ok(())
}

pub fn weld_asymptotic(sc: &Scenario, flags: RunFlags) -> Result<(), CliError> {
    let curve = scenario_curve(sc)?;
    let record = asymptotic::welding(&curve)?;
    let rows: Vec<Vec<f64>> = (0..sc.grid)
        .map(|j| {
            vec![record.s_grid[j], record.sigma.samples()[j], record.h.values()[j].re]
        })
        .collect();
    write_csv(&out_file(&sc.out, "weld_asymptotic.csv")?, &["s", "sigma", "h"], &rows)?;
    println!(
        "weld_asymptotic: epsilon = {}, solve residual = {}",
        format_value(curve.epsilon()),
        format_value(record.residual)
    );
    if flags.plots {
        let displacement: Vec<f64> = record
            .sigma
            .samples()
            .iter()
            .zip(&record.s_grid)
            .map(|(v, s)| v - s)
            .collect();
        line_plot(
            &out_file(&sc.out, "weld_asymptotic.svg")?,
            "asymptotic welding displacement sigma(s) - s",
            &[Series { label: "sigma - s", xs: &record.s_grid, ys: &displacement }],
            false,
            false,
        )?;
    }
    Ok(())
}

pub fn verify_theorem1(sc: &Scenario, flags: RunFlags) -> Result<(), CliError> {
    sc.require_fit_points("t_list", sc.t_list.len())?;
    let rows = welding_law_errors(&sc.driving, &sc.t_list, settings(sc, flags))?;
    let table: Vec<Vec<f64>> = rows.iter().map(|r| vec![r.t, r.error, r.tau, r.slack]).collect();
    write_csv(
        &out_file(&sc.out, "theorem1.csv")?,
        &["t", "error", "tau", "slack"],
        &table,
    )?;
    for r in &rows {
        println!(
            "t = {}: error = {}, tau = {}, slack = {}",
            format_value(r.t),
            format_value(r.error),
            format_value(r.tau),
            format_value(r.slack)
        );
    }
    let errors: Vec<f64> = rows.iter().map(|r| r.error).collect();
    fit_outputs(&sc.out, "theorem1", &sc.t_list, &errors, flags, "t")?;
    Ok(())
}

pub fn verify_theorem_b(sc: &Scenario, flags: RunFlags) -> Result<(), CliError> {
    sc.require_fit_points("eps_list", sc.eps_list.len())?;
    let shape = sc.delta.clone();
    let rows = welding_defects(move |psi| shape.eval(psi), &sc.eps_list, settings(sc, flags))?;
    let table: Vec<Vec<f64>> = rows.iter().map(|r| vec![r.epsilon, r.error]).collect();
    write_csv(&out_file(&sc.out, "theoremB.csv")?, &["eps", "error"], &table)?;
    for r in &rows {
        println!("eps = {}: error = {}", format_value(r.epsilon), format_value(r.error));
    }
    let errors: Vec<f64> = rows.iter().map(|r| r.error).collect();
    fit_outputs(&sc.out, "theoremB", &sc.eps_list, &errors, flags, "eps")?;
    Ok(())
}

pub fn verify_duality(sc: &Scenario, flags: RunFlags) -> Result<(), CliError> {
    sc.require_fit_points("t_list", sc.t_list.len())?;
    let rows = duality_errors(&sc.driving, &sc.t_list, settings(sc, flags))?;
    let table: Vec<Vec<f64>> = rows.iter().map(|r| vec![r.t, r.tau, r.error]).collect();
    write_csv(&out_file(&sc.out, "duality.csv")?, &["t", "tau", "error"], &table)?;
    for r in &rows {
        println!(
            "t = {}: tau = {}, error = {}",
            format_value(r.t),
            format_value(r.tau),
            format_value(r.error)
        );
    }
    // the expansion parameter of the exterior side is tau, not t
    let taus: Vec<f64> = rows.iter().map(|r| r.tau).collect();
    let errors: Vec<f64> = rows.iter().map(|r| r.error).collect();
    fit_outputs(&sc.out, "duality", &taus, &errors, flags, "tau")?;
    Ok(())
}

pub fn verify_lebedev(sc: &Scenario, flags: RunFlags) -> Result<(), CliError> {
    sc.require_fit_points("t_list", sc.t_list.len())?;
    let rows = lebedev_slacks(&sc.driving, &sc.t_list, settings(sc, flags))?;
    let table: Vec<Vec<f64>> = rows.iter().map(|r| vec![r.t, r.tau, r.slack]).collect();
    write_csv(&out_file(&sc.out, "lebedev.csv")?, &["t", "tau", "slack"], &table)?;
    for r in &rows {
        println!(
            "t = {}: tau = {}, slack = {}",
            format_value(r.t),
            format_value(r.tau),
            format_value(r.slack)
        );
    }
    let slacks: Vec<f64> = rows.iter().map(|r| r.slack).collect();
    fit_outputs(&sc.out, "lebedev", &sc.t_list, &slacks, flags, "t")?;
    Ok(())
}
