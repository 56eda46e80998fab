//! Batch command-line front-end: config ingestion plus one subcommand per
//! study, emitting deterministic CSV/JSON for plotting and regression tests.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::config::{IntegratorKind, Protocol, RunConfig};
use crate::disorder::{
    evolve_extremes, run_disorder_study, DisorderProtocol, DisorderStudyConfig,
};
use crate::dynamics::{
    run_protocol_dc_with, run_protocol_mw_with, EvolutionTrace, Integrator, MwModel,
    RampSchedule,
};
use crate::hamiltonians::{build_dc, build_xx_effective};
use crate::output::{format_value, write_csv, write_csv_rows, write_json};
use crate::readout::{dispersive_shift, measurement_time, optimal_q, r_ge};
use crate::spectral::{ground_state, sweep_dc_gap_concurrence, sweep_mw_gap_concurrence, DcSweepVar};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "fluxlde", version, about = "Flux-qubit chain entanglement simulator")]
pub struct Cli {
    /// Override the [disorder] seed from the config file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ground-state gap and end-to-end concurrence over a control grid.
    GapSweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        var: SweepVarArg,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time evolution under a ramp protocol; CSV trace plus JSON summary.
    Evolve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Disorder Monte Carlo: realizations CSV, summary JSON, extreme traces.
    Disorder {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_prefix: String,
    },
    /// Dispersive-readout estimates as JSON on stdout.
    Readout {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SweepVarArg {
    Delta,
    Epsilon,
    #[value(name = "omega_drive")]
    OmegaDrive,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Dc,
    MwFull,
    MwEffective,
}

/// Applies FLUXLDE_THREADS (if set) to the global worker pool, then runs the
/// requested subcommand.
pub fn run(cli: Cli) -> Result<()> {
    if let Ok(v) = std::env::var("FLUXLDE_THREADS") {
        let n: usize = v.parse().map_err(|_| {
            Error::RunConfig(format!("FLUXLDE_THREADS must be a positive integer, got {v:?}"))
        })?;
        if n == 0 {
            return Err(Error::RunConfig("FLUXLDE_THREADS must be >= 1".into()));
        }
        // ignore AlreadyInitialized when run() is called more than once
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match cli.command {
        Command::GapSweep { config, var, from, to, points, out } => {
            cmd_gap_sweep(&config, var, from, to, points, &out)
        }
        Command::Evolve { config, model, out } => cmd_evolve(&config, model, &out),
        Command::Disorder { config, out_prefix } => {
            cmd_disorder(&config, &out_prefix, cli.seed)
        }
        Command::Readout { config } => cmd_readout(&config),
    }
}

fn grid(from: f64, to: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(Error::RunConfig("--points must be >= 1".into()));
    }
    if from > to {
        return Err(Error::RunConfig(format!(
            "--from ({from}) must not exceed --to ({to})"
        )));
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    Ok((0..points)
        .map(|k| from + (to - from) * k as f64 / (points - 1) as f64)
        .collect())
}

fn cmd_gap_sweep(
    config: &PathBuf,
    var: SweepVarArg,
    from: f64,
    to: f64,
    points: usize,
    out: &PathBuf,
) -> Result<()> {
    let cfg = RunConfig::from_path(config)?;
    let g = grid(from, to, points)?;
    let rows = match var {
        SweepVarArg::Delta => sweep_dc_gap_concurrence(cfg.dc_config()?, DcSweepVar::Delta, &g)?,
        SweepVarArg::Epsilon => {
            sweep_dc_gap_concurrence(cfg.dc_config()?, DcSweepVar::Epsilon, &g)?
        }
        SweepVarArg::OmegaDrive => sweep_mw_gap_concurrence(cfg.mw_config()?, &g)?,
    };
    write_csv(
        out,
        &["control_GHz", "gap_GHz", "concurrence"],
        rows.iter().map(|r| vec![r.control_ghz, r.gap_ghz, r.concurrence]),
    )
}

fn integrator_from(cfg: &RunConfig) -> Option<Integrator> {
    match cfg.numerics.integrator {
        IntegratorKind::Rk4 => None,
        IntegratorKind::Adaptive => Some(Integrator::Adaptive { rel_tol: cfg.numerics.tol }),
    }
}

fn write_trace_csv(out: &std::path::Path, trace: &EvolutionTrace) -> Result<()> {
    write_csv(
        out,
        &["t_ns", "control_GHz", "fidelity", "concurrence", "norm_error"],
        trace.rows.iter().map(|r| {
            vec![r.t_ns, r.control_ghz, r.fidelity, r.concurrence, r.norm_error]
        }),
    )
}

fn json_f64(x: f64) -> serde_json::Value {
    if x.is_finite() { json!(x) } else { serde_json::Value::Null }
}

fn cmd_evolve(config: &PathBuf, model: ModelArg, out: &PathBuf) -> Result<()> {
    let cfg = RunConfig::from_path(config)?;
    let integrator = integrator_from(&cfg);
    let n_samples = cfg.numerics.n_samples;
    let (trace, gs_final) = match model {
        ModelArg::Dc => {
            let dc = cfg.dc_config()?;
            let ramp = RampSchedule { initial_ghz: dc.eps0_ghz, rate_ghz: dc.ramp_ghz };
            let t_final = cfg.numerics.t_final_ns.unwrap_or_else(|| ramp.default_t_final());
            let trace = run_protocol_dc_with(dc, t_final, n_samples, integrator)?;
            let gs = ground_state(&build_dc(dc, ramp.value(t_final))?)?;
            let c = if gs.degenerate {
                f64::NAN
            } else {
                crate::metrics::end_to_end_concurrence(&gs.state, dc.n_sites)?
            };
            (trace, c)
        }
        ModelArg::MwFull | ModelArg::MwEffective => {
            let mw = cfg.mw_config()?;
            let ramp = RampSchedule { initial_ghz: mw.omega0_ghz, rate_ghz: mw.ramp_ghz };
            let t_final = cfg.numerics.t_final_ns.unwrap_or_else(|| ramp.default_t_final());
            let mw_model = if matches!(model, ModelArg::MwFull) {
                MwModel::Full
            } else {
                MwModel::Effective
            };
            let trace = run_protocol_mw_with(mw, t_final, n_samples, mw_model, integrator)?;
            let gs = ground_state(&build_xx_effective(mw, ramp.value(t_final))?)?;
            let c = if gs.degenerate {
                f64::NAN
            } else {
                crate::metrics::end_to_end_concurrence(&gs.state, mw.n_sites)?
            };
            (trace, c)
        }
    };
    write_trace_csv(out, &trace)?;
    let last = trace.final_row();
    let summary = json!({
        "final_fidelity": json_f64(last.fidelity),
        "final_concurrence": json_f64(last.concurrence),
        "min_fidelity": json_f64(trace.min_fidelity()),
        "max_concurrence": json_f64(trace.max_concurrence()),
        "gs_concurrence_at_final_control": json_f64(gs_final),
    });
    write_json(out.with_extension("json"), &summary)
}

fn cmd_disorder(config: &PathBuf, out_prefix: &str, seed_override: Option<u64>) -> Result<()> {
    let cfg = RunConfig::from_path(config)?;
    let (protocol, n_sites, ramp) = match cfg.protocol {
        Some(Protocol::Dc) => {
            let dc = cfg.dc_config()?.clone();
            let ramp = RampSchedule { initial_ghz: dc.eps0_ghz, rate_ghz: dc.ramp_ghz };
            (DisorderProtocol::Dc(dc.clone()), dc.n_sites, ramp)
        }
        Some(Protocol::Mw) => {
            let mw = cfg.mw_config()?.clone();
            let ramp = RampSchedule { initial_ghz: mw.omega0_ghz, rate_ghz: mw.ramp_ghz };
            (DisorderProtocol::Mw(mw.clone()), mw.n_sites, ramp)
        }
        None => {
            return Err(Error::RunConfig(
                "disorder needs a [chain] section selecting the protocol".into(),
            ))
        }
    };
    let seed = seed_override.unwrap_or(cfg.disorder.seed);
    let study = DisorderStudyConfig {
        protocol,
        delta_xi: cfg.disorder.delta_xi,
        n_realizations: cfg.disorder.realizations,
        seed,
    };
    let result = run_disorder_study(&study)?;
    let mut header: Vec<String> = vec!["index".into()];
    header.extend((1..=n_sites).map(|j| format!("xi_{j}")));
    header.push("gs_concurrence".into());
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv_rows(
        format!("{out_prefix}_realizations.csv"),
        &header_refs,
        result.realizations.iter().map(|r| {
            let mut row = vec![r.index.to_string()];
            row.extend(r.xi.iter().map(|&x| format_value(x)));
            row.push(format_value(r.concurrence));
            row
        }),
    )?;
    let summary = json!({
        "mean": json_f64(result.mean),
        "min": json_f64(result.min.concurrence),
        "max": json_f64(result.max.concurrence),
        "baseline": json_f64(result.baseline),
        "excluded_count": result.excluded,
        "seed": seed,
    });
    write_json(format!("{out_prefix}_summary.json"), &summary)?;
    let t_final = cfg.numerics.t_final_ns.unwrap_or_else(|| ramp.default_t_final());
    let (lo, hi) = evolve_extremes(&study, &result, t_final, cfg.numerics.n_samples)?;
    write_trace_csv(
        std::path::Path::new(&format!("{out_prefix}_extreme_min.csv")),
        &lo,
    )?;
    write_trace_csv(
        std::path::Path::new(&format!("{out_prefix}_extreme_max.csv")),
        &hi,
    )?;
    Ok(())
}

fn cmd_readout(config: &PathBuf) -> Result<()> {
    let cfg = RunConfig::from_path(config)?;
    let Some(section) = &cfg.readout else {
        return Err(Error::RunConfig("missing [readout] section".into()));
    };
    let p = section.params();
    // state-dependent shift when a chain is configured: lowest two eigenstates
    // at zero control, read out through the end sites across the gap
    let shift = match cfg.protocol {
        Some(Protocol::Dc) => {
            let dc = cfg.dc_config()?;
            let h = build_dc(dc, 0.0)?;
            Some((h, dc.n_sites))
        }
        Some(Protocol::Mw) => {
            let mw = cfg.mw_config()?;
            let h = build_xx_effective(mw, 0.0)?;
            Some((h, mw.n_sites))
        }
        None => None,
    };
    let shift_ratio = match shift {
        Some((h, n)) => {
            let d = crate::linalg::eigh(&h)?;
            let gap = d.eigenvalues[1] - d.eigenvalues[0];
            if gap <= crate::spectral::DEGENERACY_TOL {
                serde_json::Value::Null
            } else if p.kappa == 0.0 {
                json!(0.0)
            } else {
                let r = r_ge(&d.eigenvector(0), &d.eigenvector(1), (1, n), n)?;
                json!(dispersive_shift(&p, r, gap)?)
            }
        }
        None => serde_json::Value::Null,
    };
    let (t_meas, q_opt) = if p.kappa == 0.0 {
        eprintln!("warning: kappa = 0 decouples the resonator; measurement time is unbounded");
        (serde_json::Value::Null, serde_json::Value::Null)
    } else {
        p.validate()?;
        let crossover = (p.noise_energy_ratio() / p.kappa.powi(2)).powf(1.0 / 3.0);
        let lo = ((0.2 * crossover) as u32).max(2);
        let hi = (4.0 * crossover).ceil() as u32 + 10;
        (json!(measurement_time(&p)), json!(optimal_q(&p, lo, hi)?))
    };
    let out = json!({
        "t_meas_ns": t_meas,
        "optimal_Q": q_opt,
        "shift_ratio": shift_ratio,
    });
    println!("{}", serde_json::to_string_pretty(&out).map_err(|e| {
        Error::InvalidConfig(format!("JSON serialization: {e}"))
    })?);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shapes() {
        assert_eq!(grid(0.0, 1.0, 3).unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(grid(2.0, 5.0, 1).unwrap(), vec![2.0]);
        assert!(grid(1.0, 0.0, 3).is_err());
        assert!(grid(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn cli_parses_subcommands() {
        use clap::Parser;
        let cli = Cli::try_parse_from([
            "fluxlde",
            "gap-sweep",
            "--config",
            "c.ini",
            "--var",
            "epsilon",
            "--from",
            "0",
            "--to",
            "1",
            "--points",
            "5",
            "--out",
            "o.csv",
        ])
        .unwrap();
        assert!(matches!(cli.command, Command::GapSweep { .. }));
        let cli = Cli::try_parse_from([
            "fluxlde",
            "--seed",
            "9",
            "evolve",
            "--config",
            "c.ini",
            "--model",
            "mw-full",
            "--out",
            "t.csv",
        ])
        .unwrap();
        assert_eq!(cli.seed, Some(9));
        assert!(matches!(
            cli.command,
            Command::Evolve { model: ModelArg::MwFull, .. }
        ));
        assert!(Cli::try_parse_from(["fluxlde", "gap-sweep", "--var", "nope"]).is_err());
    }
}
