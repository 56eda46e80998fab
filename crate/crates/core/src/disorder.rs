//! Monte Carlo study of tunnel-splitting disorder: per-realization
//! ground-state concurrence at the end of the ramp, extreme-realization
//! selection, and re-evolution of the extremes.
//!
//! Realizations are embarrassingly parallel; each draws its ξ vector from a
//! substream keyed by (master seed, realization index), so results are
//! bitwise independent of worker count and scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dynamics::{
    run_protocol_dc, run_protocol_mw, EvolutionTrace, MwModel, RampSchedule,
};
use crate::hamiltonians::{
    apply_disorder, build_dc, build_h_xi, build_xx_effective, dc_site_params, DcChainConfig,
    DisorderRealization, MwChainConfig,
};
use crate::metrics::end_to_end_concurrence;
use crate::spectral::ground_state;
use crate::{Error, Result};

/// Which protocol a disorder study perturbs.
#[derive(Debug, Clone)]
pub enum DisorderProtocol {
    /// Δ_j → Δ_j(1 + ξ_j) in the static chain.
    Dc(DcChainConfig),
    /// H_ξ = 2πΔΣξ_jσ^x_j added to the effective XX chain.
    Mw(MwChainConfig),
}

#[derive(Debug, Clone)]
pub struct DisorderStudyConfig {
    pub protocol: DisorderProtocol,
    /// Disorder half-width δ_ξ.
    pub delta_xi: f64,
    pub n_realizations: usize,
    pub seed: u64,
}

impl DisorderStudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.delta_xi < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "delta_xi must be >= 0, got {}",
                self.delta_xi
            )));
        }
        if self.n_realizations == 0 {
            return Err(Error::InvalidConfig("n_realizations must be >= 1".into()));
        }
        match &self.protocol {
            DisorderProtocol::Dc(c) => c.validate(),
            DisorderProtocol::Mw(c) => c.validate(),
        }
    }
}

/// One included realization: its draw and the resulting final ground-state
/// end-to-end concurrence.
#[derive(Debug, Clone)]
pub struct RealizationRecord {
    pub index: u64,
    pub xi: Vec<f64>,
    pub concurrence: f64,
}

#[derive(Debug, Clone)]
pub struct DisorderStudyResult {
    /// Included realizations in index order.
    pub realizations: Vec<RealizationRecord>,
    pub mean: f64,
    pub min: RealizationRecord,
    pub max: RealizationRecord,
    /// Clean (ξ = 0) concurrence.
    pub baseline: f64,
    /// Realizations dropped because their ground state was degenerate.
    pub excluded: usize,
}

impl DisorderStudyResult {
    pub fn spread(&self) -> f64 {
        self.max.concurrence - self.min.concurrence
    }
}

/// Draws the ξ vector of realization `index`: N independent uniforms on
/// [−δ_ξ, δ_ξ] from a dedicated RNG substream.
pub fn sample_xi(delta_xi: f64, n_sites: usize, seed: u64, index: u64) -> DisorderRealization {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let xi = if delta_xi == 0.0 {
        vec![0.0; n_sites]
    } else {
        (0..n_sites)
            .map(|_| rng.gen_range(-delta_xi..=delta_xi))
            .collect()
    };
    DisorderRealization { xi, delta_xi }
}

/// Final ground-state concurrence of one dc realization: the chain at
/// ε(t_final) with every Δ_j scaled by (1 + ξ_j). `None` when degenerate.
fn dc_realization_concurrence(
    cfg: &DcChainConfig,
    real: &DisorderRealization,
) -> Result<Option<f64>> {
    let cfg = disordered_dc_config(cfg, real)?;
    let eps_final = dc_final_eps(&cfg);
    let gs = ground_state(&build_dc(&cfg, eps_final)?)?;
    if gs.degenerate {
        return Ok(None);
    }
    Ok(Some(end_to_end_concurrence(&gs.state, cfg.n_sites)?))
}

/// Bias amplitude at the nominal end of the ramp, t_final = 10/(2πr).
fn dc_final_eps(cfg: &DcChainConfig) -> f64 {
    let ramp = RampSchedule { initial_ghz: cfg.eps0_ghz, rate_ghz: cfg.ramp_ghz };
    ramp.value(ramp.default_t_final())
}

/// dc config with the realization folded into a per-site Δ override.
pub fn disordered_dc_config(
    cfg: &DcChainConfig,
    real: &DisorderRealization,
) -> Result<DcChainConfig> {
    let clean = dc_site_params(cfg, 0.0)?;
    Ok(DcChainConfig {
        delta_override: Some(apply_disorder(&clean.delta, real)),
        ..cfg.clone()
    })
}

/// mw config whose per-site tunnel splittings carry the realization, for
/// full-Hamiltonian re-evolution of extremes.
pub fn disordered_mw_config(cfg: &MwChainConfig, real: &DisorderRealization) -> MwChainConfig {
    let deltas = (1..=cfg.n_sites)
        .map(|j| cfg.delta_at(j) * (1.0 + real.xi[j - 1]))
        .collect();
    MwChainConfig {
        delta_site_ghz: Some(deltas),
        ..cfg.clone()
    }
}

/// Final ground-state concurrence of one mw realization: effective chain at
/// Ω(t_final) plus the residual transverse term H_ξ.
fn mw_realization_concurrence(
    cfg: &MwChainConfig,
    real: &DisorderRealization,
) -> Result<Option<f64>> {
    let ramp = RampSchedule { initial_ghz: cfg.omega0_ghz, rate_ghz: cfg.ramp_ghz };
    let omega_final = ramp.value(ramp.default_t_final());
    let h = build_xx_effective(cfg, omega_final)? + build_h_xi(cfg.delta_ghz, &real.xi)?;
    let gs = ground_state(&h)?;
    if gs.degenerate {
        return Ok(None);
    }
    Ok(Some(end_to_end_concurrence(&gs.state, cfg.n_sites)?))
}

/// Runs the Monte Carlo study for either protocol.
pub fn run_disorder_study(study: &DisorderStudyConfig) -> Result<DisorderStudyResult> {
    study.validate()?;
    let n_sites = match &study.protocol {
        DisorderProtocol::Dc(c) => c.n_sites,
        DisorderProtocol::Mw(c) => c.n_sites,
    };
    let zero = DisorderRealization { xi: vec![0.0; n_sites], delta_xi: 0.0 };
    let baseline = match &study.protocol {
        DisorderProtocol::Dc(c) => dc_realization_concurrence(c, &zero)?,
        DisorderProtocol::Mw(c) => mw_realization_concurrence(c, &zero)?,
    }
    .ok_or_else(|| Error::InvalidConfig("clean chain is degenerate".into()))?;
    let outcomes: Vec<(u64, DisorderRealization, Option<f64>)> = (0..study.n_realizations as u64)
        .into_par_iter()
        .map(|index| {
            let real = sample_xi(study.delta_xi, n_sites, study.seed, index);
            let c = match &study.protocol {
                DisorderProtocol::Dc(cfg) => dc_realization_concurrence(cfg, &real),
                DisorderProtocol::Mw(cfg) => mw_realization_concurrence(cfg, &real),
            }?;
            Ok((index, real, c))
        })
        .collect::<Result<_>>()?;
    // deterministic aggregation in index order
    let mut realizations = Vec::with_capacity(outcomes.len());
    let mut excluded = 0usize;
    for (index, real, c) in outcomes {
        match c {
            Some(concurrence) => realizations.push(RealizationRecord {
                index,
                xi: real.xi,
                concurrence,
            }),
            None => excluded += 1,
        }
    }
    if realizations.is_empty() {
        return Err(Error::InvalidConfig(
            "all realizations were degenerate".into(),
        ));
    }
    let mean =
        realizations.iter().map(|r| r.concurrence).sum::<f64>() / realizations.len() as f64;
    let min = realizations
        .iter()
        .min_by(|a, b| a.concurrence.partial_cmp(&b.concurrence).unwrap())
        .unwrap()
        .clone();
    let max = realizations
        .iter()
        .max_by(|a, b| a.concurrence.partial_cmp(&b.concurrence).unwrap())
        .unwrap()
        .clone();
    Ok(DisorderStudyResult {
        realizations,
        mean,
        min,
        max,
        baseline,
        excluded,
    })
}

/// Re-evolves the minimum and maximum realizations with the disordered
/// builders: the ramped static chain for dc, the full driven chain for mw.
pub fn evolve_extremes(
    study: &DisorderStudyConfig,
    result: &DisorderStudyResult,
    t_final: f64,
    n_samples: usize,
) -> Result<(EvolutionTrace, EvolutionTrace)> {
    let run = |record: &RealizationRecord| -> Result<EvolutionTrace> {
        let real = DisorderRealization {
            xi: record.xi.clone(),
            delta_xi: study.delta_xi,
        };
        match &study.protocol {
            DisorderProtocol::Dc(cfg) => {
                run_protocol_dc(&disordered_dc_config(cfg, &real)?, t_final, n_samples)
            }
            DisorderProtocol::Mw(cfg) => run_protocol_mw(
                &disordered_mw_config(cfg, &real),
                t_final,
                n_samples,
                MwModel::Full,
            ),
        }
    };
    Ok((run(&result.min)?, run(&result.max)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn dc_study(delta_xi: f64, n: usize) -> DisorderStudyConfig {
        DisorderStudyConfig {
            protocol: DisorderProtocol::Dc(DcChainConfig::reference()),
            delta_xi,
            n_realizations: n,
            seed: 42,
        }
    }

    #[test]
    fn sample_xi_deterministic_and_bounded() {
        let a = sample_xi(0.1, 4, 7, 3);
        let b = sample_xi(0.1, 4, 7, 3);
        assert_eq!(a, b);
        assert!(a.xi.iter().all(|x| x.abs() <= 0.1));
        let other_stream = sample_xi(0.1, 4, 7, 4);
        assert_ne!(a, other_stream);
        let other_seed = sample_xi(0.1, 4, 8, 3);
        assert_ne!(a, other_seed);
    }

    #[test]
    fn sample_xi_zero_width() {
        let r = sample_xi(0.0, 4, 1, 0);
        assert_eq!(r.xi, vec![0.0; 4]);
    }

    #[test]
    fn sample_xi_moments() {
        // 10⁵ draws at δ_ξ = 0.1: mean within 3σ of 0, variance within 5%
        // of δ_ξ²/3
        let d = 0.1;
        let n = 100_000;
        let draws: Vec<f64> = (0..n as u64)
            .flat_map(|k| sample_xi(d, 1, 99, k).xi)
            .collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| x * x).sum::<f64>() / n as f64 - mean * mean;
        let sigma_mean = d / 3f64.sqrt() / (n as f64).sqrt();
        assert!(mean.abs() < 3.0 * sigma_mean, "mean {mean}");
        assert!((var - d * d / 3.0).abs() < 0.05 * d * d / 3.0, "var {var}");
    }

    #[test]
    fn zero_disorder_matches_clean_spectral() {
        let study = dc_study(0.0, 5);
        let r = run_disorder_study(&study).unwrap();
        assert_eq!(r.excluded, 0);
        for rec in &r.realizations {
            assert_abs_diff_eq!(rec.concurrence, r.baseline, epsilon = 1e-12);
        }
        // baseline equals the clean sweep value at ε(t_final)
        let cfg = DcChainConfig::reference();
        let eps_final = cfg.eps0_ghz * (-10.0f64).exp();
        let rows = crate::spectral::sweep_dc_gap_concurrence(
            &cfg,
            crate::spectral::DcSweepVar::Epsilon,
            &[eps_final],
        )
        .unwrap();
        assert_abs_diff_eq!(r.baseline, rows[0].concurrence, epsilon = 1e-12);
    }

    #[test]
    fn study_statistics_are_consistent() {
        let study = dc_study(0.05, 40);
        let r = run_disorder_study(&study).unwrap();
        assert!(r.min.concurrence <= r.mean && r.mean <= r.max.concurrence);
        assert_eq!(r.realizations.len() + r.excluded, 40);
    }

    #[test]
    fn study_deterministic_across_thread_counts() {
        let study = dc_study(0.05, 24);
        let r1 = run_disorder_study(&study).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let r2 = pool.install(|| run_disorder_study(&study).unwrap());
        assert_eq!(r1.realizations.len(), r2.realizations.len());
        for (a, b) in r1.realizations.iter().zip(&r2.realizations) {
            assert_eq!(a.xi, b.xi);
            assert!(a.concurrence.to_bits() == b.concurrence.to_bits());
        }
    }

    #[test]
    fn dc_spread_grows_with_disorder() {
        let small = run_disorder_study(&dc_study(0.05, 60)).unwrap();
        let large = run_disorder_study(&dc_study(0.1, 60)).unwrap();
        assert!(large.spread() > small.spread());
    }

    #[test]
    fn mw_disorder_reduces_mean() {
        let base = MwChainConfig::reference();
        let study = DisorderStudyConfig {
            protocol: DisorderProtocol::Mw(base),
            delta_xi: 0.001,
            n_realizations: 60,
            seed: 5,
        };
        let r = run_disorder_study(&study).unwrap();
        assert!(r.mean < r.baseline, "mean {} baseline {}", r.mean, r.baseline);
    }

    #[test]
    fn invalid_study_rejected() {
        let mut s = dc_study(0.05, 10);
        s.delta_xi = -0.1;
        assert!(s.validate().is_err());
        let mut s = dc_study(0.05, 10);
        s.n_realizations = 0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn zero_disorder_extremes_match_clean_run() {
        let study = dc_study(0.0, 3);
        let r = run_disorder_study(&study).unwrap();
        let (lo, hi) = evolve_extremes(&study, &r, 2.0, 3).unwrap();
        let clean = run_protocol_dc(&DcChainConfig::reference(), 2.0, 3).unwrap();
        for (a, b) in lo.rows.iter().zip(&clean.rows).chain(hi.rows.iter().zip(&clean.rows)) {
            assert_abs_diff_eq!(a.concurrence, b.concurrence, epsilon = 1e-12);
            assert_abs_diff_eq!(a.fidelity, b.fidelity, epsilon = 1e-12);
        }
    }
}
