//! Dispersive joint-readout estimates: state-dependent resonator shift and
//! measurement-time/quality-factor trade-off.
//!
//! This is the one place where SI energies meet circuit units, so the
//! conversions are centralized here and pinned by unit tests against hand
//! calculations.

use num_complex::Complex64;

use crate::linalg::CVector;
use crate::{Error, Result, TWO_PI};

/// ħ in J·s.
pub const HBAR_JS: f64 = 1.054571817e-34;
/// k_B in J/K.
pub const KB_JK: f64 = 1.380649e-23;

/// Circuit and amplifier parameters of the joint-readout resonator.
#[derive(Debug, Clone, Copy)]
pub struct ReadoutParams {
    /// Qubit inductance in pH.
    pub lq_ph: f64,
    /// Persistent current in µA.
    pub iq_ua: f64,
    /// Dimensionless qubit–resonator coupling.
    pub kappa: f64,
    /// Amplifier noise temperature in K.
    pub tn_k: f64,
    /// Resonator frequency in GHz (linear).
    pub omega_r_ghz: f64,
    /// Resonator quality factor.
    pub q: f64,
}

impl ReadoutParams {
    /// Typical flux-qubit circuit values.
    pub fn typical() -> Self {
        Self {
            lq_ph: 25.0,
            iq_ua: 0.25,
            kappa: 0.01,
            tn_k: 5.0,
            omega_r_ghz: 7.5,
            q: 75.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("Lq_pH", self.lq_ph),
            ("Iq_uA", self.iq_ua),
            ("kappa", self.kappa),
            ("TN_K", self.tn_k),
            ("omega_r_GHz", self.omega_r_ghz),
            ("Q", self.q),
        ];
        for (name, v) in fields {
            if !(v > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "readout parameter {name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// L_q·I_q² in Joules.
    pub fn lq_iq2_joules(&self) -> f64 {
        self.lq_ph * 1e-12 * (self.iq_ua * 1e-6).powi(2)
    }

    /// L_q·I_q² as an angular frequency in rad/ns (divide by ħ, then
    /// rad/s → rad/ns).
    pub fn lq_iq2_rad_per_ns(&self) -> f64 {
        self.lq_iq2_joules() / HBAR_JS * 1e-9
    }

    /// Dimensionless noise-to-circuit energy ratio k_B·T_N/(L_q·I_q²).
    pub fn noise_energy_ratio(&self) -> f64 {
        KB_JK * self.tn_k / self.lq_iq2_joules()
    }

    /// Resonator angular frequency in rad/ns.
    pub fn omega_r_rad_per_ns(&self) -> f64 {
        TWO_PI * self.omega_r_ghz
    }
}

/// Joint matrix element between two chain eigenstates read out through
/// σ^z on sites `a` and `b`:
///
/// R_ge = |m_a|² + |m_b|² − 2·Re(m_a·m_b*),  m_s = ⟨g|σ^z_s|e⟩.
///
/// The states must be orthogonal (distinct eigenstates); an entangled pair
/// of states shows up through the nonzero cross term.
pub fn r_ge(g: &CVector, e: &CVector, sites: (usize, usize), n_sites: usize) -> Result<f64> {
    let dim = 1usize << n_sites;
    if g.len() != dim || e.len() != dim {
        return Err(Error::InvalidConfig(format!(
            "state dimension {} does not match {n_sites} sites",
            g.len()
        )));
    }
    for s in [sites.0, sites.1] {
        if s == 0 || s > n_sites {
            return Err(Error::SiteOutOfRange { site: s, n_sites });
        }
    }
    let overlap = g.dotc(e).norm();
    if overlap > 1e-8 {
        return Err(Error::NotOrthogonal(overlap));
    }
    // ⟨g|σ^z_s|e⟩ without forming the operator: σ^z_s is diagonal with sign
    // set by the site's bit (site 1 = most significant).
    let elem = |site: usize| -> Complex64 {
        let bit = n_sites - site;
        let mut m = Complex64::new(0.0, 0.0);
        for i in 0..dim {
            let sign = if (i >> bit) & 1 == 0 { 1.0 } else { -1.0 };
            m += g[i].conj() * sign * e[i];
        }
        m
    };
    let ma = elem(sites.0);
    let mb = elem(sites.1);
    let full = ma * ma.conj() + mb * mb.conj() - ma * mb.conj() - mb * ma.conj();
    debug_assert!(full.im.abs() < 1e-10, "R_ge imaginary residual {}", full.im);
    Ok(full.re)
}

/// Relative resonator shift Δω_r/ω_r = κ²·R_ge·L_qI_q²/ΔE, with ΔE the
/// relevant chain energy scale in rad/ns.
pub fn dispersive_shift(p: &ReadoutParams, r_ge: f64, delta_e_rad_ns: f64) -> Result<f64> {
    if delta_e_rad_ns <= 0.0 {
        return Err(Error::NonPositiveGap(delta_e_rad_ns));
    }
    Ok(p.kappa.powi(2) * r_ge * p.lq_iq2_rad_per_ns() / delta_e_rad_ns)
}

/// Measurement time in ns: the larger of the amplifier-noise-limited time
/// and the resonator ring-up time Q/ω_r. An order-of-magnitude estimator,
/// implemented literally as the max of the two branches.
pub fn measurement_time(p: &ReadoutParams) -> f64 {
    let noise = p.noise_energy_ratio()
        / (p.kappa.powi(2) * p.q.powi(2) * p.omega_r_rad_per_ns());
    let ringup = p.q / p.omega_r_rad_per_ns();
    noise.max(ringup)
}

/// Integer Q minimizing [`measurement_time`] over `[q_min, q_max]`. The
/// minimum sits at the branch crossing Q³ = k_B·T_N/(L_q·I_q²·κ²); the range
/// must bracket it or the scan hits an endpoint and errors.
pub fn optimal_q(p: &ReadoutParams, q_min: u32, q_max: u32) -> Result<u32> {
    if q_min == 0 || q_max <= q_min {
        return Err(Error::InvalidConfig(format!(
            "bad Q range [{q_min}, {q_max}]"
        )));
    }
    let mut best = (q_min, f64::INFINITY);
    for q in q_min..=q_max {
        let t = measurement_time(&ReadoutParams { q: q as f64, ..*p });
        if t < best.1 {
            best = (q, t);
        }
    }
    if best.0 == q_min || best.0 == q_max {
        return Err(Error::NoBracketedMinimum { lo: q_min, hi: q_max });
    }
    Ok(best.0)
}
