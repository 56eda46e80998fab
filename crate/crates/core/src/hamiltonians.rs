//! Chain Hamiltonian builders for the two preparation protocols.
//!
//! The dc protocol realizes a transverse-field Ising chain whose energy
//! biases are ramped; the microwave protocol drives the qubits resonantly
//! and realizes an effective XX chain in the rotating frame. Builders take
//! linear frequencies in GHz and return matrices in rad/ns.

use num_complex::Complex64;

use crate::linalg::{self, embed_site, pauli_x, pauli_y, pauli_z, CMatrix};
use crate::{Error, Result, TWO_PI};

/// Parameter bundle for the dc (Ising-in-transverse-field) protocol.
///
/// The four-site coupling pattern is: bulk bond `J`, end bonds `λJ`; bulk
/// tunneling `Δ`, end tunneling `λ_h Δ`; staggered biases `±ε` in the bulk
/// and `∓λ_h ε` on the ends.
#[derive(Debug, Clone)]
pub struct DcChainConfig {
    pub n_sites: usize,
    /// Bulk coupling J in GHz (> 0, antiferromagnetic).
    pub j_ghz: f64,
    /// End-bond ratio λ.
    pub lambda: f64,
    /// End-field ratio λ_h.
    pub lambda_h: f64,
    /// Bulk tunneling Δ in GHz.
    pub delta_ghz: f64,
    /// Bias ramp amplitude ε₀ in GHz.
    pub eps0_ghz: f64,
    /// Ramp rate r in GHz; the bias decays as ε₀·e^{−2πrt}.
    pub ramp_ghz: f64,
    /// Optional per-site bias override (GHz), replacing the staggered pattern.
    pub eps_override: Option<Vec<f64>>,
    /// Optional per-site tunneling override (GHz).
    pub delta_override: Option<Vec<f64>>,
    /// Optional per-bond coupling override (GHz), length N−1.
    pub j_override: Option<Vec<f64>>,
}

impl DcChainConfig {
    /// Reference dc operating point: Δ = 4.5, ε₀ = 20, J = 5 GHz, λ = 0.2,
    /// λ_h = 0.02, r = 0.04 GHz.
    pub fn reference() -> Self {
        Self {
            n_sites: 4,
            j_ghz: 5.0,
            lambda: 0.2,
            lambda_h: 0.02,
            delta_ghz: 4.5,
            eps0_ghz: 20.0,
            ramp_ghz: 0.04,
            eps_override: None,
            delta_override: None,
            j_override: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 || self.n_sites > linalg::MAX_SITES {
            return Err(Error::InvalidConfig(format!(
                "n_sites must be in 2..={}, got {}",
                linalg::MAX_SITES,
                self.n_sites
            )));
        }
        if self.j_ghz <= 0.0 {
            return Err(Error::InvalidConfig("J must be > 0".into()));
        }
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return Err(Error::InvalidConfig("lambda must be in (0, 1]".into()));
        }
        if !(self.lambda_h > 0.0 && self.lambda_h <= 1.0) {
            return Err(Error::InvalidConfig("lambda_h must be in (0, 1]".into()));
        }
        if self.ramp_ghz <= 0.0 {
            return Err(Error::InvalidConfig("ramp rate must be > 0".into()));
        }
        for (name, ov, want) in [
            ("eps_override", &self.eps_override, self.n_sites),
            ("delta_override", &self.delta_override, self.n_sites),
            ("j_override", &self.j_override, self.n_sites - 1),
        ] {
            if let Some(v) = ov {
                if v.len() != want {
                    return Err(Error::InvalidConfig(format!(
                        "{name} must have length {want}, got {}",
                        v.len()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Per-site parameter arrays in GHz.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteParams {
    /// Biases ε_j, length N.
    pub eps: Vec<f64>,
    /// Tunnel splittings Δ_j, length N.
    pub delta: Vec<f64>,
    /// Bond couplings J_{j,j+1}, length N−1.
    pub j: Vec<f64>,
}

/// Alternating-sign pattern s_j = (−1)^j for 1-based site j.
fn stagger_sign(site: usize) -> f64 {
    if site % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Expands a [`DcChainConfig`] into per-site arrays at bias amplitude `eps_ghz`.
///
/// For N = 4 this is exactly the weak-end-bond pattern: J bonds (λJ, J, λJ),
/// tunnelings (λ_hΔ, Δ, Δ, λ_hΔ), biases (−λ_hε, ε, −ε, λ_hε). For larger
/// even N the bulk is uniform with alternating bias signs and the two end
/// sites carry the scaled values. Odd N is rejected unless every array is
/// overridden, since the staggered pattern leaves the ground state degenerate.
pub fn dc_site_params(cfg: &DcChainConfig, eps_ghz: f64) -> Result<SiteParams> {
    cfg.validate()?;
    let n = cfg.n_sites;
    let fully_overridden =
        cfg.eps_override.is_some() && cfg.delta_override.is_some() && cfg.j_override.is_some();
    if n % 2 != 0 && !fully_overridden {
        return Err(Error::OddChainLength(n));
    }
    let eps = cfg.eps_override.clone().unwrap_or_else(|| {
        (1..=n)
            .map(|j| {
                let end = j == 1 || j == n;
                let scale = if end { cfg.lambda_h } else { 1.0 };
                scale * stagger_sign(j) * eps_ghz
            })
            .collect()
    });
    let delta = cfg.delta_override.clone().unwrap_or_else(|| {
        (1..=n)
            .map(|j| {
                let end = j == 1 || j == n;
                if end {
                    cfg.lambda_h * cfg.delta_ghz
                } else {
                    cfg.delta_ghz
                }
            })
            .collect()
    });
    let j = cfg.j_override.clone().unwrap_or_else(|| {
        (1..n)
            .map(|b| {
                let end_bond = b == 1 || b == n - 1;
                if end_bond { cfg.lambda * cfg.j_ghz } else { cfg.j_ghz }
            })
            .collect()
    });
    Ok(SiteParams { eps, delta, j })
}

/// Ising chain in transverse field from explicit per-site arrays (GHz in,
/// rad/ns out): H = −2πΣ(ε_jσ^z_j + Δ_jσ^x_j) + 2πΣ J_b σ^z_jσ^z_{j+1}.
pub fn build_ising(params: &SiteParams) -> Result<CMatrix> {
    let n = params.eps.len();
    let dim = 1 << n;
    let mut h = CMatrix::zeros(dim, dim);
    for j in 1..=n {
        h -= embed_site(&pauli_z(), j, n)?.scale(TWO_PI * params.eps[j - 1]);
        h -= embed_site(&pauli_x(), j, n)?.scale(TWO_PI * params.delta[j - 1]);
    }
    for b in 1..n {
        let zz = embed_site(&pauli_z(), b, n)? * embed_site(&pauli_z(), b + 1, n)?;
        h += zz.scale(TWO_PI * params.j[b - 1]);
    }
    Ok(h)
}

/// dc-protocol Hamiltonian at bias amplitude `eps_ghz`.
pub fn build_dc(cfg: &DcChainConfig, eps_ghz: f64) -> Result<CMatrix> {
    build_ising(&dc_site_params(cfg, eps_ghz)?)
}

/// How the microwave protocol is initialized at t = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MwInitialization {
    /// Start in the instantaneous ground state of the effective XX model at
    /// Ω(0) = Ω₀ (ideal initialization; the default).
    EffectiveGround,
    /// Start in the ground state of the full chain at Ω = 0 with the
    /// configured large staggered biases, i.e. the state the qubits relax to
    /// before the drive is switched on.
    RelaxedAtBias,
}

/// Parameter bundle for the microwave (effective-XX) protocol.
#[derive(Debug, Clone)]
pub struct MwChainConfig {
    pub n_sites: usize,
    /// Bulk coupling J in GHz.
    pub j_ghz: f64,
    /// End-bond ratio λ.
    pub lambda: f64,
    /// Uniform tunnel splitting Δ in GHz.
    pub delta_ghz: f64,
    /// Drive frequency ω in GHz; `None` means resonance ω = 2Δ.
    pub omega_ghz: Option<f64>,
    /// Drive amplitude Ω₀ in GHz.
    pub omega0_ghz: f64,
    /// Ramp rate r in GHz; the amplitude decays as Ω₀·e^{−2πrt}.
    pub ramp_ghz: f64,
    /// Drive phases φ_j in radians; `None` means the antiferromagnetic
    /// pattern φ = π on odd sites, 0 on even sites.
    pub phases: Option<Vec<f64>>,
    /// Static per-site biases ε_j (GHz) during the driven evolution;
    /// `None` means all zero (the anticrossing point).
    pub eps_ghz: Option<Vec<f64>>,
    /// Per-site initialization biases (GHz) used before the drive is on;
    /// `None` means the staggered ±100 GHz configuration.
    pub eps_init_ghz: Option<Vec<f64>>,
    /// Optional per-site tunnel splittings (GHz) overriding the uniform Δ,
    /// used for disordered chains. The drive frequency stays at the nominal
    /// resonance and is not retuned.
    pub delta_site_ghz: Option<Vec<f64>>,
    pub initialization: MwInitialization,
}

impl MwChainConfig {
    /// Reference mw operating point: Δ = ω/2 = 10 GHz, Ω₀ = 2, J = 1 GHz, λ = 0.2,
    /// r = 0.02 GHz.
    pub fn reference() -> Self {
        Self {
            n_sites: 4,
            j_ghz: 1.0,
            lambda: 0.2,
            delta_ghz: 10.0,
            omega_ghz: None,
            omega0_ghz: 2.0,
            ramp_ghz: 0.02,
            phases: None,
            eps_ghz: None,
            eps_init_ghz: None,
            delta_site_ghz: None,
            initialization: MwInitialization::EffectiveGround,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 || self.n_sites > linalg::MAX_SITES {
            return Err(Error::InvalidConfig(format!(
                "n_sites must be in 2..={}, got {}",
                linalg::MAX_SITES,
                self.n_sites
            )));
        }
        if self.j_ghz <= 0.0 {
            return Err(Error::InvalidConfig("J must be > 0".into()));
        }
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return Err(Error::InvalidConfig("lambda must be in (0, 1]".into()));
        }
        if self.ramp_ghz <= 0.0 {
            return Err(Error::InvalidConfig("ramp rate must be > 0".into()));
        }
        for (name, ov) in [
            ("phases", self.phases.as_ref().map(Vec::len)),
            ("eps_ghz", self.eps_ghz.as_ref().map(Vec::len)),
            ("eps_init_ghz", self.eps_init_ghz.as_ref().map(Vec::len)),
            ("delta_site_ghz", self.delta_site_ghz.as_ref().map(Vec::len)),
        ] {
            if let Some(len) = ov {
                if len != self.n_sites {
                    return Err(Error::InvalidConfig(format!(
                        "{name} must have length {}, got {len}",
                        self.n_sites
                    )));
                }
            }
        }
        Ok(())
    }

    /// Drive frequency in GHz (resonant 2Δ unless overridden).
    pub fn omega(&self) -> f64 {
        self.omega_ghz.unwrap_or(2.0 * self.delta_ghz)
    }

    /// Rotating-wave validity: 4Δ > 10·max(Ω₀, J/2).
    pub fn rwa_valid(&self) -> bool {
        4.0 * self.delta_ghz > 10.0 * self.omega0_ghz.max(self.j_ghz / 2.0)
    }

    /// Drive phases, defaulting to the antiferromagnetic alternating pattern.
    pub fn phase(&self, site: usize) -> f64 {
        match &self.phases {
            Some(p) => p[site - 1],
            None => {
                if site % 2 == 1 {
                    std::f64::consts::PI
                } else {
                    0.0
                }
            }
        }
    }

    pub fn delta_at(&self, site: usize) -> f64 {
        match &self.delta_site_ghz {
            Some(d) => d[site - 1],
            None => self.delta_ghz,
        }
    }

    pub fn eps_at(&self, site: usize) -> f64 {
        match &self.eps_ghz {
            Some(e) => e[site - 1],
            None => 0.0,
        }
    }

    /// Initialization biases: staggered with sites 2, 4, … at +100 GHz and
    /// odd sites at −100 GHz unless overridden.
    pub fn eps_init(&self, site: usize) -> f64 {
        match &self.eps_init_ghz {
            Some(e) => e[site - 1],
            None => stagger_sign(site) * 100.0,
        }
    }

    /// Bond couplings in GHz: λJ on the end bonds, J in the bulk.
    pub fn bond(&self, b: usize) -> f64 {
        if b == 1 || b == self.n_sites - 1 {
            self.lambda * self.j_ghz
        } else {
            self.j_ghz
        }
    }
}

/// Full driven chain Hamiltonian at drive amplitude `omega_drive_ghz` (Ω) and
/// time `t_ns`: Ising terms plus −2π·2Ω cos(ω_ang t + φ_j) σ^z_j per site.
pub fn build_mw_full(cfg: &MwChainConfig, omega_drive_ghz: f64, t_ns: f64) -> Result<CMatrix> {
    cfg.validate()?;
    let n = cfg.n_sites;
    let dim = 1 << n;
    let omega_ang = TWO_PI * cfg.omega();
    let mut h = CMatrix::zeros(dim, dim);
    for j in 1..=n {
        let drive = 2.0 * omega_drive_ghz * (omega_ang * t_ns + cfg.phase(j)).cos();
        let zc = cfg.eps_at(j) + drive;
        h -= embed_site(&pauli_z(), j, n)?.scale(TWO_PI * zc);
        h -= embed_site(&pauli_x(), j, n)?.scale(TWO_PI * cfg.delta_at(j));
    }
    for b in 1..n {
        let zz = embed_site(&pauli_z(), b, n)? * embed_site(&pauli_z(), b + 1, n)?;
        h += zz.scale(TWO_PI * cfg.bond(b));
    }
    Ok(h)
}

/// Chain Hamiltonian during initialization: drive off, biases at their large
/// staggered initialization values.
pub fn build_mw_initialization(cfg: &MwChainConfig) -> Result<CMatrix> {
    cfg.validate()?;
    let n = cfg.n_sites;
    let dim = 1 << n;
    let mut h = CMatrix::zeros(dim, dim);
    for j in 1..=n {
        h -= embed_site(&pauli_z(), j, n)?.scale(TWO_PI * cfg.eps_init(j));
        h -= embed_site(&pauli_x(), j, n)?.scale(TWO_PI * cfg.delta_at(j));
    }
    for b in 1..n {
        let zz = embed_site(&pauli_z(), b, n)? * embed_site(&pauli_z(), b + 1, n)?;
        h += zz.scale(TWO_PI * cfg.bond(b));
    }
    Ok(h)
}

/// Free rotation generator H₀ = −Σ (ω_ang/2) σ^x_j in rad/ns.
pub fn build_h0(omega_ghz: f64, n_sites: usize) -> Result<CMatrix> {
    let dim = 1 << n_sites;
    let mut h = CMatrix::zeros(dim, dim);
    for j in 1..=n_sites {
        h -= embed_site(&pauli_x(), j, n_sites)?.scale(TWO_PI * omega_ghz / 2.0);
    }
    Ok(h)
}

/// Rotating-frame transformation U₀(t) = exp(−iH₀t), a product of
/// single-site rotations exp(i(ω_ang t/2)σ^x).
pub fn build_u0(omega_ghz: f64, t_ns: f64, n_sites: usize) -> CMatrix {
    let a = TWO_PI * omega_ghz * t_ns / 2.0;
    let single = linalg::identity(2).scale(a.cos())
        + pauli_x().map(|z| z * Complex64::new(0.0, a.sin()));
    let mut u = linalg::identity(1);
    for _ in 0..n_sites {
        u = linalg::kron(&u, &single);
    }
    u
}

/// Interaction-picture Hamiltonian H̃(t) = U₀†H(t)U₀ − H₀, computed by
/// direct conjugation of the full Hamiltonian.
pub fn build_interaction_picture(
    cfg: &MwChainConfig,
    omega_drive_ghz: f64,
    t_ns: f64,
) -> Result<CMatrix> {
    let h = build_mw_full(cfg, omega_drive_ghz, t_ns)?;
    let u0 = build_u0(cfg.omega(), t_ns, cfg.n_sites);
    let h0 = build_h0(cfg.omega(), cfg.n_sites)?;
    Ok(u0.adjoint() * h * u0 - h0)
}

/// Effective XX chain at drive amplitude Ω (rotating-wave approximation at
/// resonance): −2πΣΩ(cos φ_j σ^z_j + sin φ_j σ^y_j)
/// + 2πΣ(J_b/2)(σ^yσ^y + σ^zσ^z).
pub fn build_xx_effective(cfg: &MwChainConfig, omega_drive_ghz: f64) -> Result<CMatrix> {
    cfg.validate()?;
    let n = cfg.n_sites;
    let dim = 1 << n;
    let mut h = CMatrix::zeros(dim, dim);
    for j in 1..=n {
        let phi = cfg.phase(j);
        h -= embed_site(&pauli_z(), j, n)?.scale(TWO_PI * omega_drive_ghz * phi.cos());
        h -= embed_site(&pauli_y(), j, n)?.scale(TWO_PI * omega_drive_ghz * phi.sin());
    }
    for b in 1..n {
        let yy = embed_site(&pauli_y(), b, n)? * embed_site(&pauli_y(), b + 1, n)?;
        let zz = embed_site(&pauli_z(), b, n)? * embed_site(&pauli_z(), b + 1, n)?;
        h += (yy + zz).scale(TWO_PI * cfg.bond(b) / 2.0);
    }
    Ok(h)
}

/// A draw of per-site fractional tunnel-splitting offsets ξ_j, each within
/// `[−δ_ξ, δ_ξ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisorderRealization {
    pub xi: Vec<f64>,
    pub delta_xi: f64,
}

impl DisorderRealization {
    pub fn new(xi: Vec<f64>, delta_xi: f64) -> Result<Self> {
        for &x in &xi {
            if x.abs() > delta_xi {
                return Err(Error::DisorderOutOfRange { value: x, half_width: delta_xi });
            }
        }
        Ok(Self { xi, delta_xi })
    }
}

/// Protocol-1 disorder: scales every tunnel splitting as Δ_j(1 + ξ_j).
pub fn apply_disorder(deltas: &[f64], real: &DisorderRealization) -> Vec<f64> {
    deltas
        .iter()
        .zip(&real.xi)
        .map(|(d, x)| d * (1.0 + x))
        .collect()
}

/// Protocol-2 disorder operator H_ξ = 2πΔ Σ_j ξ_j σ^x_j (rad/ns).
pub fn build_h_xi(delta_ghz: f64, xi: &[f64]) -> Result<CMatrix> {
    let n = xi.len();
    let dim = 1 << n;
    let mut h = CMatrix::zeros(dim, dim);
    for j in 1..=n {
        h += embed_site(&pauli_x(), j, n)?.scale(TWO_PI * delta_ghz * xi[j - 1]);
    }
    Ok(h)
}
