//! INI-style run configuration: flat `[section]` / `key = value` files,
//! strict about unknown sections and keys so experiment files stay honest.
//!
//! Missing chain keys fall back to the two reference operating points
//! (dc and mw defaults), so a minimal file is just `[chain]` with
//! `protocol = dc`.

use std::collections::BTreeMap;
use std::path::Path;

use crate::hamiltonians::{DcChainConfig, MwChainConfig};
use crate::readout::ReadoutParams;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    Dc,
    Mw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegratorKind {
    Rk4,
    Adaptive,
}

/// `[numerics]` section.
#[derive(Debug, Clone)]
pub struct NumericsSection {
    /// Run length; `None` means the protocol default 10/(2πr).
    pub t_final_ns: Option<f64>,
    pub n_samples: usize,
    pub integrator: IntegratorKind,
    /// Relative tolerance of the adaptive integrator.
    pub tol: f64,
}

impl Default for NumericsSection {
    fn default() -> Self {
        Self {
            t_final_ns: None,
            n_samples: 401,
            integrator: IntegratorKind::Rk4,
            tol: 1e-8,
        }
    }
}

/// `[disorder]` section.
#[derive(Debug, Clone)]
pub struct DisorderSection {
    pub delta_xi: f64,
    pub realizations: usize,
    pub seed: u64,
}

impl Default for DisorderSection {
    fn default() -> Self {
        Self { delta_xi: 0.05, realizations: 1000, seed: 0 }
    }
}

/// Fully parsed run configuration.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub protocol: Option<Protocol>,
    pub dc: Option<DcChainConfig>,
    pub mw: Option<MwChainConfig>,
    pub numerics: NumericsSection,
    pub disorder: DisorderSection,
    pub readout: Option<ReadoutSection>,
}

/// `[readout]` section. Unlike [`ReadoutParams`] this tolerates κ = 0 so the
/// CLI can report the degenerate-coupling case instead of erroring.
#[derive(Debug, Clone)]
pub struct ReadoutSection {
    pub lq_ph: f64,
    pub iq_ua: f64,
    pub kappa: f64,
    pub tn_k: f64,
    pub omega_r_ghz: f64,
    pub q: f64,
}

impl ReadoutSection {
    pub fn params(&self) -> ReadoutParams {
        ReadoutParams {
            lq_ph: self.lq_ph,
            iq_ua: self.iq_ua,
            kappa: self.kappa,
            tn_k: self.tn_k,
            omega_r_ghz: self.omega_r_ghz,
            q: self.q,
        }
    }
}

impl RunConfig {
    pub fn from_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str(&text)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<Self> {
        let sections = parse_sections(text)?;
        let mut cfg = RunConfig::default();
        for (section, kv) in &sections {
            match section.as_str() {
                "chain" => parse_chain(kv, &mut cfg)?,
                "numerics" => parse_numerics(kv, &mut cfg.numerics)?,
                "disorder" => parse_disorder(kv, &mut cfg.disorder)?,
                "readout" => cfg.readout = Some(parse_readout(kv)?),
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown section [{other}]"
                    )))
                }
            }
        }
        Ok(cfg)
    }

    /// The dc chain config; errors unless the file declared `protocol = dc`.
    pub fn dc_config(&self) -> Result<&DcChainConfig> {
        match (&self.protocol, &self.dc) {
            (Some(Protocol::Dc), Some(c)) => Ok(c),
            _ => Err(Error::RunConfig(
                "this operation needs a [chain] section with protocol = dc".into(),
            )),
        }
    }

    /// The mw chain config; errors unless the file declared `protocol = mw`.
    pub fn mw_config(&self) -> Result<&MwChainConfig> {
        match (&self.protocol, &self.mw) {
            (Some(Protocol::Mw), Some(c)) => Ok(c),
            _ => Err(Error::RunConfig(
                "this operation needs a [chain] section with protocol = mw".into(),
            )),
        }
    }
}

type KeyValues = Vec<(String, String)>;

fn parse_sections(text: &str) -> Result<Vec<(String, KeyValues)>> {
    let mut out: Vec<(String, KeyValues)> = Vec::new();
    let mut seen_sections: Vec<String> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim().to_string();
            if seen_sections.contains(&name) {
                return Err(Error::InvalidConfig(format!(
                    "duplicate section [{name}] (line {})",
                    lineno + 1
                )));
            }
            seen_sections.push(name.clone());
            out.push((name, Vec::new()));
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::InvalidConfig(format!(
                "line {} is not `key = value`: {line:?}",
                lineno + 1
            )));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        let Some((_, kv)) = out.last_mut() else {
            return Err(Error::InvalidConfig(format!(
                "key {key:?} appears before any [section] (line {})",
                lineno + 1
            )));
        };
        if kv.iter().any(|(k, _)| *k == key) {
            return Err(Error::InvalidConfig(format!(
                "duplicate key {key:?} (line {})",
                lineno + 1
            )));
        }
        kv.push((key, value));
    }
    Ok(out)
}

fn parse_f64(section: &str, key: &str, value: &str) -> Result<f64> {
    value.parse().map_err(|_| {
        Error::InvalidConfig(format!("[{section}] {key}: not a number: {value:?}"))
    })
}

fn parse_usize(section: &str, key: &str, value: &str) -> Result<usize> {
    value.parse().map_err(|_| {
        Error::InvalidConfig(format!("[{section}] {key}: not a non-negative integer: {value:?}"))
    })
}

fn parse_list(section: &str, key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|s| parse_f64(section, key, s.trim()))
        .collect()
}

fn parse_chain(kv: &KeyValues, cfg: &mut RunConfig) -> Result<()> {
    let map: BTreeMap<&str, &str> =
        kv.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    let protocol = match map.get("protocol") {
        Some(&"dc") => Protocol::Dc,
        Some(&"mw") => Protocol::Mw,
        Some(other) => {
            return Err(Error::InvalidConfig(format!(
                "[chain] protocol must be dc or mw, got {other:?}"
            )))
        }
        None => {
            return Err(Error::InvalidConfig(
                "[chain] is missing the required key `protocol`".into(),
            ))
        }
    };
    cfg.protocol = Some(protocol);
    let known_dc = ["protocol", "N", "J_GHz", "lambda", "lambda_h", "Delta_GHz", "eps0_GHz", "r_GHz"];
    let known_mw = ["protocol", "N", "J_GHz", "lambda", "Delta_GHz", "omega_GHz", "Omega0_GHz", "r_GHz", "phases"];
    let known: &[&str] = match protocol {
        Protocol::Dc => &known_dc,
        Protocol::Mw => &known_mw,
    };
    for (k, _) in kv {
        if !known.contains(&k.as_str()) {
            return Err(Error::InvalidConfig(format!(
                "unknown key {k:?} in section [chain] for protocol {}",
                if protocol == Protocol::Dc { "dc" } else { "mw" }
            )));
        }
    }
    match protocol {
        Protocol::Dc => {
            let mut c = DcChainConfig::reference();
            if let Some(v) = map.get("N") {
                c.n_sites = parse_usize("chain", "N", v)?;
            }
            if let Some(v) = map.get("J_GHz") {
                c.j_ghz = parse_f64("chain", "J_GHz", v)?;
            }
            if let Some(v) = map.get("lambda") {
                c.lambda = parse_f64("chain", "lambda", v)?;
            }
            if let Some(v) = map.get("lambda_h") {
                c.lambda_h = parse_f64("chain", "lambda_h", v)?;
            }
            if let Some(v) = map.get("Delta_GHz") {
                c.delta_ghz = parse_f64("chain", "Delta_GHz", v)?;
            }
            if let Some(v) = map.get("eps0_GHz") {
                c.eps0_ghz = parse_f64("chain", "eps0_GHz", v)?;
            }
            if let Some(v) = map.get("r_GHz") {
                c.ramp_ghz = parse_f64("chain", "r_GHz", v)?;
            }
            c.validate()?;
            cfg.dc = Some(c);
        }
        Protocol::Mw => {
            let mut c = MwChainConfig::reference();
            if let Some(v) = map.get("N") {
                c.n_sites = parse_usize("chain", "N", v)?;
            }
            if let Some(v) = map.get("J_GHz") {
                c.j_ghz = parse_f64("chain", "J_GHz", v)?;
            }
            if let Some(v) = map.get("lambda") {
                c.lambda = parse_f64("chain", "lambda", v)?;
            }
            if let Some(v) = map.get("Delta_GHz") {
                c.delta_ghz = parse_f64("chain", "Delta_GHz", v)?;
            }
            if let Some(v) = map.get("omega_GHz") {
                c.omega_ghz = Some(parse_f64("chain", "omega_GHz", v)?);
            }
            if let Some(v) = map.get("Omega0_GHz") {
                c.omega0_ghz = parse_f64("chain", "Omega0_GHz", v)?;
            }
            if let Some(v) = map.get("r_GHz") {
                c.ramp_ghz = parse_f64("chain", "r_GHz", v)?;
            }
            if let Some(v) = map.get("phases") {
                c.phases = Some(parse_list("chain", "phases", v)?);
            }
            c.validate()?;
            cfg.mw = Some(c);
        }
    }
    Ok(())
}

fn parse_numerics(kv: &KeyValues, out: &mut NumericsSection) -> Result<()> {
    for (k, v) in kv {
        match k.as_str() {
            "t_final_ns" => out.t_final_ns = Some(parse_f64("numerics", k, v)?),
            "n_samples" => out.n_samples = parse_usize("numerics", k, v)?,
            "integrator" => {
                out.integrator = match v.as_str() {
                    "rk4" => IntegratorKind::Rk4,
                    "adaptive" => IntegratorKind::Adaptive,
                    other => {
                        return Err(Error::InvalidConfig(format!(
                            "[numerics] integrator must be rk4 or adaptive, got {other:?}"
                        )))
                    }
                }
            }
            "tol" => out.tol = parse_f64("numerics", k, v)?,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown key {other:?} in section [numerics]"
                )))
            }
        }
    }
    if out.n_samples < 1 {
        return Err(Error::InvalidConfig("[numerics] n_samples must be >= 1".into()));
    }
    if !(out.tol > 0.0) {
        return Err(Error::InvalidConfig("[numerics] tol must be > 0".into()));
    }
    Ok(())
}

fn parse_disorder(kv: &KeyValues, out: &mut DisorderSection) -> Result<()> {
    for (k, v) in kv {
        match k.as_str() {
            "delta_xi" => out.delta_xi = parse_f64("disorder", k, v)?,
            "realizations" => out.realizations = parse_usize("disorder", k, v)?,
            "seed" => {
                out.seed = v.parse().map_err(|_| {
                    Error::InvalidConfig(format!("[disorder] seed: not a u64: {v:?}"))
                })?
            }
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown key {other:?} in section [disorder]"
                )))
            }
        }
    }
    Ok(())
}

fn parse_readout(kv: &KeyValues) -> Result<ReadoutSection> {
    let mut out = ReadoutSection {
        lq_ph: 25.0,
        iq_ua: 0.25,
        kappa: 0.01,
        tn_k: 5.0,
        omega_r_ghz: 7.5,
        q: 75.0,
    };
    for (k, v) in kv {
        match k.as_str() {
            "Lq_pH" => out.lq_ph = parse_f64("readout", k, v)?,
            "Iq_uA" => out.iq_ua = parse_f64("readout", k, v)?,
            "kappa" => out.kappa = parse_f64("readout", k, v)?,
            "TN_K" => out.tn_k = parse_f64("readout", k, v)?,
            "omega_r_GHz" => out.omega_r_ghz = parse_f64("readout", k, v)?,
            "Q" => out.q = parse_f64("readout", k, v)?,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown key {other:?} in section [readout]"
                )))
            }
        }
    }
    Ok(out)
}
