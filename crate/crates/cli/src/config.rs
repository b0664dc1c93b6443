//! JSON descriptors.
//!
//! A profile pair looks like
//! `{"a": {"kind": "constant", "value": 1}, "mu": {"kind": "sinusoid", "mean": 1, "amplitude": 0.5}}`
//! and a patch habitat like `{"L0": 1, "l": 0.8, "z": 0.1, "m": 1}`.

use std::path::Path;

use pulsefront_core::profiles::build_patch_profiles;
use pulsefront_core::{PatchConfig, PeriodicProfile, ProfilePair};
use serde::Deserialize;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProfileDescriptor {
    Constant {
        value: f64,
    },
    Sinusoid {
        mean: f64,
        amplitude: f64,
        #[serde(default = "first_harmonic")]
        harmonic: u32,
    },
    ReciprocalSinusoid {
        eps: f64,
    },
    PiecewiseConstant {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    Grid {
        samples: Vec<f64>,
    },
}

fn first_harmonic() -> u32 {
    1
}

impl ProfileDescriptor {
    pub fn build(&self) -> Result<PeriodicProfile> {
        let p = match self {
            ProfileDescriptor::Constant { value } => PeriodicProfile::constant(*value),
            ProfileDescriptor::Sinusoid {
                mean,
                amplitude,
                harmonic,
            } => PeriodicProfile::sinusoid(*mean, *amplitude, *harmonic),
            ProfileDescriptor::ReciprocalSinusoid { eps } => PeriodicProfile::reciprocal_sinusoid(*eps),
            ProfileDescriptor::PiecewiseConstant { breakpoints, values } => {
                PeriodicProfile::piecewise(breakpoints.clone(), values.clone())?
            }
            ProfileDescriptor::Grid { samples } => PeriodicProfile::grid(samples.clone())?,
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDescriptor {
    pub a: ProfileDescriptor,
    pub mu: ProfileDescriptor,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchDescriptor {
    #[serde(rename = "L0")]
    pub l0: f64,
    pub l: f64,
    #[serde(default)]
    pub z: f64,
    pub m: f64,
}

impl PatchDescriptor {
    pub fn build(&self) -> Result<PatchConfig> {
        Ok(PatchConfig::new(self.l0, self.l, self.z, self.m)?)
    }
}

/// A parsed config file: either an explicit pair or a patch habitat, which
/// stands for `a ≡ 1` and the two-valued growth rate on the unit cell.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelConfig {
    Pair(ProfilePair),
    Patch(PatchConfig),
}

impl ModelConfig {
    pub fn profiles(&self) -> Result<ProfilePair> {
        match self {
            ModelConfig::Pair(p) => Ok(p.clone()),
            ModelConfig::Patch(cfg) => Ok(build_patch_profiles(cfg)?),
        }
    }
}

pub fn parse_config(text: &str) -> Result<ModelConfig> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Config("top level must be a JSON object".into()))?;
    if obj.contains_key("L0") {
        let desc: PatchDescriptor =
            serde_json::from_value(value).map_err(|e| Error::Config(format!("patch: {e}")))?;
        return Ok(ModelConfig::Patch(desc.build()?));
    }
    let desc: PairDescriptor =
        serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
    let pair = ProfilePair::new(desc.a.build()?, desc.mu.build()?)?;
    Ok(ModelConfig::Pair(pair))
}

pub fn load_config(path: &Path) -> Result<ModelConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}
