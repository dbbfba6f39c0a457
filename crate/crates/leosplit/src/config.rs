//! Line-oriented config files: `key = value` pairs under `[section]`
//! headers, `#` comments, and explicit unit suffixes on every dimensioned
//! value (`rate_down = 50 Mbps`, `data_size = 200 GB`, `t_con = 360 s`).
//!
//! A solve config carries exactly one input source: either the four inline
//! scenario sections `[satellite]`, `[cloud]`, `[request]`, `[weights]`, or
//! a `[sample]` block that draws a scenario from `[ranges]` (defaults
//! apply when `[ranges]` is absent). A sweep config carries a `[sweep]`
//! block plus the optional `[ranges]`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::model::{CloudSegment, InferenceRequest, SatelliteProfile, Scenario, Weights};
use crate::scenario::{
    sample_scenario, ParameterRanges, ScenarioError, SweepAxis, SweepSpec, DEFAULT_LAYERS,
};
use crate::units::{
    parse_quantity, parse_quantity_list, parse_range, Dimension, KBS_PER_MBS, KB_PER_GB,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing required section [{section}]")]
    MissingSection { section: &'static str },
    #[error("section [{section}]: missing required key '{key}'")]
    MissingKey {
        section: &'static str,
        key: &'static str,
    },
    #[error("config defines both an inline scenario and a [sample] block; exactly one input source is allowed")]
    BothSources,
    #[error("config defines no input source: add [satellite]/[cloud]/[request]/[weights] or a [sample] block")]
    NoSource,
}

/// Where a solve run gets its scenario from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ScenarioSource {
    Inline(Scenario),
    Sample {
        ranges: ParameterRanges,
        layers: usize,
        weights: Weights,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveConfig {
    pub source: ScenarioSource,
}

impl SolveConfig {
    /// The effective scenario, plus the seed that produced it when sampled.
    /// `seed_override` replaces the config seed for sampled sources and is
    /// ignored for inline ones.
    pub fn resolve(
        &self,
        seed_override: Option<u64>,
    ) -> Result<(Scenario, Option<u64>), ScenarioError> {
        match &self.source {
            ScenarioSource::Inline(scenario) => {
                scenario.validate()?;
                Ok((scenario.clone(), None))
            }
            ScenarioSource::Sample {
                ranges,
                layers,
                weights,
                seed,
            } => {
                let seed = seed_override.unwrap_or(*seed);
                let scenario = sample_scenario(ranges, *layers, *weights, seed)?;
                Ok((scenario, Some(seed)))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub spec: SweepSpec,
    pub ranges: ParameterRanges,
    pub layers: usize,
    pub weights: Weights,
}

// ---------------------------------------------------------------------------
// raw line format

struct Entry {
    value: String,
    line: usize,
}

struct Section {
    line: usize,
    entries: BTreeMap<String, Entry>,
}

fn parse_sections(text: &str) -> Result<BTreeMap<String, Section>, ConfigError> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::Parse {
                    line,
                    message: format!("malformed section header '{content}'"),
                })?
                .trim()
                .to_string();
            if sections.contains_key(&name) {
                return Err(ConfigError::Parse {
                    line,
                    message: format!("duplicate section [{name}]"),
                });
            }
            sections.insert(
                name.clone(),
                Section {
                    line,
                    entries: BTreeMap::new(),
                },
            );
            current = Some(name);
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Parse {
            line,
            message: format!("expected 'key = value', got '{content}'"),
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        let section_name = current.clone().ok_or_else(|| ConfigError::Parse {
            line,
            message: format!("key '{key}' appears before any [section] header"),
        })?;
        let section = sections
            .get_mut(&section_name)
            .expect("current section exists");
        if section.entries.contains_key(&key) {
            return Err(ConfigError::Parse {
                line,
                message: format!("duplicate key '{key}' in section [{section_name}]"),
            });
        }
        section.entries.insert(key, Entry { value, line });
    }
    Ok(sections)
}

/// Typed accessors over one section; every key must be consumed.
struct Reader {
    name: &'static str,
    section: Section,
}

impl Reader {
    fn take(
        sections: &mut BTreeMap<String, Section>,
        name: &'static str,
    ) -> Result<Self, ConfigError> {
        let section = sections
            .remove(name)
            .ok_or(ConfigError::MissingSection { section: name })?;
        Ok(Self { name, section })
    }

    fn take_optional(sections: &mut BTreeMap<String, Section>, name: &'static str) -> Option<Self> {
        sections.remove(name).map(|section| Self { name, section })
    }

    fn raw(&mut self, key: &'static str) -> Result<(String, usize), ConfigError> {
        self.raw_opt(key).ok_or(ConfigError::MissingKey {
            section: self.name,
            key,
        })
    }

    fn raw_opt(&mut self, key: &'static str) -> Option<(String, usize)> {
        self.section.entries.remove(key).map(|e| (e.value, e.line))
    }

    fn quantity(&mut self, key: &'static str, dim: Dimension) -> Result<f64, ConfigError> {
        let (value, line) = self.raw(key)?;
        parse_quantity(&value, dim).map_err(|message| ConfigError::Parse {
            line,
            message: format!("{key}: {message}"),
        })
    }

    fn quantity_opt(
        &mut self,
        key: &'static str,
        dim: Dimension,
    ) -> Result<Option<f64>, ConfigError> {
        match self.raw_opt(key) {
            Some((value, line)) => {
                parse_quantity(&value, dim)
                    .map(Some)
                    .map_err(|message| ConfigError::Parse {
                        line,
                        message: format!("{key}: {message}"),
                    })
            }
            None => Ok(None),
        }
    }

    fn range_opt(
        &mut self,
        key: &'static str,
        dim: Dimension,
    ) -> Result<Option<(f64, f64)>, ConfigError> {
        match self.raw_opt(key) {
            Some((value, line)) => {
                parse_range(&value, dim)
                    .map(Some)
                    .map_err(|message| ConfigError::Parse {
                        line,
                        message: format!("{key}: {message}"),
                    })
            }
            None => Ok(None),
        }
    }

    fn bool(&mut self, key: &'static str) -> Result<bool, ConfigError> {
        self.bool_opt(key)?.ok_or(ConfigError::MissingKey {
            section: self.name,
            key,
        })
    }

    fn bool_opt(&mut self, key: &'static str) -> Result<Option<bool>, ConfigError> {
        match self.raw_opt(key) {
            Some((value, line)) => match value.as_str() {
                "true" => Ok(Some(true)),
                "false" => Ok(Some(false)),
                other => Err(ConfigError::Parse {
                    line,
                    message: format!("{key}: expected 'true' or 'false', got '{other}'"),
                }),
            },
            None => Ok(None),
        }
    }

    fn integer_opt(&mut self, key: &'static str) -> Result<Option<u64>, ConfigError> {
        match self.raw_opt(key) {
            Some((value, line)) => value
                .parse::<u64>()
                .map(Some)
                .map_err(|_| ConfigError::Parse {
                    line,
                    message: format!("{key}: expected a non-negative integer, got '{value}'"),
                }),
            None => Ok(None),
        }
    }

    fn finish(self) -> Result<(), ConfigError> {
        if let Some((key, entry)) = self.section.entries.into_iter().next() {
            return Err(ConfigError::Parse {
                line: entry.line,
                message: format!("unknown key '{key}' in section [{}]", self.name),
            });
        }
        Ok(())
    }
}

fn finish_sections(sections: BTreeMap<String, Section>) -> Result<(), ConfigError> {
    if let Some((name, section)) = sections.into_iter().next() {
        return Err(ConfigError::Parse {
            line: section.line,
            message: format!("unknown section [{name}] for this mode"),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// section interpreters

fn read_satellite(
    sections: &mut BTreeMap<String, Section>,
) -> Result<SatelliteProfile, ConfigError> {
    let mut r = Reader::take(sections, "satellite")?;
    let profile = SatelliteProfile {
        beta: r.quantity("beta", Dimension::LatencyPerKb)?,
        zeta: r.quantity("zeta", Dimension::Rate)?,
        p_max: r.quantity("p_max", Dimension::Power)?,
        p_idle: r.quantity("p_idle", Dimension::Power)?,
        p_leak: r.quantity("p_leak", Dimension::Power)?,
        p_off: r.quantity("p_off", Dimension::Power)?,
        rate_down: r.quantity("rate_down", Dimension::Rate)?,
        t_cyc: r.quantity("t_cyc", Dimension::Time)?,
        t_con: r.quantity("t_con", Dimension::Time)?,
    };
    r.finish()?;
    Ok(profile)
}

fn read_cloud(sections: &mut BTreeMap<String, Section>) -> Result<CloudSegment, ConfigError> {
    let mut r = Reader::take(sections, "cloud")?;
    let cloud = CloudSegment {
        gamma: r.quantity("gamma", Dimension::LatencyPerKb)?,
        gamma_max: r.quantity("gamma_max", Dimension::LatencyPerKb)?,
        rate_gs_dc: r.quantity("rate_gs_dc", Dimension::Rate)?,
        colocated: r.bool("colocated")?,
    };
    r.finish()?;
    Ok(cloud)
}

fn read_request(sections: &mut BTreeMap<String, Section>) -> Result<InferenceRequest, ConfigError> {
    let mut r = Reader::take(sections, "request")?;
    let data_size = r.quantity("data_size", Dimension::Data)?;
    let (alphas_text, line) = r.raw("alphas")?;
    let alphas = parse_quantity_list(&alphas_text, Dimension::Pure).map_err(|message| {
        ConfigError::Parse {
            line,
            message: format!("alphas: {message}"),
        }
    })?;
    r.finish()?;
    Ok(InferenceRequest { data_size, alphas })
}

fn read_weights(r: &mut Reader) -> Result<Weights, ConfigError> {
    let mu = r.quantity_opt("mu", Dimension::Pure)?;
    let lambda = r.quantity_opt("lambda", Dimension::Pure)?;
    Ok(match (mu, lambda) {
        (Some(mu), Some(lambda)) => Weights { mu, lambda },
        (Some(mu), None) => Weights {
            mu,
            lambda: 1.0 - mu,
        },
        (None, Some(lambda)) => Weights::from_lambda(lambda),
        (None, None) => Weights::balanced(),
    })
}

fn read_ranges(sections: &mut BTreeMap<String, Section>) -> Result<ParameterRanges, ConfigError> {
    let mut ranges = ParameterRanges::default();
    let Some(mut r) = Reader::take_optional(sections, "ranges") else {
        return Ok(ranges);
    };
    if let Some(v) = r.range_opt("rate_down", Dimension::Rate)? {
        ranges.rate_down = v;
    }
    if let Some(v) = r.range_opt("beta", Dimension::LatencyPerKb)? {
        ranges.beta = v;
    }
    if let Some(v) = r.range_opt("gamma", Dimension::LatencyPerKb)? {
        ranges.gamma = v;
    }
    if let Some(v) = r.range_opt("alpha_base", Dimension::Pure)? {
        ranges.alpha_base = v;
    }
    if let Some(v) = r.range_opt("p_max", Dimension::Power)? {
        ranges.p_max = v;
    }
    if let Some(v) = r.range_opt("data_size", Dimension::Data)? {
        ranges.data_size = v;
    }
    if let Some(v) = r.quantity_opt("t_cyc", Dimension::Time)? {
        ranges.t_cyc = v;
    }
    if let Some(v) = r.quantity_opt("t_con", Dimension::Time)? {
        ranges.t_con = v;
    }
    if let Some(v) = r.quantity_opt("zeta", Dimension::Rate)? {
        ranges.zeta = v;
    }
    if let Some(v) = r.quantity_opt("p_idle", Dimension::Power)? {
        ranges.p_idle = v;
    }
    if let Some(v) = r.quantity_opt("p_leak", Dimension::Power)? {
        ranges.p_leak = v;
    }
    if let Some(v) = r.quantity_opt("p_off", Dimension::Power)? {
        ranges.p_off = v;
    }
    if let Some(v) = r.quantity_opt("rate_gs_dc", Dimension::Rate)? {
        ranges.rate_gs_dc = v;
    }
    if let Some(v) = r.quantity_opt("gamma_max", Dimension::LatencyPerKb)? {
        ranges.gamma_max = v;
    }
    if let Some(v) = r.bool_opt("colocated")? {
        ranges.colocated = v;
    }
    r.finish()?;
    Ok(ranges)
}

/// `a:b` is the lambda:mu ratio; a bare number is lambda itself.
fn parse_weight_point(token: &str) -> Result<f64, String> {
    if let Some((lambda_text, mu_text)) = token.split_once(':') {
        let lambda: f64 = lambda_text
            .trim()
            .parse()
            .map_err(|_| format!("cannot parse '{}' in ratio '{token}'", lambda_text.trim()))?;
        let mu: f64 = mu_text
            .trim()
            .parse()
            .map_err(|_| format!("cannot parse '{}' in ratio '{token}'", mu_text.trim()))?;
        if lambda < 0.0 || mu < 0.0 || lambda + mu == 0.0 {
            return Err(format!(
                "ratio '{token}' must have non-negative parts and a positive sum"
            ));
        }
        Ok(lambda / (lambda + mu))
    } else {
        token
            .trim()
            .parse()
            .map_err(|_| format!("cannot parse '{token}' as a lambda weight"))
    }
}

fn read_points(axis: SweepAxis, text: &str) -> Result<Vec<f64>, String> {
    match axis {
        SweepAxis::DataSize => Ok(parse_quantity_list(text, Dimension::Data)?
            .into_iter()
            .map(|kb| kb / KB_PER_GB)
            .collect()),
        SweepAxis::RateDown => Ok(parse_quantity_list(text, Dimension::Rate)?
            .into_iter()
            .map(|kbs| kbs / KBS_PER_MBS)
            .collect()),
        SweepAxis::WeightRatio => text.split(',').map(parse_weight_point).collect(),
    }
}

// ---------------------------------------------------------------------------
// public entry points

pub fn parse_solve_config(text: &str) -> Result<SolveConfig, ConfigError> {
    let mut sections = parse_sections(text)?;
    let inline = ["satellite", "cloud", "request", "weights"]
        .iter()
        .any(|name| sections.contains_key(*name));
    let sampled = sections.contains_key("sample");

    let source = match (inline, sampled) {
        (true, true) => return Err(ConfigError::BothSources),
        (false, false) => return Err(ConfigError::NoSource),
        (true, false) => {
            let satellite = read_satellite(&mut sections)?;
            let cloud = read_cloud(&mut sections)?;
            let request = read_request(&mut sections)?;
            let mut r = Reader::take(&mut sections, "weights")?;
            let weights = read_weights(&mut r)?;
            r.finish()?;
            ScenarioSource::Inline(Scenario {
                satellite,
                cloud,
                request,
                weights,
            })
        }
        (false, true) => {
            let ranges = read_ranges(&mut sections)?;
            let mut r = Reader::take(&mut sections, "sample")?;
            let layers = r.integer_opt("layers")?.unwrap_or(DEFAULT_LAYERS as u64) as usize;
            let seed = r.integer_opt("seed")?.unwrap_or(0);
            let weights = read_weights(&mut r)?;
            r.finish()?;
            ScenarioSource::Sample {
                ranges,
                layers,
                weights,
                seed,
            }
        }
    };
    finish_sections(sections)?;
    Ok(SolveConfig { source })
}

pub fn parse_sweep_config(text: &str) -> Result<SweepConfig, ConfigError> {
    let mut sections = parse_sections(text)?;
    let ranges = read_ranges(&mut sections)?;
    let mut r = Reader::take(&mut sections, "sweep")?;

    let (axis_text, axis_line) = r.raw("axis")?;
    let axis = match axis_text.as_str() {
        "data_size" => SweepAxis::DataSize,
        "rate_down" => SweepAxis::RateDown,
        "weight_ratio" => SweepAxis::WeightRatio,
        other => {
            return Err(ConfigError::Parse {
                line: axis_line,
                message: format!(
                    "axis: expected data_size, rate_down or weight_ratio, got '{other}'"
                ),
            })
        }
    };
    let (points_text, points_line) = r.raw("points")?;
    let points = read_points(axis, &points_text).map_err(|message| ConfigError::Parse {
        line: points_line,
        message: format!("points: {message}"),
    })?;
    let replications = r.integer_opt("replications")?.unwrap_or(1) as usize;
    let seed = r.integer_opt("seed")?.unwrap_or(0);
    let layers = r.integer_opt("layers")?.unwrap_or(DEFAULT_LAYERS as u64) as usize;
    let weights = read_weights(&mut r)?;
    r.finish()?;
    finish_sections(sections)?;

    Ok(SweepConfig {
        spec: SweepSpec {
            axis,
            points,
            replications,
            seed,
        },
        ranges,
        layers,
        weights,
    })
}
