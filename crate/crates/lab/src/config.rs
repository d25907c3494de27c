//! Flat key-value experiment configs.
//!
//! ```text
//! # comment
//! seed = 7
//! levels = 1,2,3
//!
//! [spec.geo]
//! kind = geometric
//! x = 1.5
//! epsilon = 0.5
//! ```
//!
//! A `[section]` line prefixes the keys below it with `section.`; dotted keys
//! may also be written out in full. Specs live under `spec.<id>.*`; the short
//! form `spec.<field>` names the spec `main`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use cantor_zeros::events::YMode;
use cantor_zeros::sequences::{SequenceKind, SequenceSpec};
use sha2::{Digest, Sha256};

use crate::error::ConfigError;

/// CSV emitters a run can enable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Output {
    Classify,
    Tree,
    Moments,
    Census,
    Lil,
    Cuts,
    Bounds,
    Paths,
}

impl Output {
    pub const ALL: [Output; 8] = [
        Output::Classify,
        Output::Tree,
        Output::Moments,
        Output::Census,
        Output::Lil,
        Output::Cuts,
        Output::Bounds,
        Output::Paths,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Output::Classify => "classify",
            Output::Tree => "tree",
            Output::Moments => "moments",
            Output::Census => "census",
            Output::Lil => "lil",
            Output::Cuts => "cuts",
            Output::Bounds => "bounds",
            Output::Paths => "paths",
        }
    }
}

impl FromStr for Output {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Output::ALL.into_iter().find(|o| o.name() == s).ok_or(())
    }
}

/// A sequence spec with its identifier in output tables.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedSpec {
    pub id: String,
    pub spec: SequenceSpec,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub specs: Vec<NamedSpec>,
    pub depth: usize,
    pub levels: Vec<usize>,
    pub replicates: u64,
    pub refine_depth: u32,
    pub y_mode: YMode,
    pub seed: u64,
    pub oracle: bool,
    pub outputs: Vec<Output>,
    pub workers: usize,
    /// Proxy level for cut probabilities.
    pub cut_level: usize,
    /// Windows `|J| = k^{-m}`, `m = 1..=cut_windows`.
    pub cut_windows: usize,
    pub lil_anchors: Vec<f64>,
    pub lil_depth: usize,
    pub census_levels: Vec<usize>,
    /// Largest level for conditional-sum tables.
    pub bounds_level: usize,
    pub zone_p_hat: Option<f64>,
    pub zone_c1_hat: Option<f64>,
}

const TOP_KEYS: &[&str] = &[
    "name",
    "depth",
    "levels",
    "replicates",
    "refine_depth",
    "y_mode",
    "seed",
    "oracle",
    "outputs",
    "workers",
    "cuts.level",
    "cuts.windows",
    "lil.anchors",
    "lil.depth",
    "census.levels",
    "bounds.level",
    "zone.p_hat",
    "zone.c1_hat",
];

const SPEC_FIELDS: &[&str] = &["kind", "x", "d", "a", "table", "branching", "epsilon"];

/// Splits config text into a key → value map.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    let mut prefix = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let section = rest.strip_suffix(']').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                msg: "unterminated section header".into(),
            })?;
            let section = section.trim();
            if section.is_empty() || section.contains(char::is_whitespace) {
                return Err(ConfigError::Syntax {
                    line: i + 1,
                    msg: "invalid section name".into(),
                });
            }
            prefix = format!("{section}.");
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: i + 1,
            msg: "expected `key = value`".into(),
        })?;
        let k = k.trim();
        if k.is_empty() || k.contains(char::is_whitespace) {
            return Err(ConfigError::Syntax {
                line: i + 1,
                msg: "invalid key".into(),
            });
        }
        let key = format!("{prefix}{k}");
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(ConfigError::Duplicate(key));
        }
    }
    Ok(map)
}

fn value<T: FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse().map_err(|_| ConfigError::BadValue {
        key: key.into(),
        value: v.into(),
    })
}

fn list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>, ConfigError> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| value(key, s))
        .collect()
}

fn boolean(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(ConfigError::BadValue {
            key: key.into(),
            value: v.into(),
        }),
    }
}

fn build_spec(id: &str, fields: &BTreeMap<String, String>) -> Result<NamedSpec, ConfigError> {
    let key = |f: &str| format!("spec.{id}.{f}");
    let get = |f: &str| -> Result<f64, ConfigError> {
        let v = fields.get(f).ok_or_else(|| ConfigError::Missing(key(f)))?;
        value(&key(f), v)
    };
    let kind_name = fields
        .get("kind")
        .ok_or_else(|| ConfigError::Missing(key("kind")))?;
    let kind = match kind_name.as_str() {
        "geometric" => SequenceKind::Geometric { x: get("x")? },
        "power" => SequenceKind::Power { d: get("d")? },
        "constant" => SequenceKind::Constant { a: get("a")? },
        "inverse_log_sqrt" => SequenceKind::InverseLogSqrt,
        "linear" => SequenceKind::Linear,
        "custom" => {
            let t = fields
                .get("table")
                .ok_or_else(|| ConfigError::Missing(key("table")))?;
            SequenceKind::Custom(list(&key("table"), t)?)
        }
        other => {
            return Err(ConfigError::BadValue {
                key: key("kind"),
                value: other.into(),
            })
        }
    };
    let branching = match fields.get("branching") {
        Some(v) => value(&key("branching"), v)?,
        None => 2,
    };
    let epsilon = get("epsilon")?;
    let spec = SequenceSpec::new(kind, branching, epsilon)
        .map_err(|e| ConfigError::Invalid(format!("spec `{id}`: {e}")))?;
    Ok(NamedSpec {
        id: id.into(),
        spec,
    })
}

fn kind_fields(kind: &SequenceKind) -> Vec<(&'static str, String)> {
    match kind {
        SequenceKind::Geometric { x } => vec![("kind", "geometric".into()), ("x", x.to_string())],
        SequenceKind::Power { d } => vec![("kind", "power".into()), ("d", d.to_string())],
        SequenceKind::Constant { a } => vec![("kind", "constant".into()), ("a", a.to_string())],
        SequenceKind::InverseLogSqrt => vec![("kind", "inverse_log_sqrt".into())],
        SequenceKind::Linear => vec![("kind", "linear".into())],
        SequenceKind::Custom(t) => vec![("kind", "custom".into()), ("table", join(t))],
    }
}

/// Short human-readable label, e.g. `geometric(x=1.5)`.
pub fn kind_label(kind: &SequenceKind) -> String {
    let f = kind_fields(kind);
    let name = &f[0].1;
    match kind {
        SequenceKind::Custom(t) => format!("custom({} entries)", t.len()),
        _ if f.len() > 1 => format!("{name}({}={})", f[1].0, f[1].1),
        _ => name.clone(),
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn y_mode_name(m: YMode) -> &'static str {
    match m {
        YMode::Exact => "exact",
        YMode::Refine(_) => "refine",
        YMode::Endpoints => "endpoints",
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::from_pairs(&parse_pairs(text)?)
    }

    pub fn from_pairs(map: &BTreeMap<String, String>) -> Result<Self, ConfigError> {
        let mut specs: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        for (k, v) in map {
            if let Some(rest) = k.strip_prefix("spec.") {
                let (id, field) = match rest.split_once('.') {
                    Some((id, f)) => (id, f),
                    None => ("main", rest),
                };
                if !SPEC_FIELDS.contains(&field) || id.is_empty() {
                    return Err(ConfigError::UnknownKey(k.clone()));
                }
                specs
                    .entry(id.into())
                    .or_default()
                    .insert(field.into(), v.clone());
            } else if !TOP_KEYS.contains(&k.as_str()) {
                return Err(ConfigError::UnknownKey(k.clone()));
            }
        }
        if specs.is_empty() {
            return Err(ConfigError::Missing("spec.<id>.kind".into()));
        }
        let specs = specs
            .iter()
            .map(|(id, f)| build_spec(id, f))
            .collect::<Result<Vec<_>, _>>()?;

        let get = |k: &str| map.get(k).map(String::as_str);
        let depth: usize = match get("depth") {
            Some(v) => value("depth", v)?,
            None => 8,
        };
        let levels = match get("levels") {
            Some(v) => list("levels", v)?,
            None => (1..=depth.min(6)).collect(),
        };
        let refine_depth = match get("refine_depth") {
            Some(v) => value("refine_depth", v)?,
            None => cantor_zeros::events::DEFAULT_REFINE_DEPTH,
        };
        let y_mode = match get("y_mode").unwrap_or("exact") {
            "exact" => YMode::Exact,
            "refine" => YMode::Refine(refine_depth),
            "endpoints" => YMode::Endpoints,
            other => {
                return Err(ConfigError::BadValue {
                    key: "y_mode".into(),
                    value: other.into(),
                })
            }
        };
        let outputs = match get("outputs") {
            Some(v) => {
                let mut o: Vec<Output> = v
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse().map_err(|_| ConfigError::BadValue {
                            key: "outputs".into(),
                            value: s.into(),
                        })
                    })
                    .collect::<Result<_, _>>()?;
                o.sort();
                o.dedup();
                o
            }
            None => Output::ALL.to_vec(),
        };
        let opt_f64 = |k: &str| get(k).map(|v| value::<f64>(k, v)).transpose();
        let cfg = Self {
            name: get("name").unwrap_or("experiment").to_string(),
            specs,
            depth,
            census_levels: match get("census.levels") {
                Some(v) => list("census.levels", v)?,
                None => levels.clone(),
            },
            levels,
            replicates: match get("replicates") {
                Some(v) => value("replicates", v)?,
                None => 10_000,
            },
            refine_depth,
            y_mode,
            seed: match get("seed") {
                Some(v) => value("seed", v)?,
                None => 1,
            },
            oracle: match get("oracle") {
                Some(v) => boolean("oracle", v)?,
                None => true,
            },
            outputs,
            workers: match get("workers") {
                Some(v) => value("workers", v)?,
                None => 1,
            },
            cut_level: match get("cuts.level") {
                Some(v) => value("cuts.level", v)?,
                None => depth.min(10),
            },
            cut_windows: match get("cuts.windows") {
                Some(v) => value("cuts.windows", v)?,
                None => 6,
            },
            lil_anchors: match get("lil.anchors") {
                Some(v) => list("lil.anchors", v)?,
                None => vec![1.0, 2.0],
            },
            lil_depth: match get("lil.depth") {
                Some(v) => value("lil.depth", v)?,
                None => depth,
            },
            bounds_level: match get("bounds.level") {
                Some(v) => value("bounds.level", v)?,
                None => depth.min(8),
            },
            zone_p_hat: opt_f64("zone.p_hat")?,
            zone_c1_hat: opt_f64("zone.c1_hat")?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: &str| Err(ConfigError::Invalid(m.into()));
        if self.replicates < 1 {
            return invalid("replicates must be at least 1");
        }
        if self.levels.is_empty() {
            return invalid("levels must not be empty");
        }
        if self.levels.contains(&0) {
            return invalid("levels start at 1");
        }
        let deepest = self
            .levels
            .iter()
            .chain(&self.census_levels)
            .copied()
            .max()
            .unwrap_or(0);
        if self.depth < *self.levels.iter().max().unwrap() {
            return invalid("depth must be at least max(levels)");
        }
        if deepest > cantor_zeros::analysis::CENSUS_MAX_LEVEL {
            return invalid("census levels must not exceed 40");
        }
        if !self.refine_depth.is_power_of_two() {
            return invalid("refine_depth must be a power of two");
        }
        if self.workers < 1 {
            return invalid("workers must be at least 1");
        }
        if self.cut_level > self.depth
            || self.lil_depth > self.depth
            || self.bounds_level > self.depth
        {
            return invalid("cuts.level, lil.depth and bounds.level must not exceed depth");
        }
        let ids: std::collections::BTreeSet<_> = self.specs.iter().map(|s| &s.id).collect();
        if ids.len() != self.specs.len() {
            return invalid("spec ids must be unique");
        }
        Ok(())
    }

    /// Sorted `key = value` rendering with every default filled in.
    pub fn canonical(&self) -> String {
        let mut m: BTreeMap<String, String> = BTreeMap::new();
        m.insert("name".into(), self.name.clone());
        m.insert("depth".into(), self.depth.to_string());
        m.insert("levels".into(), join(&self.levels));
        m.insert("replicates".into(), self.replicates.to_string());
        m.insert("refine_depth".into(), self.refine_depth.to_string());
        m.insert("y_mode".into(), y_mode_name(self.y_mode).into());
        m.insert("seed".into(), self.seed.to_string());
        m.insert("oracle".into(), self.oracle.to_string());
        let outs: Vec<&str> = self.outputs.iter().map(|o| o.name()).collect();
        m.insert("outputs".into(), outs.join(","));
        m.insert("cuts.level".into(), self.cut_level.to_string());
        m.insert("cuts.windows".into(), self.cut_windows.to_string());
        m.insert("lil.anchors".into(), join(&self.lil_anchors));
        m.insert("lil.depth".into(), self.lil_depth.to_string());
        m.insert("census.levels".into(), join(&self.census_levels));
        m.insert("bounds.level".into(), self.bounds_level.to_string());
        if let Some(p) = self.zone_p_hat {
            m.insert("zone.p_hat".into(), p.to_string());
        }
        if let Some(c) = self.zone_c1_hat {
            m.insert("zone.c1_hat".into(), c.to_string());
        }
        for s in &self.specs {
            for (f, v) in kind_fields(&s.spec.kind) {
                m.insert(format!("spec.{}.{f}", s.id), v);
            }
            m.insert(
                format!("spec.{}.branching", s.id),
                s.spec.branching.to_string(),
            );
            m.insert(format!("spec.{}.epsilon", s.id), s.spec.epsilon.to_string());
        }
        let mut out = String::new();
        for (k, v) in m {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    /// SHA-256 of [`canonical`](Self::canonical), hex encoded. Worker count
    /// does not affect outputs and is excluded.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn enabled(&self, o: Output) -> bool {
        self.outputs.contains(&o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "seed = 3\n[spec]\nkind = geometric\nx = 1.5\nepsilon = 0.5\n";

    #[test]
    fn sections_and_defaults() {
        let c = ExperimentConfig::parse(MINIMAL).unwrap();
        assert_eq!(c.specs.len(), 1);
        assert_eq!(c.specs[0].id, "main");
        assert_eq!(c.seed, 3);
        assert_eq!(c.levels, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(c.outputs, Output::ALL.to_vec());
    }

    #[test]
    fn canonical_form_round_trips() {
        let c = ExperimentConfig::parse(MINIMAL).unwrap();
        let again = ExperimentConfig::parse(&c.canonical()).unwrap();
        assert_eq!(c, again);
        assert_eq!(c.hash(), again.hash());
    }

    #[test]
    fn rejects_bad_input() {
        let bad = [
            ("replicates = 0\n", "replicates"),
            ("refine_depth = 100\n", "power of two"),
            ("depth = 3\nlevels = 4\n", "depth"),
            ("bogus = 1\n", "bogus"),
            ("seed = x\n", "seed"),
        ];
        for (extra, needle) in bad {
            let err = ExperimentConfig::parse(&format!("{extra}{MINIMAL}")).unwrap_err();
            assert!(err.to_string().contains(needle), "{err}");
        }
        assert!(matches!(
            parse_pairs("a = 1\na = 2"),
            Err(ConfigError::Duplicate(_))
        ));
        assert!(matches!(
            parse_pairs("[oops\n"),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_pairs("novalue\n"),
            Err(ConfigError::Syntax { .. })
        ));
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::parse(MINIMAL).unwrap();
        let b = ExperimentConfig::parse(&MINIMAL.replace("seed = 3", "seed = 4")).unwrap();
        assert_ne!(a.hash(), b.hash());
        let c = ExperimentConfig::parse(&format!("workers = 4\n{MINIMAL}")).unwrap();
        assert_eq!(a.hash(), c.hash());
    }
}
