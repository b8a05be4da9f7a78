use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use biriesz::analysis::{NormExponents, DEFAULT_SEED, FUNCTIONAL_CAP};
use biriesz::fieldgrid::GridSpec;
use serde::Serialize;

/// A named experiment with string-valued parameter overrides. Parameters not
/// given here take the experiment's defaults; the resolved set is echoed
/// into the manifest.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub out_dir: Option<PathBuf>,
    /// Lift the N^{2n} sample cap.
    pub force: bool,
}

impl ExperimentConfig {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn set(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Applies a `key=value` override.
    pub fn apply_assignment(&mut self, assignment: &str) -> Result<()> {
        let Some((k, v)) = assignment.split_once('=') else {
            bail!("expected key=value, got {assignment:?}");
        };
        let k = k.trim();
        if k.is_empty() {
            bail!("empty key in {assignment:?}");
        }
        self.params.insert(k.to_string(), v.trim().to_string());
        Ok(())
    }

    /// Reads a TOML or JSON file (chosen by extension). Keys of the `grid`
    /// and `params` tables are taken as they are, other tables become dotted
    /// keys. `name` and `out_dir` at the top level are recognised.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let value: serde_json::Value = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?,
            Some("toml") => {
                let t: toml::Value =
                    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
                serde_json::to_value(t)?
            }
            _ => bail!("config must be .toml or .json: {}", path.display()),
        };
        let serde_json::Value::Object(top) = value else {
            bail!("config root must be a table");
        };
        let mut config = Self::default();
        for (key, v) in top {
            match key.as_str() {
                "name" => config.name = scalar(&key, &v)?,
                "out_dir" => config.out_dir = Some(PathBuf::from(scalar(&key, &v)?)),
                _ => flatten(&key, &v, &mut config.params)?,
            }
        }
        Ok(config)
    }
}

fn scalar(key: &str, v: &serde_json::Value) -> Result<String> {
    Ok(match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) => n.to_string(),
        serde_json::Value::Bool(b) => b.to_string(),
        serde_json::Value::Array(items) => items
            .iter()
            .map(|x| scalar(key, x))
            .collect::<Result<Vec<_>>>()?
            .join(","),
        _ => bail!("unsupported value for {key:?}"),
    })
}

fn flatten(key: &str, v: &serde_json::Value, out: &mut BTreeMap<String, String>) -> Result<()> {
    if let serde_json::Value::Object(table) = v {
        for (k, inner) in table {
            let name = if matches!(key, "grid" | "params") {
                k.clone()
            } else {
                format!("{key}.{k}")
            };
            flatten(&name, inner, out)?;
        }
        Ok(())
    } else {
        out.insert(key.to_string(), scalar(key, v)?);
        Ok(())
    }
}

/// Typed access to the parameters with recorded defaults.
#[derive(Debug)]
pub struct Params {
    given: BTreeMap<String, String>,
    resolved: BTreeMap<String, String>,
    force: bool,
}

impl Params {
    pub fn new(config: &ExperimentConfig) -> Self {
        Self {
            given: config.params.clone(),
            resolved: BTreeMap::new(),
            force: config.force,
        }
    }

    fn raw(&mut self, key: &str, default: String) -> String {
        let v = self.given.get(key).cloned().unwrap_or(default);
        self.resolved.insert(key.to_string(), v.clone());
        v
    }

    pub fn string(&mut self, key: &str, default: &str) -> String {
        self.raw(key, default.to_string())
    }

    pub fn f64(&mut self, key: &str, default: f64) -> Result<f64> {
        let v = self.raw(key, default.to_string());
        parse_f64(&v).with_context(|| format!("parameter {key}"))
    }

    pub fn usize(&mut self, key: &str, default: usize) -> Result<usize> {
        let v = self.raw(key, default.to_string());
        v.parse()
            .with_context(|| format!("parameter {key}: {v:?} is not a count"))
    }

    pub fn seed(&mut self, key: &str) -> Result<u64> {
        let v = self.raw(key, format!("{DEFAULT_SEED:#x}"));
        let parsed = match v.strip_prefix("0x") {
            Some(hex) => u64::from_str_radix(hex, 16),
            None => v.parse(),
        };
        parsed.with_context(|| format!("parameter {key}: {v:?} is not a seed"))
    }

    pub fn f64_list(&mut self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        let v = self.raw(key, join(default));
        split(&v)
            .map(parse_f64)
            .collect::<Result<_>>()
            .with_context(|| format!("parameter {key}"))
    }

    pub fn usize_list(&mut self, key: &str, default: &[usize]) -> Result<Vec<usize>> {
        let v = self.raw(key, join(default));
        split(&v)
            .map(|s| s.parse().map_err(anyhow::Error::from))
            .collect::<Result<_>>()
            .with_context(|| format!("parameter {key}"))
    }

    pub fn u32_list(&mut self, key: &str, default: &[u32]) -> Result<Vec<u32>> {
        Ok(self
            .usize_list(
                key,
                &default.iter().map(|&j| j as usize).collect::<Vec<_>>(),
            )?
            .into_iter()
            .map(|j| j as u32)
            .collect())
    }

    pub fn exponents(&mut self, key: &str, default: &str) -> Result<NormExponents> {
        let v = self.raw(key, default.to_string());
        parse_exponents(&v).with_context(|| format!("parameter {key}"))
    }

    /// A grid that respects the N^{2n} cap unless forced.
    pub fn grid(&mut self, dim: usize, points: usize, extent: f64) -> Result<GridSpec> {
        check_cap(dim, points, self.force)?;
        Ok(GridSpec::new(dim, points, extent)?)
    }

    pub fn force(&self) -> bool {
        self.force
    }

    /// The resolved parameters; unknown keys are an error.
    pub fn finish(self) -> Result<BTreeMap<String, String>> {
        let unknown: Vec<&String> = self
            .given
            .keys()
            .filter(|k| !self.resolved.contains_key(*k))
            .collect();
        if !unknown.is_empty() {
            bail!("unknown parameter(s): {unknown:?}");
        }
        Ok(self.resolved)
    }
}

pub fn check_cap(dim: usize, points: usize, force: bool) -> Result<()> {
    let samples = (points as f64).powi(2 * dim as i32);
    if samples > FUNCTIONAL_CAP as f64 && !force {
        bail!(
            "N^(2n) = {points}^{} exceeds the 2^24 sample cap; pass --force to run anyway",
            2 * dim
        );
    }
    Ok(())
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn split(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

fn parse_f64(s: &str) -> Result<f64> {
    if let Some((a, b)) = s.split_once('/') {
        return Ok(parse_f64(a)? / parse_f64(b)?);
    }
    match s.trim() {
        "inf" => Ok(f64::INFINITY),
        t => t.parse().with_context(|| format!("{t:?} is not a number")),
    }
}

/// "p1,p2,p" with "inf" allowed; the triple need not be Hölder.
pub fn parse_exponents(s: &str) -> Result<NormExponents> {
    let parts: Vec<f64> = split(s).map(parse_f64).collect::<Result<_>>()?;
    let [p1, p2, p] = parts[..] else {
        bail!("expected p1,p2,p, got {s:?}");
    };
    Ok(NormExponents::new(p1, p2, p)?)
}
