//! Flat key-value configuration: one dotted key per line (`a.b.c = v`),
//! `#` comments, parse errors reported with the file name and line
//! number. Typed run configurations for each command are assembled from
//! the raw entries and every referenced invariant is re-validated at
//! load, so malformed systems fail before any computation starts.

use crate::CliError;
use std::collections::BTreeMap;
use std::path::Path;
use thermo_neutral_core::{
    Horseshoe, LocallyConstantPotential, MarkovMeasure, Sft, ShiftMetric, TwoPotentialSystem,
};

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
    used: bool,
}

/// Raw parsed file; keys are consumed by the typed accessors and any
/// leftover key is reported as unknown.
#[derive(Debug)]
pub struct RawConfig {
    path: String,
    entries: BTreeMap<String, Entry>,
}

impl RawConfig {
    pub fn parse(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("{}: cannot read config: {e}", path.display()))
        })?;
        Self::parse_str(&path.display().to_string(), &text)
    }

    pub fn parse_str(path: &str, text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            let stripped = stripped.trim();
            if stripped.is_empty() {
                continue;
            }
            let Some((key, value)) = stripped.split_once('=') else {
                return Err(CliError::Config(format!(
                    "{path}:{line}: expected `key = value`, got `{stripped}`"
                )));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(CliError::Config(format!("{path}:{line}: empty key")));
            }
            if let Some(previous) = entries.insert(
                key.clone(),
                Entry {
                    value,
                    line,
                    used: false,
                },
            ) {
                return Err(CliError::Config(format!(
                    "{path}:{line}: key `{key}` already set on line {}",
                    previous.line
                )));
            }
        }
        Ok(RawConfig {
            path: path.to_string(),
            entries,
        })
    }

    fn err(&self, line: usize, message: &str) -> CliError {
        CliError::Config(format!("{}:{line}: {message}", self.path))
    }

    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        self.entries.get_mut(key).map(|e| {
            e.used = true;
            (e.value.clone(), e.line)
        })
    }

    pub fn str_opt(&mut self, key: &str) -> Option<(String, usize)> {
        self.take(key)
    }

    pub fn f64_opt(&mut self, key: &str) -> Result<Option<f64>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<f64>().map(Some).map_err(|_| {
                self.err(line, &format!("`{key}` must be a number, got `{v}`"))
            }),
        }
    }

    pub fn f64_or(&mut self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.f64_opt(key)?.unwrap_or(default))
    }

    pub fn usize_opt(&mut self, key: &str) -> Result<Option<usize>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<usize>().map(Some).map_err(|_| {
                self.err(line, &format!("`{key}` must be a nonnegative integer, got `{v}`"))
            }),
        }
    }

    pub fn usize_or(&mut self, key: &str, default: usize) -> Result<usize, CliError> {
        Ok(self.usize_opt(key)?.unwrap_or(default))
    }

    pub fn u64_or(&mut self, key: &str, default: u64) -> Result<u64, CliError> {
        match self.take(key) {
            None => Ok(default),
            Some((v, line)) => v.parse::<u64>().map_err(|_| {
                self.err(line, &format!("`{key}` must be a nonnegative integer, got `{v}`"))
            }),
        }
    }

    pub fn f64_list_opt(&mut self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => v
                .split(',')
                .map(|part| part.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|_| {
                    self.err(line, &format!("`{key}` must be a comma-separated list of numbers"))
                }),
        }
    }

    /// Rows separated by `;`, entries by `,`.
    #[allow(clippy::type_complexity)]
    pub fn f64_matrix_opt(&mut self, key: &str) -> Result<Option<Vec<Vec<f64>>>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => v
                .split(';')
                .map(|row| {
                    row.split(',')
                        .map(|part| part.trim().parse::<f64>())
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|_| {
                    self.err(line, &format!("`{key}` must be `;`-separated rows of numbers"))
                }),
        }
    }

    /// Adjacency rows: `11;10` or `1,1;1,0`.
    #[allow(clippy::type_complexity)]
    pub fn adjacency_opt(&mut self, key: &str) -> Result<Option<(Vec<Vec<u8>>, usize)>, CliError> {
        let Some((v, line)) = self.take(key) else {
            return Ok(None);
        };
        let mut rows = Vec::new();
        for row in v.split(';') {
            let row = row.trim();
            let parsed: Option<Vec<u8>> = if row.contains(',') {
                row.split(',')
                    .map(|p| p.trim().parse::<u8>().ok())
                    .collect()
            } else {
                row.chars().map(|c| c.to_digit(10).map(|d| d as u8)).collect()
            };
            match parsed {
                Some(r) if !r.is_empty() => rows.push(r),
                _ => {
                    return Err(self.err(
                        line,
                        &format!("`{key}` row `{row}` is not a 0/1 row"),
                    ))
                }
            }
        }
        Ok(Some((rows, line)))
    }

    /// Fails on any key never consumed by an accessor.
    pub fn finish(self) -> Result<(), CliError> {
        for (key, entry) in &self.entries {
            if !entry.used {
                return Err(CliError::Config(format!(
                    "{}:{}: unknown key `{key}`",
                    self.path, entry.line
                )));
            }
        }
        Ok(())
    }
}

/// The configured dynamical system.
#[derive(Debug, Clone)]
pub enum SystemSpec {
    Horseshoe(Horseshoe),
    Shift {
        sft: Sft,
        phi_u: LocallyConstantPotential,
        phi_s: LocallyConstantPotential,
    },
}

impl SystemSpec {
    pub fn two_potential_system(&self) -> Result<TwoPotentialSystem, CliError> {
        match self {
            SystemSpec::Horseshoe(h) => Ok(h.induced_system()),
            SystemSpec::Shift { sft, phi_u, phi_s } => {
                TwoPotentialSystem::new(sft.clone(), phi_u.clone(), phi_s.clone())
                    .map_err(|e| CliError::Config(format!("invalid system: {e}")))
            }
        }
    }

    pub fn sft(&self) -> Sft {
        match self {
            SystemSpec::Horseshoe(_) => Sft::full_shift(2),
            SystemSpec::Shift { sft, .. } => sft.clone(),
        }
    }
}

/// Default contraction pair of the bundled wide-contrast example.
pub fn default_horseshoe() -> Horseshoe {
    Horseshoe::new(0.9703, 0.9703f64.powi(117)).expect("bundled horseshoe is valid")
}

fn potential_from_key(
    raw: &mut RawConfig,
    key: &str,
    k: usize,
) -> Result<LocallyConstantPotential, CliError> {
    let Some(mat) = raw.f64_matrix_opt(key)? else {
        return Err(CliError::Config(format!(
            "{}: missing `{key}` for system.kind = sft",
            raw.path
        )));
    };
    if mat.len() == 1 {
        let row = mat.into_iter().next().unwrap();
        if row.len() != k {
            return Err(CliError::Config(format!(
                "{}: `{key}` has {} entries, expected {k}",
                raw.path,
                row.len()
            )));
        }
        Ok(LocallyConstantPotential::Depth1(row))
    } else {
        if mat.len() != k {
            return Err(CliError::Config(format!(
                "{}: `{key}` has {} rows, expected {k}",
                raw.path,
                mat.len()
            )));
        }
        for (i, row) in mat.iter().enumerate() {
            if row.len() != k {
                return Err(CliError::Config(format!(
                    "{}: `{key}` row {i} has {} entries, expected {k}",
                    raw.path,
                    row.len()
                )));
            }
        }
        Ok(LocallyConstantPotential::Depth2(mat))
    }
}

/// Reads `system.*` keys into a validated system.
pub fn read_system(raw: &mut RawConfig) -> Result<SystemSpec, CliError> {
    let kind = raw
        .str_opt("system.kind")
        .map(|(v, _)| v)
        .unwrap_or_else(|| "horseshoe".to_string());
    match kind.as_str() {
        "horseshoe" => {
            let defaults = default_horseshoe();
            let eta1 = raw.f64_or("system.eta1", defaults.eta1())?;
            let eta2 = raw.f64_or("system.eta2", defaults.eta2())?;
            let hs = Horseshoe::new(eta1, eta2)
                .map_err(|e| CliError::Config(format!("{}: {e}", raw.path)))?;
            Ok(SystemSpec::Horseshoe(hs))
        }
        "sft" => {
            let Some((rows, line)) = raw.adjacency_opt("system.adjacency")? else {
                return Err(CliError::Config(format!(
                    "{}: missing `system.adjacency` for system.kind = sft",
                    raw.path
                )));
            };
            let sft = Sft::new(rows).map_err(|e| raw.err(line, &format!("adjacency: {e}")))?;
            let k = sft.k();
            let phi_u = potential_from_key(raw, "system.phi_u", k)?;
            let phi_s = potential_from_key(raw, "system.phi_s", k)?;
            // Surface construction re-checks hyperbolicity and primitivity.
            TwoPotentialSystem::new(sft.clone(), phi_u.clone(), phi_s.clone())
                .map_err(|e| CliError::Config(format!("{}: invalid system: {e}", raw.path)))?;
            Ok(SystemSpec::Shift { sft, phi_u, phi_s })
        }
        other => Err(CliError::Config(format!(
            "{}: unknown system.kind `{other}` (expected `horseshoe` or `sft`)",
            raw.path
        ))),
    }
}

pub fn read_metric(raw: &mut RawConfig) -> Result<ShiftMetric, CliError> {
    let theta = raw.f64_or("metric.theta", (-1.0f64).exp())?;
    ShiftMetric::new(theta).map_err(|e| CliError::Config(format!("{}: {e}", raw.path)))
}

/// `r` (single value) or `r.grid` (list), returned sorted ascending.
pub fn read_rates(raw: &mut RawConfig, default: &[f64]) -> Result<Vec<f64>, CliError> {
    let single = raw.f64_opt("r")?;
    let grid = raw.f64_list_opt("r.grid")?;
    let mut rates = match (single, grid) {
        (Some(_), Some(_)) => {
            return Err(CliError::Config(format!(
                "{}: `r` and `r.grid` are mutually exclusive",
                raw.path
            )))
        }
        (Some(r), None) => vec![r],
        (None, Some(g)) => g,
        (None, None) => default.to_vec(),
    };
    if rates.is_empty() {
        return Err(CliError::Config(format!("{}: empty rate grid", raw.path)));
    }
    if rates.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Err(CliError::Config(format!(
            "{}: rates must be finite and nonnegative",
            raw.path
        )));
    }
    rates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(rates)
}

/// One axis of a parameter grid.
#[derive(Debug, Clone, Copy)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        (0..self.count)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64)
            .collect()
    }
}

pub fn read_axis(raw: &mut RawConfig, prefix: &str, default: GridAxis) -> Result<GridAxis, CliError> {
    let min = raw.f64_or(&format!("{prefix}.min"), default.min)?;
    let max = raw.f64_or(&format!("{prefix}.max"), default.max)?;
    let count = raw.usize_or(&format!("{prefix}.count"), default.count)?;
    if count == 0 || min.is_nan() || max.is_nan() || min > max {
        return Err(CliError::Config(format!(
            "{}: `{prefix}` must satisfy min <= max and count >= 1",
            raw.path
        )));
    }
    Ok(GridAxis { min, max, count })
}

/// Measure selection for the verification command.
pub fn read_measure(
    raw: &mut RawConfig,
    sft: &Sft,
    eigen_tol: f64,
) -> Result<MarkovMeasure, CliError> {
    let kind = raw
        .str_opt("measure.kind")
        .map(|(v, _)| v)
        .unwrap_or_else(|| "mme".to_string());
    let measure = match kind.as_str() {
        "mme" => {
            let zero = LocallyConstantPotential::constant(sft.k(), 0.0);
            let l = thermo_neutral_core::transfer_matrix(sft, &zero)?;
            let res = thermo_neutral_core::pressure(&l, eigen_tol)?;
            thermo_neutral_core::gibbs_markov(&l, &res)?
        }
        "bernoulli" => {
            let Some(probs) = raw.f64_list_opt("measure.probs")? else {
                return Err(CliError::Config(format!(
                    "{}: measure.kind = bernoulli needs `measure.probs`",
                    raw.path
                )));
            };
            MarkovMeasure::bernoulli(probs)
                .map_err(|e| CliError::Config(format!("{}: measure.probs: {e}", raw.path)))?
        }
        "markov" => {
            let Some(rows) = raw.f64_matrix_opt("measure.matrix")? else {
                return Err(CliError::Config(format!(
                    "{}: measure.kind = markov needs `measure.matrix`",
                    raw.path
                )));
            };
            MarkovMeasure::from_transition_matrix(rows)
                .map_err(|e| CliError::Config(format!("{}: measure.matrix: {e}", raw.path)))?
        }
        other => {
            return Err(CliError::Config(format!(
                "{}: unknown measure.kind `{other}` (expected mme, bernoulli, or markov)",
                raw.path
            )))
        }
    };
    if !measure.supported_on(sft) {
        return Err(CliError::Config(format!(
            "{}: measure is not supported on the configured shift",
            raw.path
        )));
    }
    Ok(measure)
}
