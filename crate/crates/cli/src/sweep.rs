use std::f64::consts::TAU;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail};
use gradchain_core::export::fmt12;
use gradchain_core::units::parse_quantity;
use rayon::prelude::*;
use serde_json::Value;

use crate::commands::{config_from_value, couplings_for, read_config_value, solve};
use crate::failure::{CmdResult, Failure};
use crate::output::{plot_columns, sibling, write_text, OutputOptions};

pub const THREADS_ENV: &str = "GRADCHAIN_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Scale {
    Lin,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    /// Largest |J_nl|/2π, Hz.
    MaxJ,
    /// Validity parameter.
    Epsilon,
    /// Δ_j/2π for ion j (1-based), Hz.
    DeltaShift(usize),
    /// Closed-form J estimate /2π, Hz.
    ApproxJ,
}

impl FromStr for Quantity {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s {
            "max_J" => return Ok(Quantity::MaxJ),
            "epsilon" => return Ok(Quantity::Epsilon),
            "approx_J" => return Ok(Quantity::ApproxJ),
            _ => {}
        }
        if let Some(j) = s.strip_prefix("delta_shift[").and_then(|r| r.strip_suffix(']')) {
            let j: usize = j.parse().map_err(|_| anyhow!("bad ion index in `{s}`"))?;
            if j == 0 {
                bail!("ion indices start at 1 in `{s}`");
            }
            return Ok(Quantity::DeltaShift(j));
        }
        bail!("unknown quantity `{s}` (expected max_J, epsilon, delta_shift[j] or approx_J)")
    }
}

impl Quantity {
    fn column(self) -> String {
        match self {
            Quantity::MaxJ => "max_J_hz".into(),
            Quantity::Epsilon => "epsilon".into(),
            Quantity::DeltaShift(j) => format!("delta_shift_{j}_hz"),
            Quantity::ApproxJ => "approx_J_hz".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub path: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub scale: Scale,
    pub quantity: Quantity,
}

impl SweepSpec {
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.steps < 2 {
            bail!("--steps must be at least 2, got {}", self.steps);
        }
        if !self.from.is_finite() || !self.to.is_finite() {
            bail!("sweep endpoints must be finite");
        }
        if self.from == self.to {
            bail!("--from and --to must differ");
        }
        if self.scale == Scale::Log && (self.from * self.to <= 0.0) {
            bail!("log sweeps need nonzero endpoints of the same sign");
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                let t = k as f64 / last;
                match self.scale {
                    Scale::Lin => self.from + (self.to - self.from) * t,
                    Scale::Log => self.from * (self.to / self.from).powf(t),
                }
            })
            .collect()
    }
}

/// Endpoint from a bare number or a quantity with unit, in SI.
pub fn parse_endpoint(text: &str) -> anyhow::Result<f64> {
    parse_quantity(text).map(|(v, _)| v).map_err(|e| anyhow!("{text}: {e}"))
}

/// `field.sampled[2][1]` → `/field/sampled/2/1`.
fn json_pointer(path: &str) -> anyhow::Result<String> {
    let mut out = String::new();
    for part in path.split('.') {
        let (key, mut rest) = part.split_at(part.find('[').unwrap_or(part.len()));
        if key.is_empty() {
            bail!("empty key in parameter path `{path}`");
        }
        out.push('/');
        out.push_str(&key.replace('~', "~0").replace('/', "~1"));
        while !rest.is_empty() {
            let close = rest.find(']').ok_or_else(|| anyhow!("unclosed `[` in `{path}`"))?;
            let idx: usize = rest[1..close].parse().map_err(|_| anyhow!("bad index in `{path}`"))?;
            out.push_str(&format!("/{idx}"));
            rest = &rest[close + 1..];
            if !rest.is_empty() && !rest.starts_with('[') {
                bail!("unexpected `{rest}` in `{path}`");
            }
        }
    }
    Ok(out)
}

/// Copy of `raw` with the leaf at `path` replaced by `value`. Integer
/// leaves (such as `N`) accept only integral values.
pub fn with_parameter(raw: &Value, path: &str, value: f64) -> anyhow::Result<Value> {
    let mut doc = raw.clone();
    let leaf = doc
        .pointer_mut(&json_pointer(path)?)
        .ok_or_else(|| anyhow!("parameter path `{path}` does not exist in the config"))?;
    *leaf = match leaf {
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            if value.fract() != 0.0 {
                bail!("`{path}` is an integer; sweep value {value} is not");
            }
            Value::from(value as i64)
        }
        Value::Number(_) | Value::String(_) => {
            Value::from(serde_json::Number::from_f64(value).ok_or_else(|| anyhow!("{value} is not finite"))?)
        }
        _ => bail!("`{path}` is not a scalar quantity"),
    };
    Ok(doc)
}

fn evaluate(raw: &Value, spec: &SweepSpec, value: f64, origin: &Path) -> CmdResult<f64> {
    let doc = with_parameter(raw, &spec.path, value).map_err(Failure::Input)?;
    let config = config_from_value(&doc, origin)?;
    let chain = solve(&config)?;
    let report = couplings_for(&config, &chain)?;
    Ok(match spec.quantity {
        Quantity::MaxJ => report.max_j() / TAU,
        Quantity::Epsilon => report.validity,
        Quantity::DeltaShift(j) => {
            let shift = report.shifts.get(j - 1).ok_or_else(|| {
                Failure::input(anyhow!("delta_shift[{j}] outside [1, {}]", config.ion_count))
            })?;
            shift / TAU
        }
        Quantity::ApproxJ => report.approx_j.ok_or_else(|| {
            Failure::input(anyhow!("approx_J needs a uniform field gradient"))
        })? / TAU,
    })
}

fn thread_count() -> CmdResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::input(anyhow!("{THREADS_ENV}={s}: expected a positive integer"))),
        },
    }
}

pub fn sweep(config_path: &Path, spec: &SweepSpec, out: &Path, opts: OutputOptions) -> CmdResult {
    spec.validate().map_err(Failure::Input)?;
    let raw = read_config_value(config_path)?;
    // Fail on a bad path before spinning up workers.
    with_parameter(&raw, &spec.path, spec.from).map_err(Failure::Input)?;

    let values = spec.values();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(Failure::numeric)?;
    let results: Vec<CmdResult<f64>> =
        pool.install(|| values.par_iter().map(|&v| evaluate(&raw, spec, v, config_path)).collect());

    let mut rows = Vec::with_capacity(values.len());
    for (v, r) in values.iter().zip(results) {
        rows.push((*v, r?));
    }

    let mut csv = format!("{},{}\n", spec.path, spec.quantity.column());
    for (v, q) in &rows {
        csv.push_str(&format!("{},{}\n", fmt12(*v), fmt12(*q)));
    }
    write_text(out, &csv)?;
    if opts.plot_data {
        let title = format!("{} {}", spec.path, spec.quantity.column());
        write_text(&sibling(out, "dat"), &plot_columns(&[(title, rows)]))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn pointer_paths() {
        assert_eq!(json_pointer("nu1").unwrap(), "/nu1");
        assert_eq!(json_pointer("field.uniform.b").unwrap(), "/field/uniform/b");
        assert_eq!(json_pointer("field.sampled[2][1]").unwrap(), "/field/sampled/2/1");
        assert!(json_pointer("field..b").is_err());
        assert!(json_pointer("a[1").is_err());
        assert!(json_pointer("a[x]").is_err());
    }

    #[test]
    fn parameter_replacement() {
        let raw = json!({"N": 3, "nu1": "100kHz", "field": {"uniform": {"b": 10}}});
        assert_eq!(with_parameter(&raw, "N", 5.0).unwrap()["N"], json!(5));
        assert!(with_parameter(&raw, "N", 5.5).is_err());
        assert_eq!(with_parameter(&raw, "nu1", 2e5).unwrap()["nu1"], json!(2e5));
        assert!(with_parameter(&raw, "field.uniform.c", 1.0).is_err());
        assert!(with_parameter(&raw, "field", 1.0).is_err());
    }

    #[test]
    fn quantities() {
        assert_eq!("max_J".parse::<Quantity>().unwrap(), Quantity::MaxJ);
        assert_eq!("delta_shift[3]".parse::<Quantity>().unwrap(), Quantity::DeltaShift(3));
        assert!("delta_shift[0]".parse::<Quantity>().is_err());
        assert!("J".parse::<Quantity>().is_err());
    }

    #[test]
    fn ranges() {
        let spec = |from, to, steps, scale| SweepSpec {
            path: "nu1".into(),
            from,
            to,
            steps,
            scale,
            quantity: Quantity::MaxJ,
        };
        assert!(spec(1.0, 2.0, 1, Scale::Lin).validate().is_err());
        assert!(spec(1.0, 1.0, 5, Scale::Lin).validate().is_err());
        assert!(spec(-1.0, 2.0, 5, Scale::Log).validate().is_err());
        assert!(spec(0.0, 2.0, 5, Scale::Log).validate().is_err());
        assert_eq!(spec(1.0, 2.0, 3, Scale::Lin).values(), vec![1.0, 1.5, 2.0]);
        let v = spec(1.0, 100.0, 3, Scale::Log).values();
        assert!((v[1] - 10.0).abs() < 1e-12 && (v[2] - 100.0).abs() < 1e-12);
    }
}
