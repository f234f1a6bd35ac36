//! Command-line front end. Every subcommand validates its flags, runs one
//! library computation and emits CSV or JSON on stdout (or `--output`).
//! Run metadata goes to stderr so data files stay byte-identical between runs.

use crate::acceptance::{run_all, CriterionReport};
use crate::analysis::{find_crossover, fit_power_law, local_slope, numeric_scaling, sweep, Axis, GMode, SweepParams};
use crate::chain::{log_fidelity, ChainSpec};
use crate::ed::ed_oracle_fidelity;
use crate::error::{FidelityError, Result};
use crate::scaling::scaling_a;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

pub const THREADS_ENV: &str = "FIDELITY_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Size,
    Delta,
    G,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::Size => Axis::Size,
            AxisArg::Delta => Axis::Delta,
            AxisArg::G => Axis::Field,
        }
    }
}

/// `critical`, `plus-delta`, `plus-5delta` or an explicit field value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GModeArg(pub GMode);

impl FromStr for GModeArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mode = match s {
            "critical" => GMode::AtCritical,
            "plus-delta" => GMode::PlusDelta,
            "plus-5delta" => GMode::PlusFiveDelta,
            other => match other.parse::<f64>() {
                Ok(g) if g.is_finite() => GMode::Explicit(g),
                _ => {
                    return Err(format!(
                        "expected critical, plus-delta, plus-5delta or a finite number, got '{other}'"
                    ))
                }
            },
        };
        Ok(GModeArg(mode))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Geometric,
}

/// `start:stop:count:geometric|linear`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count, spacing] = parts[..] else {
            return Err(format!(
                "grid spec must be start:stop:count:geometric|linear, got '{s}'"
            ));
        };
        let num = |t: &str| t.parse::<f64>().map_err(|e| format!("bad grid bound '{t}': {e}"));
        let (start, stop) = (num(start)?, num(stop)?);
        let count: usize = count.parse().map_err(|e| format!("bad grid count '{count}': {e}"))?;
        let spacing = match spacing {
            "linear" => Spacing::Linear,
            "geometric" => Spacing::Geometric,
            other => return Err(format!("grid spacing must be geometric or linear, got '{other}'")),
        };
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(format!("grid needs finite start < stop, got {start}:{stop}"));
        }
        if count < 2 {
            return Err(format!("grid needs at least 2 points, got {count}"));
        }
        if spacing == Spacing::Geometric && start <= 0.0 {
            return Err(format!("geometric grid needs start > 0, got {start}"));
        }
        Ok(GridSpec {
            start,
            stop,
            count,
            spacing,
        })
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                if i + 1 == self.count {
                    return self.stop;
                }
                match self.spacing {
                    Spacing::Linear => self.start + t * (self.stop - self.start),
                    Spacing::Geometric => self.start * (self.stop / self.start).powf(t),
                }
            })
            .collect()
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ising-fidelity",
    version,
    about = "Ground-state fidelity of the transverse-field Ising chain"
)]
pub struct RunConfig {
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    pub format: OutputFormat,
    /// Write the emission here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact fidelity between the ground states at g - δ and g + δ.
    Fidelity {
        #[arg(long)]
        size: usize,
        #[arg(long, allow_negative_numbers = true)]
        g: f64,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        /// Also compute the fidelity by exact diagonalization (N ≤ 12).
        #[arg(long)]
        oracle: bool,
    },
    /// ln F and its local log-log slope along one axis.
    Scan {
        #[arg(long, value_enum)]
        axis: AxisArg,
        #[arg(long)]
        grid: GridSpec,
        #[arg(long, default_value = "critical", allow_negative_numbers = true)]
        g_mode: GModeArg,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
    },
    /// The scaling function A(c), optionally against finite-N numerics.
    ScalingFunction {
        #[arg(long, allow_negative_numbers = true)]
        c_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        c_max: f64,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        numeric: bool,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Crossover sizes N_{3/2}(δ) and a power-law fit a|δ|^(-b).
    Crossover {
        #[arg(long, value_delimiter = ',', required = true)]
        delta_list: Vec<f64>,
        #[arg(long, default_value = "critical", allow_negative_numbers = true)]
        g_mode: GModeArg,
    },
    /// Run the acceptance suite; exit 1 if any criterion fails.
    Check,
}

/// A rectangular table with optional cells.
struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<Option<f64>>>,
}

/// 17 significant digits, enough for a lossless round trip.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_number(x: Option<f64>) -> Value {
    match x {
        Some(v) if v.is_finite() => json!(v),
        _ => Value::Null,
    }
}

fn csv_bytes(headers: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| FidelityError::Io(e.to_string());
    w.write_record(headers).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    w.into_inner().map_err(|e| FidelityError::Io(e.to_string()))
}

impl Table {
    fn to_csv(&self) -> Result<Vec<u8>> {
        csv_bytes(
            &self.headers,
            self.rows
                .iter()
                .map(|r| r.iter().map(|c| c.map(format_float).unwrap_or_default()).collect()),
        )
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let obj = self
                        .headers
                        .iter()
                        .zip(r)
                        .map(|(h, c)| (h.to_string(), json_number(*c)))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

fn json_bytes(v: &Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("JSON values always serialize");
    out.push(b'\n');
    out
}

fn require<T>(value: Option<T>, flag: &str, why: &str) -> Result<T> {
    value.ok_or_else(|| FidelityError::domain(format!("--{flag} is required {why}")))
}

/// The data emission and whether the run counts as a success.
struct Emission {
    bytes: Vec<u8>,
    ok: bool,
}

impl Emission {
    fn ok(bytes: Vec<u8>) -> Self {
        Self { bytes, ok: true }
    }
}

fn cmd_fidelity(format: OutputFormat, n: usize, g: f64, delta: f64, oracle: bool) -> Result<Emission> {
    let spec = ChainSpec::new(n, g, delta)?;
    let oracle_f = if oracle {
        Some(ed_oracle_fidelity(n, g, delta)?)
    } else {
        None
    };
    let v = log_fidelity(&spec);
    let mut headers = vec!["n", "g", "delta", "log_fidelity", "fidelity", "per_site"];
    let mut row = vec![
        Some(n as f64),
        Some(g),
        Some(delta),
        Some(v.log_f),
        Some(v.f),
        Some(v.per_site),
    ];
    if let Some(f) = oracle_f {
        headers.push("oracle_fidelity");
        row.push(Some(f));
    }
    let bytes = match format {
        OutputFormat::Csv => Table {
            headers,
            rows: vec![row],
        }
        .to_csv()?,
        OutputFormat::Json => {
            let mut obj = json!({
                "n": n,
                "g": g,
                "delta": delta,
                "log_fidelity": json_number(Some(v.log_f)),
                "fidelity": v.f,
                "per_site": json_number(Some(v.per_site)),
            });
            if let Some(f) = oracle_f {
                obj["oracle_fidelity"] = json!(f);
            }
            json_bytes(&obj)
        }
    };
    Ok(Emission::ok(bytes))
}

fn cmd_scan(
    format: OutputFormat,
    axis: AxisArg,
    grid: GridSpec,
    g_mode: GMode,
    size: Option<usize>,
    delta: Option<f64>,
) -> Result<Emission> {
    let (size, delta) = match axis {
        AxisArg::Size => (2, require(delta, "delta", "for a size scan")?),
        AxisArg::Delta => (require(size, "size", "for a delta scan")?, 0.0),
        AxisArg::G => (
            require(size, "size", "for a g scan")?,
            require(delta, "delta", "for a g scan")?,
        ),
    };
    let mut xs = grid.points();
    if axis == AxisArg::Size {
        // Sizes snap to the nearest even integer; duplicates collapse.
        xs.iter_mut().for_each(|x| *x = 2.0 * (*x / 2.0).round());
        xs.dedup();
    }
    let table = sweep(axis.into(), SweepParams { size, delta, g_mode }, &xs)?;
    let slopes = match local_slope(&table) {
        Ok(s) => s.into_iter().map(|(_, s)| Some(s)).collect(),
        Err(e) => {
            eprintln!("local_slope unavailable: {e}");
            vec![None; table.points.len()]
        }
    };
    let out = Table {
        headers: vec!["x", "log_fidelity", "per_site", "local_slope"],
        rows: table
            .points
            .iter()
            .zip(slopes)
            .map(|(p, s)| vec![Some(p.x), Some(p.log_f), Some(p.per_site), s])
            .collect(),
    };
    eprintln!("scan: {} points", out.rows.len());
    let bytes = match format {
        OutputFormat::Csv => out.to_csv()?,
        OutputFormat::Json => json_bytes(&out.to_json()),
    };
    Ok(Emission::ok(bytes))
}

fn cmd_scaling_function(
    format: OutputFormat,
    c_min: f64,
    c_max: f64,
    points: usize,
    numeric: Option<(usize, f64)>,
) -> Result<Emission> {
    if !(c_min.is_finite() && c_max.is_finite() && c_min <= c_max) {
        return Err(FidelityError::domain(format!(
            "need finite c-min ≤ c-max, got {c_min}, {c_max}"
        )));
    }
    if points == 0 || (points == 1 && c_min != c_max) {
        return Err(FidelityError::domain(format!(
            "need at least 2 points for a non-degenerate c range, got {points}"
        )));
    }
    if let Some((n, d)) = numeric {
        ChainSpec::new(n, 1.0, d)?;
        if d == 0.0 {
            return Err(FidelityError::domain("numeric comparison needs δ ≠ 0"));
        }
    }
    let cs: Vec<f64> = if points == 1 {
        vec![c_min]
    } else {
        (0..points)
            .map(|i| {
                if i + 1 == points {
                    c_max
                } else {
                    c_min + (c_max - c_min) * i as f64 / (points - 1) as f64
                }
            })
            .collect()
    };
    let mut headers = vec!["c", "a_analytic", "da_dc"];
    if numeric.is_some() {
        headers.extend(["a_numeric", "residual"]);
    }
    let rows = cs
        .iter()
        .map(|&c| {
            let eval = scaling_a(c).map_err(|e| e.at(c))?;
            let mut row = vec![Some(c), Some(eval.a_value), Some(eval.da_dc)];
            if let Some((n, d)) = numeric {
                let a_num = numeric_scaling(n, d, c).map_err(|e| e.at(c))?;
                row.extend([Some(a_num), Some(a_num - eval.a_value)]);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let out = Table { headers, rows };
    let bytes = match format {
        OutputFormat::Csv => out.to_csv()?,
        OutputFormat::Json => json_bytes(&out.to_json()),
    };
    Ok(Emission::ok(bytes))
}

fn cmd_crossover(format: OutputFormat, deltas: &[f64], g_mode: GMode) -> Result<Emission> {
    if deltas.len() < 3 {
        return Err(FidelityError::Arity {
            needed: 3,
            got: deltas.len(),
        });
    }
    let pts = deltas
        .iter()
        .map(|&d| Ok((d.abs(), find_crossover(d, g_mode, 1.5).map_err(|e| e.at(d))?)))
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_power_law(&pts)?;
    let bytes = match format {
        OutputFormat::Csv => {
            eprintln!(
                "fit: a = {}, b = {}, stderr_b = {}",
                format_float(fit.prefactor_a),
                format_float(fit.exponent_b),
                format_float(fit.stderr_b)
            );
            Table {
                headers: vec!["delta", "n_three_halves"],
                rows: pts.iter().map(|&(d, n)| vec![Some(d), Some(n)]).collect(),
            }
            .to_csv()?
        }
        OutputFormat::Json => json_bytes(&json!({
            "points": pts.iter().map(|&(d, n)| json!({"delta": d, "n_three_halves": n})).collect::<Vec<_>>(),
            "fit": {"a": fit.prefactor_a, "b": fit.exponent_b, "stderr_b": fit.stderr_b},
        })),
    };
    Ok(Emission::ok(bytes))
}

fn cmd_check(format: OutputFormat) -> Result<Emission> {
    let reports = run_all();
    for r in &reports {
        eprintln!("{}", r.summary_line());
    }
    let ok = reports.iter().all(|r| r.passed);
    let bytes = match format {
        OutputFormat::Json => json_bytes(&check_json(&reports)),
        OutputFormat::Csv => csv_bytes(
            &["id", "name", "check", "measured", "bound", "passed"],
            reports.iter().flat_map(|r| {
                r.checks.iter().map(move |c| {
                    vec![
                        r.id.to_string(),
                        r.name.to_string(),
                        c.label.clone(),
                        format_float(c.measured),
                        c.bound.clone(),
                        c.passed.to_string(),
                    ]
                })
            }),
        )?,
    };
    Ok(Emission { bytes, ok })
}

fn check_json(reports: &[CriterionReport]) -> Value {
    json!({
        "passed": reports.iter().all(|r| r.passed),
        "criteria": reports.iter().map(|r| json!({
            "id": r.id,
            "name": r.name,
            "passed": r.passed,
            "checks": r.checks.iter().map(|c| json!({
                "label": c.label,
                "measured": json_number(Some(c.measured)),
                "bound": c.bound,
                "passed": c.passed,
            })).collect::<Vec<_>>(),
            "notes": r.notes,
        })).collect::<Vec<_>>(),
    })
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| FidelityError::domain(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
    // A second initialisation in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn execute(cfg: RunConfig) -> Result<Emission> {
    configure_threads()?;
    eprintln!("threads: {}", rayon::current_num_threads());
    let f = cfg.format;
    let emission = match cfg.command {
        Command::Fidelity { size, g, delta, oracle } => cmd_fidelity(f, size, g, delta, oracle)?,
        Command::Scan {
            axis,
            grid,
            g_mode,
            size,
            delta,
        } => cmd_scan(f, axis, grid, g_mode.0, size, delta)?,
        Command::ScalingFunction {
            c_min,
            c_max,
            points,
            numeric,
            size,
            delta,
        } => {
            let numeric = if numeric {
                Some((
                    require(size, "size", "with --numeric")?,
                    require(delta, "delta", "with --numeric")?,
                ))
            } else {
                None
            };
            cmd_scaling_function(f, c_min, c_max, points, numeric)?
        }
        Command::Crossover { delta_list, g_mode } => cmd_crossover(f, &delta_list, g_mode.0)?,
        Command::Check => cmd_check(f)?,
    };
    match &cfg.output {
        Some(path) => std::fs::write(path, &emission.bytes)?,
        None => std::io::stdout().lock().write_all(&emission.bytes)?,
    }
    Ok(emission)
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cfg) {
        Ok(em) if em.ok => 0,
        Ok(_) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_parsing() {
        let g: GridSpec = "1e2:1e4:3:geometric".parse().unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 3);
        assert!((pts[1] - 1e3).abs() < 1e-9);
        assert_eq!(pts[2], 1e4);
        let l: GridSpec = "0.9:1.1:41:linear".parse().unwrap();
        assert_eq!(l.points()[0], 0.9);
        assert_eq!(l.points()[40], 1.1);
        for bad in [
            "1:2:3",
            "2:1:3:linear",
            "0:1:3:geometric",
            "1:2:1:linear",
            "1:2:3:log",
            "a:2:3:linear",
        ] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn g_mode_parsing() {
        assert_eq!("critical".parse::<GModeArg>().unwrap().0, GMode::AtCritical);
        assert_eq!("plus-5delta".parse::<GModeArg>().unwrap().0, GMode::PlusFiveDelta);
        assert_eq!("1.25".parse::<GModeArg>().unwrap().0, GMode::Explicit(1.25));
        assert!("nan".parse::<GModeArg>().is_err());
        assert!("sideways".parse::<GModeArg>().is_err());
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, -4.653301234567891e-5, 1.0 / 3.0, f64::MIN_POSITIVE, 1e300] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn usage_errors_map_to_two() {
        assert_eq!(run(["ising-fidelity", "fidelity", "--size", "x"]), 2);
        assert_eq!(run(["ising-fidelity", "launch"]), 2);
    }
}
