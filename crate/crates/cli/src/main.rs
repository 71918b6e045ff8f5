//! `specdim`: entropy growth and spectral dimensions from the command line.

mod parse;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use specdim::dimension::{
    factorial_scales, fractal_dimension, geometric_scales, hausdorff_estimate, information_dimension,
};
use specdim::entropy::{entropy_curve, Method};
use specdim::measures::{appendix_mu, spec};
use specdim::timeseries::{read_csv, spectrum_dimension_detailed, synthesize, write_csv};
use specdim::{Error, Result, SpectralMeasure};

#[derive(Parser, Debug)]
#[command(name = "specdim", version, about = "Entropy growth and fractal dimensions of spectral measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Profile of a measure: kind, parameters, closed-form dimension, Fourier coefficients.
    Describe(DescribeArgs),
    /// Entropy S(T) over a sweep of times, with the slope of S against ln T.
    EntropyScan(ScanArgs),
    /// Information, fractal or pointwise (Hausdorff-type) dimension estimate.
    Dimension(DimensionArgs),
    /// Synthesize or analyze stationary sequences.
    #[command(subcommand)]
    Timeseries(TimeseriesCommand),
}

#[derive(Subcommand, Debug)]
enum TimeseriesCommand {
    /// Write a synthetic sequence with the given spectral measure.
    Synth(SynthArgs),
    /// Estimate the entropy curve of a sequence read from CSV.
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Info,
    Fractal,
    Hausdorff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Scales {
    Geometric,
    Factorial,
}

#[derive(Args, Debug)]
struct Common {
    /// Spec JSON file or preset (uniform, cantor, appendix, binomial(p), atomic, atoms(n), mixture).
    #[arg(long)]
    spec: String,
    /// Output file (stdout when absent).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DescribeArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    common: Common,
    /// `2^a..2^b` or a list such as `2,4,8`.
    #[arg(long, default_value = "2^4..2^11")]
    times: String,
    #[arg(long, default_value = "eig")]
    method: String,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct DimensionArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value = "info")]
    kind: Kind,
    /// Cell base (defaults to the measure's own base, else 2).
    #[arg(long)]
    base: Option<u32>,
    /// Depths, or scale indices for hausdorff, as `a..b`.
    #[arg(long, default_value = "4..12")]
    depths: String,
    /// Discarded mass for the fractal estimate.
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample points for hausdorff.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Scale family for hausdorff: π·base^-k or 4π·2^-k!.
    #[arg(long, value_enum, default_value = "geometric")]
    scales: Scales,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 1 << 17)]
    length: usize,
    /// Refinement depth of the continuous part (default: finest grid with at most 2^20 cells).
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// CSV with a `re,im` header.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "2^3..2^9")]
    times: String,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource() { 3 } else { 2 })
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Describe(a) => describe(a),
        Command::EntropyScan(a) => entropy_scan(a),
        Command::Dimension(a) => dimension(a),
        Command::Timeseries(TimeseriesCommand::Synth(a)) => synth(a),
        Command::Timeseries(TimeseriesCommand::Analyze(a)) => analyze(a),
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit_json(path: &Option<PathBuf>, v: &Value) -> Result<()> {
    let mut w = open_output(path)?;
    serde_json::to_writer_pretty(&mut w, v)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn emit_csv(path: &Option<PathBuf>, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(open_output(path)?);
    let err = |e: csv::Error| Error::Io(io::Error::other(e.to_string()));
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(&r).map_err(err)?;
    }
    w.flush()?;
    Ok(())
}

fn path_str(p: &Option<PathBuf>) -> Value {
    p.as_ref().map_or(Value::Null, |p| json!(p.display().to_string()))
}

fn describe(a: DescribeArgs) -> Result<()> {
    if a.format != Format::Json {
        return Err(Error::InvalidArgument("describe emits JSON only".into()));
    }
    let m = parse::measure(&a.common.spec)?;
    let fourier: Vec<Value> = (-8..=8)
        .map(|t| {
            let z = m.fourier(t);
            json!({"t": t, "re": z.re, "im": z.im})
        })
        .collect();
    let mu: Value = if m.is_appendix() { json!((1..=5).map(appendix_mu).collect::<Vec<_>>()) } else { Value::Null };
    let out = json!({
        "config": {"command": "describe", "spec": a.common.spec, "output": path_str(&a.common.output), "format": a.format},
        "kind": m.kind_name(),
        "parameters": spec::to_value(&m),
        "information_dimension": m.closed_form_dimension(),
        "point_mass": m.point_mass(),
        "fourier": fourier,
        "appendix_mu": mu,
    });
    emit_json(&a.common.output, &out)
}

fn entropy_scan(a: ScanArgs) -> Result<()> {
    let m = parse::measure(&a.common.spec)?;
    let times = parse::times(&a.times)?;
    let method: Method = a.method.parse()?;
    let curve = entropy_curve(&m, &times, method)?;
    let ratio = |t: usize, s: f64| if t > 1 { s / (t as f64).ln() } else { f64::NAN };
    let summary = json!({
        "config": {
            "command": "entropy-scan", "spec": a.common.spec, "measure": spec::to_value(&m), "times": times,
            "method": method, "output": path_str(&a.common.output), "format": a.format,
        },
        "slope": curve.slope,
        "intercept": curve.intercept,
        "residual": curve.residual,
        "fit_window": curve.fit_window,
    });
    match a.format {
        Format::Csv => {
            emit_csv(
                &a.common.output,
                &["T", "S", "S_over_lnT"],
                curve.points.iter().map(|p| vec![p.t.to_string(), p.s.to_string(), ratio(p.t, p.s).to_string()]),
            )?;
            eprintln!("{summary}");
            Ok(())
        }
        Format::Json => {
            let mut out = summary;
            out["points"] = curve
                .points
                .iter()
                .map(|p| json!({"T": p.t, "S": p.s, "S_over_lnT": ratio(p.t, p.s)}))
                .collect();
            emit_json(&a.common.output, &out)
        }
    }
}

fn dimension(a: DimensionArgs) -> Result<()> {
    let m = parse::measure(&a.common.spec)?;
    let depths = parse::depths(&a.depths)?;
    let base = a.base.or(m.native_base()).unwrap_or(2);
    if base < 2 {
        return Err(Error::InvalidArgument("base must be at least 2".into()));
    }
    let est = match a.kind {
        Kind::Info => information_dimension(&m, base, depths.clone())?,
        Kind::Fractal => fractal_dimension(&m, a.epsilon, base, depths.clone())?,
        Kind::Hausdorff => {
            let scales = match a.scales {
                Scales::Geometric => geometric_scales(base, depths.clone()),
                Scales::Factorial => {
                    if *depths.end() > 12 {
                        return Err(Error::InvalidArgument("factorial scales need k ≤ 12".into()));
                    }
                    factorial_scales(depths.clone())
                }
            };
            hausdorff_estimate(&m, a.seed, a.samples, &scales)?
        }
    };
    match a.format {
        Format::Json => {
            let out = json!({
                "config": {
                    "command": "dimension", "spec": a.common.spec, "measure": spec::to_value(&m), "kind": a.kind,
                    "base": base, "depths": [depths.start(), depths.end()], "epsilon": a.epsilon, "seed": a.seed,
                    "samples": a.samples, "scales": a.scales, "output": path_str(&a.common.output), "format": a.format,
                },
                "kind": a.kind,
                "value": est.value,
                "raw": est.raw,
                "lower": est.lower,
                "per_depth": est.per_depth,
                "residual": est.residual,
            });
            emit_json(&a.common.output, &out)
        }
        Format::Csv => {
            let first = *depths.start();
            emit_csv(
                &a.common.output,
                &["depth", "statistic"],
                est.per_depth.iter().map(|(k, y)| {
                    // hausdorff rows are indexed by scale position
                    let k = if a.kind == Kind::Hausdorff { first + k } else { *k };
                    vec![k.to_string(), y.to_string()]
                }),
            )
        }
    }
}

fn default_depth(m: &SpectralMeasure) -> u32 {
    let base = m.native_base().unwrap_or(2) as u64;
    let mut d = 0;
    let mut n = 1u64;
    while n * base <= 1 << 20 {
        n *= base;
        d += 1;
    }
    d
}

fn synth(a: SynthArgs) -> Result<()> {
    let m = parse::measure(&a.common.spec)?;
    let depth = a.depth.unwrap_or_else(|| default_depth(&m));
    let s = synthesize(&m, a.length, depth, a.seed)?;
    match a.format {
        Format::Csv => {
            let mut w = open_output(&a.common.output)?;
            write_csv(&s, &mut w)?;
            w.flush()?;
            Ok(())
        }
        Format::Json => {
            let out = json!({
                "config": {
                    "command": "timeseries synth", "spec": a.common.spec, "measure": spec::to_value(&m),
                    "length": a.length, "depth": depth, "seed": a.seed,
                    "output": path_str(&a.common.output), "format": a.format,
                },
                "origin": s.origin,
                "values": s.values.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            });
            emit_json(&a.common.output, &out)
        }
    }
}

fn analyze(a: AnalyzeArgs) -> Result<()> {
    let times = parse::times(&a.times)?;
    let file = File::open(&a.input)?;
    let s = read_csv(BufReader::new(file), &a.input.display().to_string())?;
    let (curve, spectra) = spectrum_dimension_detailed(&s, &times)?;
    let min_eig: Vec<f64> = spectra.iter().map(|sp| sp.min_raw).collect();
    match a.format {
        Format::Json => {
            let out = json!({
                "config": {
                    "command": "timeseries analyze", "input": a.input.display().to_string(), "length": s.len(),
                    "times": times, "output": path_str(&a.output), "format": a.format,
                },
                "curve": curve,
                "min_eigenvalues": min_eig,
            });
            emit_json(&a.output, &out)
        }
        Format::Csv => emit_csv(
            &a.output,
            &["T", "S", "S_over_lnT", "min_eigenvalue"],
            curve.points.iter().zip(&min_eig).map(|(p, e)| {
                let r = if p.t > 1 { p.s / (p.t as f64).ln() } else { f64::NAN };
                vec![p.t.to_string(), p.s.to_string(), r.to_string(), e.to_string()]
            }),
        ),
    }
}
