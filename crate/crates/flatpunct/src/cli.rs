//! Command-line front end: JSON metric documents in, JSON reports out.
//!
//! Every subcommand reads one or two `MetricDocument` files, dispatches to the
//! library, and prints a report on standard output with a reproducibility
//! header (tool version plus the tolerance in force). Errors exit with code 2
//! and a machine-readable `{code, message, step?}` object on stderr;
//! `equiv` additionally uses exit code 1 for "not equivalent".

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::circulant;
use crate::classify;
use crate::metric::{CanonicalClass, FlatDiskMetric, TOL_LENGTH};
use crate::moves::{self, MoveError, ModificationPlan};
use crate::svg;
use crate::Angle;

pub const SCHEMA: &str = "flatpunct/1";

/// On-disk description of a metric: curvatures in π-units (rational strings
/// like "-2/3" or plain decimals) plus matching lengths, or a bare cylinder.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetricDocument {
    #[serde(default = "default_schema")]
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_pi: Option<Vec<Angle>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cylinder: Option<CylinderDocument>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CylinderDocument {
    pub width: f64,
}

fn default_schema() -> String {
    SCHEMA.to_string()
}

impl MetricDocument {
    pub fn from_metric(metric: &FlatDiskMetric) -> MetricDocument {
        match metric {
            FlatDiskMetric::Disk(disk) => MetricDocument {
                schema: default_schema(),
                kappa_pi: Some(disk.kappas().to_vec()),
                lengths: Some(disk.lengths().to_vec()),
                cylinder: None,
            },
            FlatDiskMetric::Cylinder(cyl) => MetricDocument {
                schema: default_schema(),
                kappa_pi: None,
                lengths: None,
                cylinder: Some(CylinderDocument { width: cyl.width }),
            },
        }
    }

    pub fn to_metric(&self) -> Result<FlatDiskMetric, CliError> {
        if self.schema != SCHEMA {
            return Err(CliError::new(
                "schema",
                format!("unsupported schema {:?}, expected {:?}", self.schema, SCHEMA),
            ));
        }
        match (&self.kappa_pi, &self.lengths, &self.cylinder) {
            (None, None, Some(cyl)) => FlatDiskMetric::cylinder(cyl.width)
                .map_err(|e| CliError::new("metric", e.to_string())),
            (Some(kappas), Some(lengths), None) => {
                FlatDiskMetric::disk(kappas.clone(), lengths.clone())
                    .map_err(|e| CliError::new("metric", e.to_string()))
            }
            _ => Err(CliError::new(
                "schema",
                "document needs either kappa_pi + lengths or a cylinder block",
            )),
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub step: Option<usize>,
}

impl CliError {
    fn new(code: &str, message: impl Into<String>) -> CliError {
        CliError {
            code: code.to_string(),
            message: message.into(),
            step: None,
        }
    }
}

impl From<MoveError> for CliError {
    fn from(e: MoveError) -> CliError {
        let step = match &e {
            MoveError::ReplayFailure { step, .. } => Some(*step),
            _ => None,
        };
        CliError {
            code: "moves".to_string(),
            message: e.to_string(),
            step,
        }
    }
}

impl From<classify::ClassifyError> for CliError {
    fn from(e: classify::ClassifyError) -> CliError {
        CliError::new("classify", e.to_string())
    }
}

impl From<crate::metric::MetricError> for CliError {
    fn from(e: crate::metric::MetricError) -> CliError {
        CliError::new("metric", e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "flatpunct", version, about = "Flat cone metrics on the once-punctured disk: canonical forms, modification equivalence, and the puncture invariant")]
struct Cli {
    /// Numeric tolerance for reports (overrides FLATPUNCT_TOLERANCE).
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Require exact π-unit rationals in the input curvatures.
    #[arg(long, global = true)]
    exact: bool,
    /// Write the emitted plan or certificate to this path.
    #[arg(long, global = true, value_name = "PATH")]
    plan_out: Option<PathBuf>,
    /// Write the rendered development to this path.
    #[arg(long, global = true, value_name = "PATH")]
    svg_out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct OneMetric {
    /// MetricDocument JSON file.
    file: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a metric document and report problems.
    Validate(OneMetric),
    /// Reduce to the canonical form and emit the modification plan.
    Canonicalize(OneMetric),
    /// Compute the classifying invariant.
    Invariant(OneMetric),
    /// Decide modification equivalence of two metrics.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Compare with labels pinned instead of up to cyclic relabeling.
        #[arg(long)]
        labeled: bool,
    },
    /// Classify the puncture as regular or irregular.
    Classify(OneMetric),
    /// Replay a plan file against a metric and report the result.
    Moves {
        file: PathBuf,
        /// ModificationPlan JSON file.
        plan: PathBuf,
    },
    /// Spectrum, determinant, and rank of the principal circulant matrix.
    Circulant(OneMetric),
    /// Complete the canonical form to a cone and report the gluing.
    ConeComplete(OneMetric),
    /// Discrete Gauss-Bonnet bookkeeping for the metric.
    GaussBonnet(OneMetric),
    /// Render the planar development as SVG.
    Render(OneMetric),
}

fn resolve_tolerance(flag: Option<f64>) -> f64 {
    flag.or_else(|| {
        std::env::var("FLATPUNCT_TOLERANCE")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(TOL_LENGTH)
}

fn read_document(path: &PathBuf, exact: bool) -> Result<(MetricDocument, FlatDiskMetric), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
    let doc: MetricDocument = serde_json::from_str(&text)
        .map_err(|e| CliError::new("parse", format!("{}: {e}", path.display())))?;
    let metric = doc.to_metric()?;
    if exact {
        if let Some(kappas) = &doc.kappa_pi {
            if let Some(pos) = kappas.iter().position(|k| !k.is_exact()) {
                return Err(CliError::new(
                    "exact",
                    format!("--exact requires rational kappa_pi entries, index {pos} is not"),
                ));
            }
        }
    }
    Ok((doc, metric))
}

fn report(tolerance: f64, body: serde_json::Value) -> serde_json::Value {
    json!({
        "schema": SCHEMA,
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "tolerance": tolerance,
        "report": body,
    })
}

fn write_plan(path: &PathBuf, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::new("io", e.to_string()))?;
    fs::write(path, text).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            let mut obj = json!({ "code": err.code, "message": err.message });
            if let Some(step) = err.step {
                obj["step"] = json!(step);
            }
            eprintln!("{obj}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    let tolerance = resolve_tolerance(cli.tolerance);
    let exact = cli.exact;
    match cli.command {
        Command::Validate(m) => {
            let (_, metric) = read_document(&m.file, exact)?;
            let validation = metric.validate();
            let body = json!({
                "valid": validation.is_valid(),
                "errors": validation.errors,
                "warnings": validation.warnings,
                "puncture": metric.puncture_info(),
            });
            println!("{}", report(tolerance, body));
            Ok(0)
        }
        Command::Canonicalize(m) => {
            let (_, metric) = read_document(&m.file, exact)?;
            let body = match &metric {
                FlatDiskMetric::Cylinder(cyl) => json!({
                    "kind": "cylinder",
                    "width": cyl.width,
                }),
                FlatDiskMetric::Disk(disk) => {
                    let (canonical, plan) = moves::canonicalize(disk)?;
                    if let Some(path) = &cli.plan_out {
                        write_plan(path, &plan)?;
                    }
                    json!({
                        "kind": "canonical",
                        "canonical": canonical,
                        "n": canonical.n(),
                        "vertex_curvature_pi": canonical.vertex_curvature(),
                        "plan": plan,
                    })
                }
            };
            println!("{}", report(tolerance, body));
            Ok(0)
        }
        Command::Invariant(m) => {
            let (_, metric) = read_document(&m.file, exact)?;
            let inv = classify::invariant(&metric)?;
            if let (Some(path), Some(plan)) = (&cli.plan_out, &inv.plan) {
                write_plan(path, plan)?;
            }
            println!("{}", report(tolerance, serde_json::to_value(&inv).unwrap()));
            Ok(0)
        }
        Command::Equiv { a, b, labeled } => {
            let (_, ma) = read_document(&a, exact)?;
            let (_, mb) = read_document(&b, exact)?;
            let result = classify::equivalent(&ma, &mb, labeled)?;
            if let (Some(path), Some(cert)) = (&cli.plan_out, &result.certificate) {
                write_plan(path, cert)?;
            }
            let body = json!({
                "equivalent": result.equivalent,
                "labeled": labeled,
                "certificate": result.certificate,
            });
            println!("{}", report(tolerance, body));
            Ok(if result.equivalent { 0 } else { 1 })
        }
        Command::Classify(m) => {
            let (_, metric) = read_document(&m.file, exact)?;
            let reg = classify::classify_regularity(&metric)?;
            let (moduli, class) = classify::moduli_description(metric.total_curvature());
            let body = json!({
                "regular": reg.regular,
                "puncture_curvature_pi": reg.puncture_curvature,
                "total_curvature_pi": reg.total_curvature,
                "kind": reg.kind,
                "moduli": moduli,
                "moduli_class": class,
            });
            println!("{}", report(tolerance, body));
            Ok(0)
        }
        Command::Moves { file, plan } => {
            let (_, metric) = read_document(&file, exact)?;
            let disk = metric
                .as_disk()
                .ok_or_else(|| CliError::new("moves", "plan replay needs a disk metric"))?;
            let text = fs::read_to_string(&plan)
                .map_err(|e| CliError::new("io", format!("{}: {e}", plan.display())))?;
            let plan: ModificationPlan = serde_json::from_str(&text)
                .map_err(|e| CliError::new("parse", format!("{}: {e}", plan.display())))?;
            let result = moves::apply_plan(disk, &plan)?;
            let body = json!({
                "steps": plan.steps.len(),
                "result": MetricDocument::from_metric(&FlatDiskMetric::Disk(result)),
            });
            println!("{}", report(tolerance, body));
            Ok(0)
        }
        Command::Circulant(m) => {
            let (_, metric) = read_document(&m.file, exact)?;
            let k = metric.total_curvature();
            let n = match crate::metric::canonical_count(k)? {
                CanonicalClass::Cylinder => {
                    return Err(CliError::new(
                        "circulant",
                        "the cylinder class has no principal matrix",
                    ))
                }
                CanonicalClass::Vertices(n) => n,
            };
            if n < 3 {
                return Err(CliError::new(
                    "circulant",
                    format!("principal moves need n >= 3 vertices, canonical form has {n}"),
                ));
            }
            let matrix = circulant::principal_matrix(k, n)
                .map_err(|e| CliError::new("circulant", e.to_string()))?;
            let spectrum = circulant::eigenvalues(&matrix);
            let eigenvalues: Vec<[f64; 2]> = spectrum
                .eigenvalues
                .iter()
                .map(|z| [z.re, z.im])
                .collect();
            let rank = circulant::rank_by_gcd(&matrix)
                .map_err(|e| CliError::new("circulant", e.to_string()))?;
            let body = json!({
                "n": n,
                "coefficients": matrix.coefficients(),
                "eigenvalues": eigenvalues,
                "determinant": circulant::determinant(&matrix),
                "rank": rank,
                "singular": circulant::singular_case(k, n),
            });
            println!("{}", report(tolerance, body));
            Ok(0)
        }
        Command::ConeComplete(m) => {
            let (_, metric) = read_document(&m.file, exact)?;
            let completion = classify::cone_completion(&metric)?;
            println!("{}", report(tolerance, serde_json::to_value(&completion).unwrap()));
            Ok(0)
        }
        Command::GaussBonnet(m) => {
            let (_, metric) = read_document(&m.file, exact)?;
            let gb = metric.gauss_bonnet_check();
            println!("{}", report(tolerance, serde_json::to_value(gb).unwrap()));
            Ok(0)
        }
        Command::Render(m) => {
            let (_, metric) = read_document(&m.file, exact)?;
            let disk = metric
                .as_disk()
                .ok_or_else(|| CliError::new("render", "rendering needs a disk metric"))?;
            let svg = svg::render_development(disk, None);
            let body = match &cli.svg_out {
                Some(path) => {
                    fs::write(path, &svg)
                        .map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
                    json!({ "svg_path": path, "bytes": svg.len() })
                }
                None => json!({ "svg": svg }),
            };
            println!("{}", report(tolerance, body));
            Ok(0)
        }
    }
}
