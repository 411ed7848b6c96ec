//! The `covexp` command line.
//!
//! Exit codes: 0 on success, 1 for invalid arguments or inputs, 2 when a
//! computation rejects its input (for example a non-cocycle) or a
//! verification exceeds its tolerance.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::action::ActionRealization;
use crate::catalog::catalog;
use crate::config::{load_exponent, load_realization};
use crate::error::{Error, Result};
use crate::exponent::{CertificateEntry, ExponentComplex, ExponentRecord, InfExponent, Reduction};
use crate::factor_rep::{translation_demo, verify_weyl, VerificationSummary};
use crate::report::{write_atomic, ReportEnvelope};
use crate::schrod::{gauge_suite, SuiteConfig, DEFAULT_BOX, DEFAULT_MODES};

#[derive(Parser, Debug)]
#[command(name = "covexp", version, about = "Exponents of Lie algebra actions, factor representations and gauge phases")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Cocycles modulo admissible coboundaries at a degree cap
    Classify {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 0)]
        degree: u32,
        /// Replace the realization by the zero action
        #[arg(long)]
        trivial_action: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reduce cocycles to exponents depending only on the kept coordinates
    Reduce {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 1)]
        degree: u32,
        /// Coordinates allowed in the result, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<String>,
        /// Reduce this exponent instead of every cocycle basis element
        #[arg(long)]
        exponent: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Constant exponents under the trivial action (classify at degree 0)
    Bargmann {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Free-particle norm, gauge-phase and ray-distinction checks
    Schrodinger {
        #[arg(long, default_value_t = DEFAULT_MODES)]
        modes: usize,
        /// Width L of the periodic box [-L/2, L/2)
        #[arg(long = "box", default_value_t = DEFAULT_BOX)]
        box_len: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Weyl-pair and translation factor representations on finite bundles
    VerifyRep {
        #[arg(long, value_delimiter = ',', default_values_t = vec![2, 3, 4, 8])]
        n: Vec<usize>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct AlgebraArgs {
    /// Catalog name, e.g. galilei3 or abelian(2)
    #[arg(long)]
    algebra: Option<String>,
    /// Path to a JSON algebra file
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write the report here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Classify,
    Reduce,
    Bargmann,
    Schrodinger,
    VerifyRep,
}

/// Fully resolved settings of one run; embedded in every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub keep: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<PathBuf>,
    #[serde(default)]
    pub trivial_action: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<usize>,
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub box_len: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n: Vec<usize>,
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn empty(command: Command, output: OutputArgs) -> Self {
        RunConfig {
            command,
            algebra: None,
            config: None,
            degree: None,
            keep: Vec::new(),
            exponent: None,
            trivial_action: false,
            modes: None,
            box_len: None,
            tol: None,
            mass: None,
            n: Vec::new(),
            format: output.format,
            out: output.out,
        }
    }

    fn from_cli(cmd: Cmd) -> Self {
        match cmd {
            Cmd::Classify { algebra, degree, trivial_action, output } => RunConfig {
                algebra: algebra.algebra,
                config: algebra.config,
                degree: Some(degree),
                trivial_action,
                ..Self::empty(Command::Classify, output)
            },
            Cmd::Reduce { algebra, degree, keep, exponent, output } => RunConfig {
                algebra: algebra.algebra,
                config: algebra.config,
                degree: Some(degree),
                keep,
                exponent,
                ..Self::empty(Command::Reduce, output)
            },
            Cmd::Bargmann { algebra, output } => RunConfig {
                algebra: algebra.algebra,
                config: algebra.config,
                degree: Some(0),
                trivial_action: true,
                ..Self::empty(Command::Bargmann, output)
            },
            Cmd::Schrodinger { modes, box_len, tol, mass, output } => RunConfig {
                modes: Some(modes),
                box_len: Some(box_len),
                tol: Some(tol),
                mass: Some(mass),
                ..Self::empty(Command::Schrodinger, output)
            },
            Cmd::VerifyRep { n, tol, output } => {
                RunConfig { n, tol: Some(tol), ..Self::empty(Command::VerifyRep, output) }
            }
        }
    }

    /// Checks that the settings fit the command.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        let algebraic = matches!(self.command, Command::Classify | Command::Reduce | Command::Bargmann);
        if algebraic && self.algebra.is_some() == self.config.is_some() {
            return bad("give exactly one of --algebra and --config");
        }
        if algebraic && self.degree.is_none() {
            return bad("missing degree cap");
        }
        if self.command == Command::Bargmann && (self.degree != Some(0) || !self.trivial_action) {
            return bad("bargmann runs at degree 0 with the trivial action");
        }
        if self.command == Command::Reduce && self.keep.is_empty() {
            return bad("reduce needs --keep");
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return bad("tolerance must be positive");
            }
        }
        if self.command == Command::VerifyRep && self.n.is_empty() {
            return bad("verify-rep needs at least one --n");
        }
        Ok(())
    }

    fn realization(&self) -> Result<ActionRealization> {
        let act = match (&self.algebra, &self.config) {
            (Some(name), None) => catalog(name)?.1,
            (None, Some(path)) => load_realization(path)?,
            _ => return Err(Error::InvalidParameter("give exactly one of --algebra and --config".into())),
        };
        Ok(if self.trivial_action { act.to_trivial() } else { act })
    }
}

/// A command's machine-readable payload and its text rendering.
pub struct Outcome {
    pub payload: serde_json::Value,
    pub text: String,
    /// Set when a verification ran but did not meet its tolerance.
    pub failed_check: Option<String>,
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report serializes")
}

/// Runs a resolved configuration.
pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    match cfg.command {
        Command::Classify | Command::Bargmann => {
            let act = cfg.realization()?;
            let report = ExponentComplex::new(&act, cfg.degree.unwrap_or(0))?.classify()?;
            Ok(Outcome { payload: to_value(&report), text: report.render_text(), failed_check: None })
        }
        Command::Reduce => {
            let act = cfg.realization()?;
            let report = reduce_report(cfg, &act)?;
            Ok(Outcome { payload: to_value(&report), text: report.render_text(), failed_check: None })
        }
        Command::Schrodinger => {
            let suite = SuiteConfig {
                modes: cfg.modes.unwrap_or(DEFAULT_MODES),
                box_len: cfg.box_len.unwrap_or(DEFAULT_BOX),
                mass: cfg.mass.unwrap_or(1.0),
                tol: cfg.tol.unwrap_or(1e-9),
                ..SuiteConfig::default()
            };
            let report = gauge_suite(&suite)?;
            Ok(Outcome { payload: to_value(&report), text: report.render_text(), failed_check: None })
        }
        Command::VerifyRep => {
            let report = verify_report(&cfg.n, cfg.tol.unwrap_or(1e-9))?;
            let failed = (!report.passed).then(|| "a factor representation exceeded its tolerance".to_string());
            Ok(Outcome { payload: to_value(&report), text: report.render_text(), failed_check: failed })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReduceReport {
    pub algebra: String,
    pub chart: Vec<String>,
    pub degree_cap: u32,
    pub keep: Vec<String>,
    /// `cocycle-basis` or the exponent file that was reduced.
    pub source: String,
    pub reduced: usize,
    pub infeasible: usize,
    pub all_reduced: bool,
    /// Every witness re-verified by substitution and every certificate checked.
    pub all_verified: bool,
    /// How many inputs reduce when `Λ` need not be admissible.
    pub reducible_with_any_lambda: usize,
    pub elements: Vec<ReduceElement>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReduceElement {
    pub index: usize,
    pub input: ExponentRecord,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced: Option<ExponentRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<CertificateEntry>>,
    pub verified: bool,
    pub reducible_with_any_lambda: bool,
}

fn reduce_report(cfg: &RunConfig, act: &ActionRealization) -> Result<ReduceReport> {
    let degree = cfg.degree.unwrap_or(1);
    let cx = ExponentComplex::new(act, degree)?;
    let (inputs, source): (Vec<InfExponent>, String) = match &cfg.exponent {
        Some(path) => (vec![load_exponent(path, act, degree)?], path.display().to_string()),
        None => (cx.cocycle_space()?, "cocycle-basis".into()),
    };
    let names = act.algebra().names();
    let mut elements = Vec::with_capacity(inputs.len());
    for (index, xi) in inputs.iter().enumerate() {
        let any = cx.reduce_to_coordinates_any(xi, &cfg.keep)?.is_reduced();
        let element = match cx.reduce_to_coordinates(xi, &cfg.keep)? {
            Reduction::Reduced { lambda, reduced, verified } => ReduceElement {
                index,
                input: xi.to_record(act),
                status: "reduced".into(),
                lambda: Some(lambda.render(names, act.coords())),
                reduced: Some(reduced.to_record(act)),
                certificate: None,
                verified,
                reducible_with_any_lambda: any,
            },
            Reduction::Infeasible { certificate } => ReduceElement {
                index,
                input: xi.to_record(act),
                status: "infeasible".into(),
                lambda: None,
                reduced: None,
                verified: cx.verify_certificate(xi, &certificate)?,
                certificate: Some(certificate),
                reducible_with_any_lambda: any,
            },
        };
        elements.push(element);
    }
    let reduced = elements.iter().filter(|e| e.status == "reduced").count();
    Ok(ReduceReport {
        algebra: act.algebra().name().to_string(),
        chart: act.coords().to_vec(),
        degree_cap: degree,
        keep: cfg.keep.clone(),
        source,
        reduced,
        infeasible: elements.len() - reduced,
        all_reduced: reduced == elements.len(),
        all_verified: elements.iter().all(|e| e.verified),
        reducible_with_any_lambda: elements.iter().filter(|e| e.reducible_with_any_lambda).count(),
        elements,
    })
}

impl ReduceReport {
    pub fn render_text(&self) -> String {
        let mut s = format!(
            "reduce {} on ({}), degree cap {}, keep {{{}}}, source {}\n",
            self.algebra,
            self.chart.join(", "),
            self.degree_cap,
            self.keep.join(", "),
            self.source
        );
        s.push_str(&format!(
            "  {} inputs: {} reduced, {} infeasible, all verified: {}\n",
            self.elements.len(),
            self.reduced,
            self.infeasible,
            self.all_verified
        ));
        s.push_str(&format!("  reducible with unrestricted Λ: {}\n", self.reducible_with_any_lambda));
        for e in &self.elements {
            let input: Vec<String> =
                e.input.entries.iter().map(|p| format!("Ξ({}, {}) = {}", p.pair[0], p.pair[1], p.value)).collect();
            s.push_str(&format!("  [{}] {}: {}\n", e.index, e.status, input.join("; ")));
            if let Some(l) = &e.lambda {
                if !l.is_empty() {
                    s.push_str(&format!("      {}\n", l.join("; ")));
                }
            }
            if let Some(c) = &e.certificate {
                let terms: Vec<String> = c
                    .iter()
                    .map(|w| format!("{} * coeff[{}, {}]{:?}", w.weight, w.pair[0], w.pair[1], w.monomial))
                    .collect();
                s.push_str(&format!("      certificate: {}\n", terms.join(" + ")));
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylCheck {
    pub n: usize,
    pub summary: VerificationSummary,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub tol: f64,
    pub weyl: Vec<WeylCheck>,
    pub translation: VerificationSummary,
    pub passed: bool,
}

fn verify_report(ns: &[usize], tol: f64) -> Result<VerifyReport> {
    let mut weyl = Vec::with_capacity(ns.len());
    for &n in ns {
        let summary = verify_weyl(n)?;
        let passed = summary.associativity_residual <= tol
            && summary.max_phase_error.is_some_and(|e| e <= tol)
            && summary.max_composite_unitarity_deviation <= 1e-12;
        weyl.push(WeylCheck { n, summary, passed });
    }
    let translation = translation_demo(6, 3)?.verify()?;
    let passed = weyl.iter().all(|w| w.passed) && translation.associativity_residual <= tol;
    Ok(VerifyReport { tol, weyl, translation, passed })
}

impl VerifyReport {
    pub fn render_text(&self) -> String {
        let mut s = String::from("  n    group  phase error  associativity  unitarity    ok\n");
        for w in &self.weyl {
            s.push_str(&format!(
                "  {:<4} {:<6} {:<12.2e} {:<14.2e} {:<12.2e} {}\n",
                w.n,
                w.summary.group_order,
                w.summary.max_phase_error.unwrap_or(f64::NAN),
                w.summary.associativity_residual,
                w.summary.max_composite_unitarity_deviation,
                w.passed
            ));
        }
        s.push_str(&format!(
            "translation demo: {} base points, fiber {}, associativity {:.2e}\n",
            self.translation.base_points, self.translation.fiber_dim, self.translation.associativity_residual
        ));
        s
    }
}

/// Exit code for a library error: 1 for bad input, 2 for computation failures.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::UnknownAlgebra(_)
        | Error::InvalidParameter(_)
        | Error::Config(_)
        | Error::Io(_)
        | Error::Antisymmetry(..)
        | Error::Jacobi(_)
        | Error::Homomorphism(_)
        | Error::Grid(_)
        | Error::ParseRational(_)
        | Error::Dimension { .. }
        | Error::Chart { .. } => 1,
        _ => 2,
    }
}

/// Parses arguments, runs the command and writes the report. Returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let cfg = RunConfig::from_cli(cli.command);
    let outcome = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("covexp: {e}");
            return exit_code(&e);
        }
    };
    let rendered = match cfg.format {
        Format::Json => ReportEnvelope::new(cfg.clone(), outcome.payload).to_json() + "\n",
        Format::Text => outcome.text,
    };
    match &cfg.out {
        Some(path) => {
            if let Err(e) = write_atomic(path, &rendered) {
                eprintln!("covexp: {e}");
                return 1;
            }
        }
        None => print!("{rendered}"),
    }
    if let Some(msg) = outcome.failed_check {
        eprintln!("covexp: {msg}");
        return 2;
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        let cli = Cli::try_parse_from(std::iter::once("covexp").chain(args.iter().copied())).unwrap();
        RunConfig::from_cli(cli.command)
    }

    #[test]
    fn bargmann_is_classify_at_degree_zero() {
        let b = parse(&["bargmann", "--algebra", "galilei1"]);
        assert_eq!((b.degree, b.trivial_action), (Some(0), true));
        let c = parse(&["classify", "--algebra", "galilei1", "--trivial-action"]);
        assert_eq!(execute(&b).unwrap().payload, execute(&c).unwrap().payload);
    }

    #[test]
    fn algebra_and_config_are_exclusive() {
        let r = Cli::try_parse_from(["covexp", "classify", "--algebra", "so3", "--config", "x.json"]);
        assert!(r.is_err());
        assert!(Cli::try_parse_from(["covexp", "classify"]).is_err());
    }

    #[test]
    fn keep_splits_on_commas() {
        let r = parse(&["reduce", "--algebra", "galilei3", "--keep", "t,x"]);
        assert_eq!(r.keep, vec!["t", "x"]);
    }

    #[test]
    fn run_config_round_trips() {
        let r = parse(&["schrodinger", "--modes", "64", "--box", "20"]);
        let js = serde_json::to_string(&r).unwrap();
        assert!(js.contains("\"box\":20"));
        let back: RunConfig = serde_json::from_str(&js).unwrap();
        assert_eq!(back, r);
        assert!(serde_json::from_str::<RunConfig>(&js.replace("\"box\"", "\"width\"")).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["covexp", "classify", "--algebra", "nosuch"]), 1);
        assert_eq!(run(["covexp", "frobnicate"]), 1);
        assert_eq!(run(["covexp", "--help"]), 0);
        assert_eq!(exit_code(&Error::NotCocycle(1)), 2);
    }
}
