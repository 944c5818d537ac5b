use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use olcvar::adaptation::{adapt_olc, AdaptedOlc, Selection};
use olcvar::compliance::{check_compliance_with, CheckOptions};
use olcvar::model::{export_dot, trace_cap_from_env};
use olcvar::pipeline::run_pipeline;
use olcvar::sequence::parse_sd;
use olcvar::variant::{generate_variant, verify_variant_with, VerifyOptions};
use olcvar::{
    compose, parse_model, serialize_model, CompositeOlc, ConformanceMode, ModelFormat, ObjectLifeCycle, ProcessModel,
    SyncSpec, ValidationReport, Verdict,
};

#[derive(Parser)]
#[command(name = "olcvar", version, about = "Object life cycle based process variant generation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an OLC, adapted OLC, process model or sequence diagram.
    Validate(ValidateArgs),
    /// Compose single-object OLCs into their synchronized product.
    Compose(ComposeArgs),
    /// Check a process model for conformance and coverage against an OLC.
    Check(CheckArgs),
    /// Insert break fragments of a sequence diagram into an OLC.
    Adapt(AdaptArgs),
    /// Generate and verify a variant from a base model and an adapted OLC.
    Variant(VariantArgs),
    /// Render a process model as a Graphviz digraph.
    ExportDot(ExportDotArgs),
    /// Adapt, generate and verify in one run.
    Pipeline(PipelineArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Olc,
    Model,
    Sd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Trace,
    Structural,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    BpmnXml,
}

impl From<Format> for ModelFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ModelFormat::Json,
            Format::BpmnXml => ModelFormat::BpmnXml,
        }
    }
}

#[derive(Args)]
struct ValidateArgs {
    file: PathBuf,
    /// Document kind; guessed from the content when omitted.
    #[arg(long, value_enum)]
    kind: Option<Kind>,
}

#[derive(Args)]
struct ComposeArgs {
    #[arg(long = "olc", required = true, num_args = 1..)]
    olcs: Vec<PathBuf>,
    #[arg(long)]
    sync: Option<PathBuf>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    olc: PathBuf,
    #[arg(long, value_enum, default_value = "trace")]
    mode: Mode,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SelectArgs {
    /// Insert only this break fragment.
    #[arg(long)]
    select: Option<String>,
    /// Insert every break fragment, in diagram order.
    #[arg(long)]
    all: bool,
}

impl SelectArgs {
    fn selection(&self) -> Selection {
        match &self.select {
            Some(id) => Selection::One(id.clone()),
            None => Selection::All,
        }
    }
}

#[derive(Args)]
struct AdaptArgs {
    #[arg(long)]
    olc: PathBuf,
    #[arg(long)]
    sd: PathBuf,
    #[command(flatten)]
    select: SelectArgs,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VariantArgs {
    #[arg(long)]
    base: PathBuf,
    #[arg(long)]
    aolc: PathBuf,
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Also require coverage of the whole adapted OLC.
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the verification report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ExportDotArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    base: PathBuf,
    #[arg(long)]
    olc: PathBuf,
    #[arg(long)]
    sd: PathBuf,
    #[command(flatten)]
    select: SelectArgs,
    /// Write the variant here.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Write the adapted OLC here.
    #[arg(long)]
    aolc_out: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

fn load_olc(path: &Path) -> Result<CompositeOlc> {
    let olc = CompositeOlc::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    let report = olc.validate();
    if report.has_errors() {
        bail!("{} is not a valid life cycle: {}", path.display(), first_error(&report));
    }
    Ok(olc)
}

fn load_aolc(path: &Path) -> Result<AdaptedOlc> {
    let aolc = AdaptedOlc::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    let report = aolc.validate();
    if report.has_errors() {
        bail!("{} is not a valid adapted life cycle: {}", path.display(), first_error(&report));
    }
    Ok(aolc)
}

fn load_model(path: &Path) -> Result<ProcessModel> {
    parse_model(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn first_error(report: &ValidationReport) -> String {
    report.errors().next().map(ToString::to_string).unwrap_or_default()
}

fn summarize(what: &str, verdict: Verdict, violations: usize) {
    eprintln!("{what}: {verdict} ({violations} violation(s))");
}

fn run(command: Command) -> Result<Verdict> {
    let cap = trace_cap_from_env();
    match command {
        Command::Validate(a) => validate(&a),
        Command::Compose(a) => {
            let olcs = a
                .olcs
                .iter()
                .map(|p| ObjectLifeCycle::from_json(&read(p)?).with_context(|| format!("in {}", p.display())))
                .collect::<Result<Vec<_>>>()?;
            let sync = match &a.sync {
                Some(p) => SyncSpec::from_json(&read(p)?).with_context(|| format!("in {}", p.display()))?,
                None => SyncSpec::default(),
            };
            let composition = compose(&olcs, &sync)?;
            for w in &composition.warnings {
                eprintln!("warning: {w}");
            }
            emit(a.out.as_deref(), &composition.olc.to_json())?;
            eprintln!(
                "composed {} states, {} transitions",
                composition.olc.states.len(),
                composition.olc.transitions.len()
            );
            Ok(Verdict::Pass)
        }
        Command::Check(a) => {
            let pm = load_model(&a.model)?;
            let olc = load_olc(&a.olc)?;
            let mode = match a.mode {
                Mode::Trace => ConformanceMode::Trace,
                Mode::Structural => ConformanceMode::Structural,
            };
            let report = check_compliance_with(&pm, &olc, &CheckOptions { mode, cap })?;
            emit(a.out.as_deref(), &to_json(&report))?;
            summarize("conformance", report.conformance.verdict, report.conformance.violations.len());
            summarize("coverage", report.coverage.verdict, report.coverage.violations.len());
            Ok(report.verdict)
        }
        Command::Adapt(a) => {
            let olc = load_olc(&a.olc)?;
            let sd = parse_sd(&read(&a.sd)?).with_context(|| format!("in {}", a.sd.display()))?;
            let aolc = adapt_olc(&AdaptedOlc::from(olc), &sd, &a.select.selection())?;
            emit(a.out.as_deref(), &aolc.to_json())?;
            eprintln!("inserted {} fragment(s)", aolc.insertions.len());
            Ok(Verdict::Pass)
        }
        Command::Variant(a) => {
            let base = load_model(&a.base)?;
            let aolc = load_aolc(&a.aolc)?;
            let vpm = generate_variant(&base, &aolc)?;
            let report = verify_variant_with(&vpm, &aolc, &VerifyOptions { strict: a.strict, cap })?;
            emit(a.out.as_deref(), &serialize_model(&vpm, a.format.into()))?;
            if let Some(p) = &a.report {
                emit(Some(p), &to_json(&report))?;
            }
            summarize("variant verification", report.verdict, report.violations.len());
            for v in &report.violations {
                eprintln!("  {v}");
            }
            Ok(report.verdict)
        }
        Command::ExportDot(a) => {
            let pm = load_model(&a.model)?;
            emit(a.out.as_deref(), &export_dot(&pm))?;
            Ok(Verdict::Pass)
        }
        Command::Pipeline(a) => {
            let base = load_model(&a.base)?;
            let olc = load_olc(&a.olc)?;
            let sd = parse_sd(&read(&a.sd)?).with_context(|| format!("in {}", a.sd.display()))?;
            let opts = VerifyOptions { strict: a.strict, cap };
            let out = run_pipeline(&base, &olc, &sd, &a.select.selection(), &opts)?;
            if let Some(p) = &a.aolc_out {
                emit(Some(p), &out.aolc.to_json())?;
            }
            if let Some(p) = &a.out {
                emit(Some(p), &serialize_model(&out.variant, a.format.into()))?;
            }
            emit(a.report.as_deref(), &to_json(&out.report))?;
            summarize("variant verification", out.report.verdict, out.report.violations.len());
            Ok(out.report.verdict)
        }
    }
}

fn guess_kind(text: &str) -> Result<Kind> {
    if text.trim_start().starts_with('<') {
        return Ok(Kind::Model);
    }
    let value: serde_json::Value = serde_json::from_str(text).context("not a JSON document")?;
    let has = |k: &str| value.get(k).is_some();
    if has("lifelines") {
        Ok(Kind::Sd)
    } else if has("nodes") {
        Ok(Kind::Model)
    } else if has("object") {
        Ok(Kind::Olc)
    } else {
        bail!("cannot tell what kind of document this is; pass --kind")
    }
}

fn validate(a: &ValidateArgs) -> Result<Verdict> {
    let text = read(&a.file)?;
    let kind = match a.kind {
        Some(k) => k,
        None => guess_kind(&text)?,
    };
    let in_file = || format!("in {}", a.file.display());
    match kind {
        Kind::Olc => {
            let report = AdaptedOlc::from_json(&text).with_context(in_file)?.validate();
            print!("{}", to_json(&report));
            for w in report.warnings() {
                eprintln!("warning: {w}");
            }
            let verdict = Verdict::from_pass(!report.has_errors());
            summarize("life cycle", verdict, report.errors().count());
            Ok(verdict)
        }
        Kind::Model => {
            let pm = parse_model(&text).with_context(in_file)?;
            eprintln!("process model {}: {} nodes, {} flows", pm.id, pm.node_count(), pm.edge_count());
            Ok(Verdict::Pass)
        }
        Kind::Sd => {
            let sd = parse_sd(&text).with_context(in_file)?;
            eprintln!("sequence diagram: {} messages, {} fragments", sd.messages.len(), sd.fragments.len());
            Ok(Verdict::Pass)
        }
    }
}
