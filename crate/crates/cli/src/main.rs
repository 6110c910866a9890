//! Command-line front end. Builds the bundled instances, runs the exact
//! sweeps and property checks, and renders reports as text, CSV, or JSON.
//!
//! Exit codes: 0 when the requested claim holds or the check passes, 1 when
//! it is refuted (a witness is reported), 2 on usage or input errors.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use efx_core::efx::{
    enumerate_allocations, instance_threshold_with, is_alpha_efx, Allocation, ThresholdOptions,
    ViolationWitness,
};
use efx_core::instances::{built_in, extend_with_dummies, NamedInstance, BUILT_IN_IDS};
use efx_core::io::{instance_to_value, load_instance, to_canonical_json};
use efx_core::miner::{mine, Generator, Obstruction, SearchSpec};
use efx_core::numeric::{parse_rational, ExactValue, ExtendedValue};
use efx_core::prooflab::{check_case, check_level_table, AllocationCase, ProoflabError};
use efx_core::setfn::{ClassReport, ClassWitness, GroundSet, Polarity};
use efx_core::transform::{rank_compress, separation_factor, TransformError};

const DECIMAL_DIGITS: usize = 12;

#[derive(Parser)]
#[command(name = "efx", version, about = "Exact EFX checks for chore division instances")]
struct Cli {
    /// Report format. Instance documents from `build` and `compress` are
    /// always canonical JSON regardless of this flag.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a built-in instance as canonical JSON.
    Build {
        /// One of: cs24, warmup7, fourlevel, fourlevel-compressed, coverage2019.
        id: String,
        /// Growth parameter for cs24 (a rational > 2; ignored elsewhere).
        #[arg(long)]
        k: Option<String>,
        /// Extra all-zero items appended to the ground set, comma separated.
        #[arg(long, value_delimiter = ',')]
        dummies: Vec<String>,
        /// Write the document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether any allocation of an instance is alpha-EFX.
    ///
    /// Exit 0 certifies that no alpha-EFX allocation exists; exit 1 reports
    /// a witness allocation that is alpha-EFX.
    Verify {
        instance: PathBuf,
        /// Accepts `a`, `a/b`, `2^(p/q)`, and `m*2^(p/q)` forms.
        #[arg(long, default_value = "1")]
        alpha: String,
    },
    /// Compute the exact instance threshold alpha*.
    ///
    /// Exit 0 unless the instance carries a claimed bound that the computed
    /// threshold fails to certify.
    Threshold {
        instance: PathBuf,
        /// Write per-allocation critical ratios to this CSV file.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Report normalization, monotonicity, subadditivity, and submodularity
    /// per agent.
    ///
    /// Exit 0 when every agent is normalized and monotone; the other two
    /// properties are informational.
    Classes { instance: PathBuf },
    /// Rank-compress an instance onto a geometric value ladder.
    Compress {
        instance: PathBuf,
        /// Ladder size; defaults to the largest level count present.
        #[arg(long)]
        levels: Option<usize>,
        /// Write the document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact separation factor of a cardinal profile against an ordinal one.
    Separation { ordinal: PathBuf, cardinal: PathBuf },
    /// Re-run one case of the non-existence argument on an instance.
    Prooflab {
        /// One of: two-specials, matching-special, derangement, level-table.
        case: String,
        instance: PathBuf,
    },
    /// Search for profiles without any EFX allocation.
    Mine {
        #[arg(long, value_enum)]
        generator: GeneratorKind,
        /// Agent count (taken from --base when given).
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Item count; items are named g0, g1, ... (taken from --base when given).
        #[arg(long, default_value_t = 6)]
        items: usize,
        /// Largest number of distinct levels an agent may use.
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum number of candidate profiles examined.
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        /// Instance to perturb; required for perturb-instance.
        #[arg(long)]
        base: Option<PathBuf>,
        /// Level flips per perturbed candidate.
        #[arg(long, default_value_t = 2)]
        max_flips: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GeneratorKind {
    ExhaustiveSmall,
    PerturbInstance,
    RandomMonotone,
}

impl GeneratorKind {
    fn name(self) -> &'static str {
        match self {
            GeneratorKind::ExhaustiveSmall => "exhaustive-small",
            GeneratorKind::PerturbInstance => "perturb-instance",
            GeneratorKind::RandomMonotone => "random-monotone",
        }
    }
}

/// Either a raw instance document or a rendered report.
enum Out {
    Doc(String),
    Report(Report),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, code)) => {
            match out {
                Out::Doc(text) => print!("{text}"),
                Out::Report(report) => print!("{}", report.render(cli.format)),
            }
            ExitCode::from(code)
        }
        Err(err) => {
            eprintln!("error: {}", error_chain(&err));
            ExitCode::from(2)
        }
    }
}

/// Joins the cause chain, skipping causes already embedded in their
/// wrapper's own message (self-describing and `transparent` errors).
fn error_chain(err: &anyhow::Error) -> String {
    let mut text = err.to_string();
    for cause in err.chain().skip(1) {
        let cause = cause.to_string();
        if !text.ends_with(&cause) {
            text.push_str(": ");
            text.push_str(&cause);
        }
    }
    text
}

fn run(cli: &Cli) -> Result<(Out, u8)> {
    let started = Instant::now();
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let echo = format!("efx {}", echo.join(" "));
    match &cli.command {
        Command::Build {
            id,
            k,
            dummies,
            out,
        } => cmd_build(id, k.as_deref(), dummies, out.as_deref(), &echo, started),
        Command::Verify { instance, alpha } => cmd_verify(instance, alpha, &echo, started),
        Command::Threshold { instance, table } => {
            cmd_threshold(instance, table.as_deref(), &echo, started)
        }
        Command::Classes { instance } => cmd_classes(instance, &echo, started),
        Command::Compress {
            instance,
            levels,
            out,
        } => cmd_compress(instance, *levels, out.as_deref(), &echo, started),
        Command::Separation { ordinal, cardinal } => {
            cmd_separation(ordinal, cardinal, &echo, started)
        }
        Command::Prooflab { case, instance } => cmd_prooflab(case, instance, &echo, started),
        Command::Mine {
            generator,
            n,
            items,
            levels,
            seed,
            budget,
            base,
            max_flips,
        } => cmd_mine(
            *generator,
            *n,
            *items,
            *levels,
            *seed,
            *budget,
            base.as_deref(),
            *max_flips,
            &echo,
            started,
        ),
    }
}

// ---------------------------------------------------------------- reports

/// Ordered key/value report. JSON output sorts keys (canonical form); text
/// and CSV keep insertion order.
struct Report {
    fields: Vec<(String, Value)>,
}

impl Report {
    fn new(echo: &str) -> Self {
        Report {
            fields: vec![("command".to_string(), Value::String(echo.to_string()))],
        }
    }

    fn push(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.fields.push((key.into(), value.into()));
    }

    /// Exact string plus a sibling `_decimal` annotation.
    fn push_exact(&mut self, key: &str, v: &ExactValue) {
        self.push(key, v.to_string());
        self.push(format!("{key}_decimal"), v.to_decimal(DECIMAL_DIGITS));
    }

    fn push_extended(&mut self, key: &str, v: &ExtendedValue) {
        self.push(key, v.to_string());
        self.push(format!("{key}_decimal"), v.to_decimal(DECIMAL_DIGITS));
    }

    fn push_instance(&mut self, label: &str, inst: &NamedInstance) {
        let canonical = to_canonical_json(inst);
        self.push(label, inst.id.clone());
        self.push(format!("{label}_sha256"), sha256_hex(canonical.as_bytes()));
    }

    fn done(mut self, started: Instant) -> Self {
        let ms = started.elapsed().as_millis() as u64;
        self.push("elapsed_ms", ms);
        self
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let map: serde_json::Map<String, Value> = self.fields.iter().cloned().collect();
                let mut text =
                    serde_json::to_string_pretty(&Value::Object(map)).expect("report serializes");
                text.push('\n');
                text
            }
            Format::Text => {
                let mut text = String::new();
                for (key, value) in &self.fields {
                    let _ = writeln!(text, "{key}: {}", text_value(value));
                }
                text
            }
            Format::Csv => {
                let mut text = String::from("key,value\n");
                for (key, value) in &self.fields {
                    let rendered = match value {
                        Value::String(s) => s.clone(),
                        Value::Null => String::new(),
                        other => other.to_string(),
                    };
                    let _ = writeln!(text, "{},{}", csv_field(key), csv_field(&rendered));
                }
                text
            }
        }
    }
}

fn text_value(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        Value::Array(entries) => {
            let compact = value.to_string();
            if compact.len() <= 100 {
                compact
            } else {
                format!("[{} entries; use --format json]", entries.len())
            }
        }
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut hex = String::with_capacity(digest.len() * 2);
    for b in digest {
        let _ = write!(hex, "{b:02x}");
    }
    hex
}

fn load(path: &Path) -> Result<NamedInstance> {
    load_instance(path).with_context(|| format!("reading `{}`", path.display()))
}

/// Worker cap from EFX_WORKERS; 0 or unset picks the machine default.
fn workers_from_env() -> Result<usize> {
    match std::env::var("EFX_WORKERS") {
        Err(_) => Ok(0),
        Ok(s) => s
            .trim()
            .parse()
            .with_context(|| format!("EFX_WORKERS must be a nonnegative integer, got `{s}`")),
    }
}

fn polarity_name(p: Polarity) -> &'static str {
    match p {
        Polarity::Chores => "chores",
        Polarity::Goods => "goods",
    }
}

fn bundle_names(bundle: efx_core::setfn::Bundle, ground: &GroundSet) -> String {
    format!("{{{}}}", bundle.names(ground).join(","))
}

fn witness_line(w: &ViolationWitness, ground: &GroundSet) -> String {
    format!(
        "agent {} drops {} against agent {}: {} vs {}",
        w.envier,
        ground.name(w.item),
        w.rival,
        w.envier_value,
        w.rival_value
    )
}

// --------------------------------------------------------------- commands

fn cmd_build(
    id: &str,
    k: Option<&str>,
    dummies: &[String],
    out: Option<&Path>,
    echo: &str,
    started: Instant,
) -> Result<(Out, u8)> {
    let k = k
        .map(parse_rational)
        .transpose()
        .context("parsing --k")?;
    let mut inst = built_in(id, k)
        .with_context(|| format!("building `{id}` (known ids: {})", BUILT_IN_IDS.join(", ")))?;
    if !dummies.is_empty() {
        inst = extend_with_dummies(&inst, dummies)?;
    }
    emit_document(inst, out, echo, started)
}

fn emit_document(
    inst: NamedInstance,
    out: Option<&Path>,
    echo: &str,
    started: Instant,
) -> Result<(Out, u8)> {
    let text = to_canonical_json(&inst);
    match out {
        None => Ok((Out::Doc(text), 0)),
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing `{}`", path.display()))?;
            let mut report = Report::new(echo);
            report.push("instance", inst.id);
            report.push("instance_sha256", sha256_hex(text.as_bytes()));
            report.push("out", path.display().to_string());
            Ok((Out::Report(report.done(started)), 0))
        }
    }
}

fn cmd_verify(path: &Path, alpha: &str, echo: &str, started: Instant) -> Result<(Out, u8)> {
    let inst = load(path)?;
    let alpha: ExactValue = alpha.parse().context("parsing --alpha")?;
    let mut report = Report::new(echo);
    report.push_instance("instance", &inst);
    report.push("polarity", polarity_name(inst.profile.polarity()));
    report.push_exact("alpha", &alpha);
    report.push("claim", format!("no {alpha}-EFX allocation exists"));

    let code = match inst.profile.polarity() {
        Polarity::Chores => {
            if alpha < ExactValue::one() {
                bail!("chores alpha must be at least 1, got {alpha}");
            }
            let options = ThresholdOptions {
                workers: workers_from_env()?,
                collect_table: false,
            };
            let sweep = instance_threshold_with(&inst.profile, &options)?;
            report.push("allocations", sweep.allocations);
            report.push_extended("alpha_star", &sweep.alpha_star);
            if ExtendedValue::Finite(alpha.clone()) >= sweep.alpha_star {
                report.push("verdict", "refuted");
                report.push("witness_allocation", sweep.argmin.to_string());
                report.push_extended("witness_critical_alpha", &sweep.alpha_star);
                1
            } else {
                report.push("verdict", "certified");
                0
            }
        }
        Polarity::Goods => {
            // No parallel goods sweep; the spaces this tool targets are small.
            let mut examined = 0u64;
            let mut witness = None;
            for x in enumerate_allocations(inst.profile.agent_count(), inst.profile.ground())? {
                examined += 1;
                if is_alpha_efx(&inst.profile, &x, &alpha)?.is_none() {
                    witness = Some(x);
                    break;
                }
            }
            report.push("allocations", examined);
            match witness {
                Some(x) => {
                    report.push("verdict", "refuted");
                    report.push("witness_allocation", x.to_string());
                    1
                }
                None => {
                    report.push("verdict", "certified");
                    0
                }
            }
        }
    };
    Ok((Out::Report(report.done(started)), code))
}

fn cmd_threshold(
    path: &Path,
    table: Option<&Path>,
    echo: &str,
    started: Instant,
) -> Result<(Out, u8)> {
    let inst = load(path)?;
    let options = ThresholdOptions {
        workers: workers_from_env()?,
        collect_table: table.is_some(),
    };
    let sweep = instance_threshold_with(&inst.profile, &options)?;

    if let Some(out) = table {
        let rows = sweep.table.as_ref().expect("table was requested");
        let agents = inst.profile.agent_count();
        let items = inst.profile.ground().len();
        let mut text = String::from("index,allocation,critical_alpha,critical_alpha_decimal\n");
        for (index, critical) in rows.iter().enumerate() {
            let word = Allocation::from_index(index as u64, agents, items);
            let _ = writeln!(
                text,
                "{index},{word},{critical},{}",
                critical.to_decimal(DECIMAL_DIGITS)
            );
        }
        fs::write(out, text).with_context(|| format!("writing `{}`", out.display()))?;
    }

    let mut report = Report::new(echo);
    report.push_instance("instance", &inst);
    report.push("allocations", sweep.allocations);
    report.push("workers", sweep.workers as u64);
    report.push_extended("alpha_star", &sweep.alpha_star);
    report.push("argmin_allocation", sweep.argmin.to_string());
    let code = match &inst.claimed_bound {
        None => {
            report.push("verdict", "computed");
            0
        }
        Some(claimed) => {
            let certified = ExtendedValue::Finite(claimed.clone()) <= sweep.alpha_star;
            report.push_exact("claimed_bound", claimed);
            report.push("certified", certified);
            report.push("verdict", if certified { "certified" } else { "refuted" });
            u8::from(!certified)
        }
    };
    Ok((Out::Report(report.done(started)), code))
}

fn cmd_classes(path: &Path, echo: &str, started: Instant) -> Result<(Out, u8)> {
    let inst = load(path)?;
    let ground = inst.profile.ground();
    let mut report = Report::new(echo);
    report.push_instance("instance", &inst);
    report.push("polarity", polarity_name(inst.profile.polarity()));

    let mut well_formed = true;
    for (i, f) in inst.profile.agents().iter().enumerate() {
        let mut parts = Vec::new();
        let mut extras = Vec::new();
        well_formed &= record_class(i, ground, f.check_normalized(), &mut parts, &mut extras);
        well_formed &= record_class(i, ground, f.check_monotone(), &mut parts, &mut extras);
        match f.check_subadditive() {
            Ok(rep) => {
                record_class(i, ground, rep, &mut parts, &mut extras);
            }
            Err(e) => parts.push(format!("subadditive skipped ({e})")),
        }
        match f.check_submodular() {
            Ok(rep) => {
                record_class(i, ground, rep, &mut parts, &mut extras);
            }
            Err(e) => parts.push(format!("submodular skipped ({e})")),
        }
        report.push(format!("agent{i}"), parts.join(", "));
        for (key, value) in extras {
            report.push(key, value);
        }
    }
    report.push("well_formed", well_formed);
    report.push("verdict", if well_formed { "certified" } else { "refuted" });
    Ok((Out::Report(report.done(started)), u8::from(!well_formed)))
}

/// Adds `<property> ok|violated` to `parts`, stashes any witness, and
/// returns whether the property holds.
fn record_class(
    agent: usize,
    ground: &GroundSet,
    rep: ClassReport,
    parts: &mut Vec<String>,
    extras: &mut Vec<(String, String)>,
) -> bool {
    let ClassReport {
        property,
        holds,
        witness,
    } = rep;
    parts.push(format!("{property} {}", if holds { "ok" } else { "violated" }));
    if let Some(w) = witness {
        extras.push((
            format!("agent{agent}_{property}_witness"),
            class_witness_line(&w, ground),
        ));
    }
    holds
}

fn class_witness_line(w: &ClassWitness, ground: &GroundSet) -> String {
    let bundles: Vec<String> = w.bundles.iter().map(|b| bundle_names(*b, ground)).collect();
    let values: Vec<String> = w.values.iter().map(ExactValue::to_string).collect();
    format!("bundles {} values {}", bundles.join(" "), values.join(" "))
}

fn cmd_compress(
    path: &Path,
    levels: Option<usize>,
    out: Option<&Path>,
    echo: &str,
    started: Instant,
) -> Result<(Out, u8)> {
    let inst = load(path)?;
    let profile = rank_compress(&inst.profile, levels)?;
    let provenance = match levels {
        Some(l) => format!("rank compression of `{}` onto a {l}-level ladder", inst.id),
        None => format!("rank compression of `{}`", inst.id),
    };
    let compressed = NamedInstance {
        id: format!("{}-compressed", inst.id),
        profile,
        provenance,
        // The geometric bound needs the base to have no EFX allocation,
        // which this command does not check.
        claimed_bound: None,
    };
    emit_document(compressed, out, echo, started)
}

fn cmd_separation(
    ordinal_path: &Path,
    cardinal_path: &Path,
    echo: &str,
    started: Instant,
) -> Result<(Out, u8)> {
    let ordinal = load(ordinal_path)?;
    let cardinal = load(cardinal_path)?;
    let mut report = Report::new(echo);
    report.push_instance("ordinal", &ordinal);
    report.push_instance("cardinal", &cardinal);
    let code = match separation_factor(&ordinal.profile, &cardinal.profile) {
        Ok(factor) => {
            report.push_exact("factor", &factor);
            report.push("verdict", "certified");
            0
        }
        Err(TransformError::SeparationBroken {
            agent,
            finer,
            coarser,
        }) => {
            let ground = ordinal.profile.ground();
            report.push("verdict", "refuted");
            report.push("violating_agent", agent as u64);
            report.push("finer_bundle", bundle_names(finer, ground));
            report.push("coarser_bundle", bundle_names(coarser, ground));
            1
        }
        Err(other) => return Err(other.into()),
    };
    Ok((Out::Report(report.done(started)), code))
}

fn cmd_prooflab(case: &str, path: &Path, echo: &str, started: Instant) -> Result<(Out, u8)> {
    let inst = load(path)?;
    let mut report = Report::new(echo);
    report.push("case", case);
    report.push_instance("instance", &inst);

    if case == "level-table" {
        let code = match check_level_table(&inst.profile) {
            Ok(table) => {
                for (level, image) in table.images[0].iter().enumerate() {
                    let values: Vec<String> = image.iter().map(ExactValue::to_string).collect();
                    report.push(format!("level{level}_image"), values.join(","));
                }
                for (level, gap) in table.adjacent_gaps.iter().enumerate() {
                    report.push_exact(&format!("gap_level{}_to_{}", level, level + 1), gap);
                }
                report.push_exact("min_gap", &table.min_gap);
                report.push("verdict", "certified");
                0
            }
            Err(
                e @ (ProoflabError::LevelValueMismatch { .. }
                | ProoflabError::LevelValueMissing { .. }),
            ) => {
                report.push("verdict", "refuted");
                report.push("violation", e.to_string());
                1
            }
            Err(other) => return Err(other.into()),
        };
        return Ok((Out::Report(report.done(started)), code));
    }

    let family: AllocationCase = case
        .parse::<AllocationCase>()
        .map_err(|e| anyhow::anyhow!("{e} (this command also accepts level-table)"))?;
    let rep = check_case(&inst.profile, family)?;
    let ground = inst.profile.ground();
    report.push("allocations_in_case", rep.allocation_count as u64);
    report.push("violated", rep.witnesses.len() as u64);
    report.push("all_violated", rep.all_violated);
    report.push_extended("min_ratio", &rep.min_ratio);
    if let Some((x, w)) = rep
        .witnesses
        .iter()
        .min_by(|(_, a), (_, b)| a.ratio.cmp(&b.ratio))
    {
        report.push("min_ratio_allocation", x.to_string());
        report.push("min_ratio_witness", witness_line(w, ground));
    }
    if let Some(max) = rep.witnesses.iter().map(|(_, w)| &w.ratio).max() {
        report.push_extended("max_ratio", max);
    }
    if !rep.all_violated {
        let agents = inst.profile.agent_count();
        let covered: BTreeSet<u64> = rep.witnesses.iter().map(|(x, _)| x.index(agents)).collect();
        let missing = enumerate_allocations(agents, ground)?
            .find(|x| {
                efx_core::prooflab::classify(x).is_ok_and(|c| c == family)
                    && !covered.contains(&x.index(agents))
            })
            .map(|x| x.to_string());
        if let Some(word) = missing {
            report.push("first_unviolated", word);
        }
    }
    report.push("verdict", if rep.all_violated { "certified" } else { "refuted" });
    Ok((
        Out::Report(report.done(started)),
        u8::from(!rep.all_violated),
    ))
}

#[allow(clippy::too_many_arguments)]
fn cmd_mine(
    kind: GeneratorKind,
    n: usize,
    items: usize,
    levels: usize,
    seed: u64,
    budget: u64,
    base: Option<&Path>,
    max_flips: usize,
    echo: &str,
    started: Instant,
) -> Result<(Out, u8)> {
    let base = base.map(load).transpose()?;
    if matches!(kind, GeneratorKind::PerturbInstance) != base.is_some() {
        bail!("--base is required for --generator perturb-instance and invalid otherwise");
    }
    let (agents, ground) = match &base {
        Some(b) => (b.profile.agent_count(), b.profile.ground().clone()),
        None => {
            let names: Vec<String> = (0..items).map(|i| format!("g{i}")).collect();
            (n, GroundSet::new(names)?)
        }
    };
    let generator = match (kind, base) {
        (GeneratorKind::ExhaustiveSmall, _) => Generator::ExhaustiveSmall,
        (GeneratorKind::RandomMonotone, _) => Generator::RandomMonotone,
        (GeneratorKind::PerturbInstance, Some(b)) => Generator::PerturbInstance {
            base: b.profile,
            max_flips,
        },
        (GeneratorKind::PerturbInstance, None) => unreachable!("checked above"),
    };
    let spec = SearchSpec {
        agents,
        ground: ground.clone(),
        level_cap: levels,
        generator,
        seed,
        budget,
    };
    let outcome = mine(&spec)?;

    let mut report = Report::new(echo);
    report.push("generator", kind.name());
    report.push("agents", agents as u64);
    report.push("items", ground.len() as u64);
    report.push("level_cap", levels as u64);
    report.push("seed", seed);
    report.push("budget", budget);
    report.push("examined", outcome.examined);
    report.push("exhausted", outcome.exhausted);
    report.push("obstruction_count", outcome.obstructions.len() as u64);
    for (i, ob) in outcome.obstructions.iter().enumerate() {
        report.push(
            format!("obstruction{i}"),
            format!(
                "levels {:?}, alpha_star {}, compression bound {}",
                ob.level_counts, ob.certificate.alpha_star, ob.implied_bound
            ),
        );
    }
    let detailed: Vec<Value> = outcome
        .obstructions
        .iter()
        .enumerate()
        .map(|(i, ob)| obstruction_value(i, ob, agents, &ground))
        .collect();
    report.push("obstructions", Value::Array(detailed));
    Ok((Out::Report(report.done(started)), 0))
}

fn obstruction_value(index: usize, ob: &Obstruction, agents: usize, ground: &GroundSet) -> Value {
    let claimed = match &ob.certificate.alpha_star {
        ExtendedValue::Finite(v) => Some(v.clone()),
        ExtendedValue::PositiveInfinity => None,
    };
    let inst = NamedInstance {
        id: format!("mined-{index}"),
        profile: ob.profile.clone(),
        provenance: "found by `efx mine`".to_string(),
        claimed_bound: claimed,
    };
    let items = ground.len();
    let certificate: Vec<Value> = ob
        .certificate
        .certificate
        .as_deref()
        .unwrap_or_default()
        .iter()
        .enumerate()
        .map(|(idx, w)| {
            json!({
                "allocation": Allocation::from_index(idx as u64, agents, items).to_string(),
                "envier": w.envier,
                "item": ground.name(w.item),
                "rival": w.rival,
                "envier_value": w.envier_value.to_string(),
                "rival_value": w.rival_value.to_string(),
                "ratio": w.ratio.to_string(),
            })
        })
        .collect();
    json!({
        "instance": instance_to_value(&inst),
        "level_counts": ob.level_counts,
        "implied_bound": ob.implied_bound.to_string(),
        "implied_bound_decimal": ob.implied_bound.to_decimal(DECIMAL_DIGITS),
        "alpha_star": ob.certificate.alpha_star.to_string(),
        "alpha_star_decimal": ob.certificate.alpha_star.to_decimal(DECIMAL_DIGITS),
        "allocations": ob.certificate.allocations,
        "certificate": certificate,
    })
}
