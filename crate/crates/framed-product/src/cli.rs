//! The `framed` command line: generation, validation, decomposition,
//! product assignments, queue layouts, contraction sequences, bounds and
//! seeded corpus runs.
//!
//! Exit codes: 0 when every check passes, 1 on a verification failure,
//! 2 on a usage or input error. Each run prints its manifest as JSON.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::framed::{generate_framed, generate_triangulation, simplify, FramedGraph, GeneratorConfig};
use crate::io::{
    framed_dot, plane_graph_dot, read_instance, read_json, to_json, trigraph_dot, AssignmentFile, DecompositionFile, InstanceFile,
    RunManifest,
};
use crate::oracles::TREEWIDTH_CAP;
use crate::pipeline::{decompose_checked, product_checked, queues_checked, twinwidth_checked, Structure};
use crate::product::{bounds_table, verify_embedding, ClassTag, ProductMode, Quantity};
use crate::queues::{validate_queue_layout, QueueLayout};
use crate::twinwidth::{audit_sequence, ContractionSequence, Trigraph, TwinMode};

#[derive(Parser, Debug)]
#[command(name = "framed", version, about = "Product structure, queue layouts and twin-width for h-framed graphs")]
struct Cli {
    /// Write the run manifest here.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum GenMode {
    Triangulation,
    Framed,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ProdMode {
    T3,
    T4,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TwMode {
    Planar,
    Framed,
}

impl From<ProdMode> for ProductMode {
    fn from(m: ProdMode) -> Self {
        match m {
            ProdMode::T3 => ProductMode::T3,
            ProdMode::T4 => ProductMode::T4,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a seeded instance.
    Generate {
        #[arg(long, value_enum, default_value = "framed")]
        mode: GenMode,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        h: usize,
        #[arg(long, default_value_t = 0.5)]
        chord_density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Validate an instance and any artifacts computed from it.
    Validate {
        instance: PathBuf,
        #[arg(long)]
        decomposition: Option<PathBuf>,
        #[arg(long)]
        assignment: Option<PathBuf>,
        #[arg(long)]
        layout: Option<PathBuf>,
        #[arg(long)]
        sequence: Option<PathBuf>,
    },
    /// Compute a good partition, its quotient and tree decomposition.
    Decompose {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// `dot` writes the quotient graph instead of the JSON document.
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Largest quotient handed to the exact treewidth oracle.
        #[arg(long, default_value_t = TREEWIDTH_CAP)]
        max_n: usize,
    },
    /// Assign each vertex its coordinates in the strong product.
    Product {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "t3")]
        mode: ProdMode,
        #[arg(long)]
        decomposition: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Queue layout under the product order.
    Queues {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "t3")]
        mode: ProdMode,
        #[arg(long)]
        decomposition: Option<PathBuf>,
        #[arg(long)]
        assignment: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Largest instance for the per-class rainbow check.
        #[arg(long, default_value_t = 200)]
        max_n: usize,
    },
    /// Contraction sequence with its audit.
    Twinwidth {
        instance: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<TwMode>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Audit report path.
        #[arg(long)]
        audit: Option<PathBuf>,
        /// `dot` writes the trigraph just before the final pass.
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Look up a bound.
    Bounds {
        /// planar, 1-planar, optimal-2-planar, h-framed:H or k-map:K
        #[arg(long)]
        class: String,
        /// clique-t3, clique-t4, queue, nonrepetitive, p-centered or twinwidth
        #[arg(long)]
        quantity: String,
    },
    /// Run every stage over a seeded batch of instances.
    Corpus {
        #[arg(long, default_value_t = 3)]
        h: usize,
        /// Largest instance size; sizes are drawn from [4, n].
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        chord_density: f64,
        /// Directory for the summary and manifest.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Instance size cap for the exhaustive oracles.
        #[arg(long, default_value_t = 200)]
        max_n: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

/// Outcome of a subcommand before it is reported.
struct Outcome {
    passed: bool,
    summary: BTreeMap<String, Value>,
    outputs: Vec<String>,
    /// Printed instead of the manifest.
    text: Option<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { passed: true, summary: BTreeMap::new(), outputs: Vec::new(), text: None }
    }

    fn put<T: Serialize>(&mut self, key: &str, value: &T) -> Result<()> {
        self.summary.insert(key.to_string(), serde_json::to_value(value)?);
        Ok(())
    }

    fn check(&mut self, key: &str, violations: &[String]) -> Result<()> {
        if !violations.is_empty() {
            self.passed = false;
        }
        self.put(&format!("{key}_violations"), &violations)
    }

    fn write(&mut self, path: &Path, contents: &str) -> Result<()> {
        std::fs::write(path, contents)?;
        self.outputs.push(path.display().to_string());
        Ok(())
    }
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Io(_) => "io",
        Error::Json(_) => "json",
        Error::Invalid(_) | Error::VertexOutOfRange(_) | Error::NotACycle(_) | Error::Disconnected(_) | Error::RootNotOnOuterFace(_) => {
            "invalid-input"
        }
        Error::Precondition(_) | Error::TooSmall(..) | Error::TooLarge(..) => "precondition",
        Error::Unsupported(_) => "unsupported",
        Error::Contraction(_) => "contraction",
        Error::Internal { .. } => "internal",
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Reports go to `out`, diagnostics to `err`.
pub fn run_with_output<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let mut manifest = RunManifest::default();
    let start = Instant::now();
    let result = dispatch(&cli.command, &mut manifest);
    manifest.elapsed_ms = start.elapsed().as_millis();
    match result {
        Ok(o) => {
            manifest.passed = o.passed;
            manifest.summary = o.summary;
            manifest.outputs = o.outputs;
            let manifest_path = cli.manifest.clone().or_else(|| default_manifest_path(&cli.command));
            if let Some(p) = manifest_path {
                if let Err(e) = std::fs::write(&p, to_json(&manifest).unwrap_or_default()) {
                    let _ = writeln!(err, "{}", json!({"error": "io", "message": e.to_string()}));
                    return 2;
                }
            }
            let _ = match o.text {
                Some(t) => write!(out, "{t}"),
                None => write!(out, "{}", to_json(&manifest).unwrap_or_default()),
            };
            if o.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{}", json!({"error": error_kind(&e), "message": e.to_string(), "command": manifest.command}));
            2
        }
    }
}

/// Runs with the process arguments, printing to stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    run_with_output(args, &mut out, &mut err)
}

fn default_manifest_path(cmd: &Command) -> Option<PathBuf> {
    match cmd {
        Command::Corpus { out: Some(dir), .. } => Some(dir.join("manifest.json")),
        Command::Generate { out: Some(p), .. }
        | Command::Decompose { out: Some(p), .. }
        | Command::Product { out: Some(p), .. }
        | Command::Queues { out: Some(p), .. }
        | Command::Twinwidth { out: Some(p), .. } => {
            let mut s = p.clone().into_os_string();
            s.push(".manifest.json");
            Some(PathBuf::from(s))
        }
        _ => None,
    }
}

fn load_structure(g: &FramedGraph, decomposition: &Option<PathBuf>, o: &mut Outcome, m: &mut RunManifest) -> Result<Structure> {
    match decomposition {
        Some(p) => {
            m.inputs.push(path_str(p));
            let f: DecompositionFile = read_json(p)?;
            let rep = f.check(g)?;
            o.check("decomposition", &rep.violations)?;
            Ok(Structure::from_file(&f))
        }
        None => {
            let (top, dc) = decompose_checked(g, 0)?;
            o.check("decomposition", &dc.violations)?;
            Ok(Structure::from_top(&top))
        }
    }
}

fn dispatch(cmd: &Command, m: &mut RunManifest) -> Result<Outcome> {
    let mut o = Outcome::new();
    match cmd {
        Command::Generate { mode, n, h, chord_density, seed, out, format } => {
            m.command = "generate".into();
            (m.seed, m.h, m.n) = (Some(*seed), Some(*h), Some(*n));
            m.flags.insert("mode".into(), format!("{mode:?}").to_lowercase());
            m.flags.insert("chord_density".into(), chord_density.to_string());
            if !(0.0..=1.0).contains(chord_density) {
                return Err(Error::Precondition(format!("chord density {chord_density} outside [0, 1]")));
            }
            let g = match mode {
                GenMode::Triangulation => generate_triangulation(&GeneratorConfig::new(*n, 3, 0.0, *seed)),
                GenMode::Framed => {
                    if *h < 3 {
                        return Err(Error::Precondition(format!("h = {h} below 3")));
                    }
                    generate_framed(&GeneratorConfig::new(*n, *h, *chord_density, *seed))
                }
            };
            let text = match format {
                Format::Json => to_json(&InstanceFile::from_framed(&g))?,
                Format::Dot => framed_dot("instance", &g),
            };
            o.put("n", &g.n())?;
            o.put("h", &g.h)?;
            o.put("chords", &g.chords.len())?;
            match out {
                Some(p) => o.write(p, &text)?,
                None => o.text = Some(text),
            }
        }
        Command::Validate { instance, decomposition, assignment, layout, sequence } => {
            m.command = "validate".into();
            m.inputs.push(path_str(instance));
            let g = read_instance(instance)?;
            m.h = Some(g.h);
            m.n = Some(g.n());
            o.put("instance", &"valid")?;
            let sg = simplify(&g);
            let needs_structure = decomposition.is_some() || assignment.is_some();
            let st = if needs_structure { Some(load_structure(&g, decomposition, &mut o, m)?) } else { None };
            if let (Some(p), Some(st)) = (assignment, &st) {
                m.inputs.push(path_str(p));
                let (spec, asg) = read_json::<AssignmentFile>(p)?.assignment()?;
                o.check("assignment", &verify_embedding(&sg, &st.quotient, &spec, &asg).violations)?;
            }
            if let Some(p) = layout {
                m.inputs.push(path_str(p));
                let (order, qa) = read_json::<QueueLayout>(p)?.split()?;
                o.check("layout", &validate_queue_layout(&sg, &order, &qa).violations)?;
                o.put("queue_count", &qa.queue_count)?;
            }
            if let Some(p) = sequence {
                m.inputs.push(path_str(p));
                let seq: ContractionSequence = read_json(p)?;
                let audit = audit_sequence(&sg, &seq)?;
                o.put("width", &audit.width)?;
                o.check("sequence", &audit.violations)?;
            }
        }
        Command::Decompose { instance, out, format, max_n } => {
            m.command = "decompose".into();
            m.inputs.push(path_str(instance));
            m.flags.insert("max_n".into(), max_n.to_string());
            let g = read_instance(instance)?;
            (m.h, m.n) = (Some(g.h), Some(g.n()));
            let (top, dc) = decompose_checked(&g, *max_n)?;
            o.put("report", &dc)?;
            o.check("decomposition", &dc.violations)?;
            let text = match format {
                Format::Json => to_json(&DecompositionFile::from_top(g.h, &top))?,
                Format::Dot => plane_graph_dot("quotient", &top.quotient.h),
            };
            if let Some(p) = out {
                o.write(p, &text)?;
            }
        }
        Command::Product { instance, mode, decomposition, out } => {
            m.command = "product".into();
            m.inputs.push(path_str(instance));
            m.flags.insert("mode".into(), format!("{mode:?}").to_lowercase());
            let g = read_instance(instance)?;
            (m.h, m.n) = (Some(g.h), Some(g.n()));
            let st = load_structure(&g, decomposition, &mut o, m)?;
            let (spec, asg, pc) = product_checked(&g, &st, (*mode).into())?;
            o.put("report", &pc)?;
            o.check("product", &pc.violations)?;
            if let Some(p) = out {
                o.write(p, &to_json(&AssignmentFile::new(spec, &asg))?)?;
            }
        }
        Command::Queues { instance, mode, decomposition, assignment, out, max_n } => {
            m.command = "queues".into();
            m.inputs.push(path_str(instance));
            m.flags.insert("mode".into(), format!("{mode:?}").to_lowercase());
            m.flags.insert("max_n".into(), max_n.to_string());
            let g = read_instance(instance)?;
            (m.h, m.n) = (Some(g.h), Some(g.n()));
            let st = load_structure(&g, decomposition, &mut o, m)?;
            let (spec, asg) = match assignment {
                Some(p) => {
                    m.inputs.push(path_str(p));
                    let (spec, asg) = read_json::<AssignmentFile>(p)?.assignment()?;
                    o.check("assignment", &verify_embedding(&simplify(&g), &st.quotient, &spec, &asg).violations)?;
                    (spec, asg)
                }
                None => {
                    let (spec, asg, pc) = product_checked(&g, &st, (*mode).into())?;
                    o.check("product", &pc.violations)?;
                    (spec, asg)
                }
            };
            let (layout, qc) = queues_checked(&g, &st, &spec, &asg, *max_n)?;
            o.put("report", &qc)?;
            o.check("queues", &qc.violations)?;
            if let Some(p) = out {
                o.write(p, &to_json(&layout)?)?;
            }
        }
        Command::Twinwidth { instance, mode, out, audit, format } => {
            m.command = "twinwidth".into();
            m.inputs.push(path_str(instance));
            let g = read_instance(instance)?;
            (m.h, m.n) = (Some(g.h), Some(g.n()));
            let mode = match mode.unwrap_or(if g.h == 3 { TwMode::Planar } else { TwMode::Framed }) {
                TwMode::Planar => TwinMode::Planar,
                TwMode::Framed => TwinMode::Framed { h: g.h },
            };
            m.flags.insert("mode".into(), if mode == TwinMode::Planar { "planar" } else { "framed" }.into());
            let (seq, tc) = twinwidth_checked(&g, mode)?;
            o.put("width", &tc.width)?;
            o.put("bound", &tc.bound)?;
            o.put("planner", &tc.planner)?;
            o.put("steps", &seq.steps.len())?;
            o.check("twinwidth", &tc.violations)?;
            if let Some(p) = audit {
                o.write(p, &to_json(&tc.audit)?)?;
            }
            if let Some(p) = out {
                let text = match format {
                    Format::Json => to_json(&seq)?,
                    Format::Dot => {
                        let mut t = Trigraph::from_graph(&simplify(&g));
                        for s in seq.steps.iter().take_while(|s| s.stage != "finish") {
                            t.contract(s.x1, s.x2)?;
                        }
                        trigraph_dot("trigraph", &t)
                    }
                };
                o.write(p, &text)?;
            }
        }
        Command::Bounds { class, quantity } => {
            m.command = "bounds".into();
            m.flags.insert("class".into(), class.clone());
            m.flags.insert("quantity".into(), quantity.clone());
            let bv = bounds_table(ClassTag::parse(class)?, Quantity::parse(quantity)?)?;
            o.put("value", &bv.value)?;
            o.put("formula", &bv.formula)?;
            o.put("flags", &bv.flags)?;
            let mut text = match bv.value {
                Some(v) => format!("{v}\n"),
                None => format!("{}\n", bv.formula),
            };
            for f in &bv.flags {
                text.push_str(&format!("note: {f}\n"));
            }
            o.text = Some(text);
        }
        Command::Corpus { h, n, count, seed, chord_density, out, max_n, jobs } => {
            m.command = "corpus".into();
            (m.seed, m.h, m.n) = (Some(*seed), Some(*h), Some(*n));
            m.flags.insert("count".into(), count.to_string());
            m.flags.insert("chord_density".into(), chord_density.to_string());
            m.flags.insert("max_n".into(), max_n.to_string());
            if *h < 3 || *n < 4 {
                return Err(Error::Precondition("corpus needs h >= 3 and n >= 4".into()));
            }
            let rows = corpus_rows(*h, *n, *count, *seed, *chord_density, *max_n, (*jobs).max(1))?;
            let failed = rows.iter().filter(|r| !r.violations.is_empty()).count();
            o.passed = failed == 0;
            o.put("instances", &rows.len())?;
            o.put("failed", &failed)?;
            let mut table = String::from("   n       seed  parts  lw_W  lw_L  q_t3  q_t4  width  bound  status\n");
            for r in &rows {
                table.push_str(&format!(
                    "{:>4} {:>10} {:>6} {:>5} {:>5} {:>5} {:>5} {:>6} {:>6}  {}\n",
                    r.n,
                    r.seed,
                    r.parts,
                    r.layered_width_w,
                    r.layered_width_l,
                    r.queues_t3,
                    r.queues_t4,
                    r.width,
                    r.width_bound,
                    if r.violations.is_empty() { "ok" } else { "FAIL" }
                ));
            }
            table.push_str(&format!("{} instances, {failed} failed\n", rows.len()));
            if let Some(dir) = out {
                std::fs::create_dir_all(dir)?;
                o.write(&dir.join("summary.json"), &to_json(&rows)?)?;
            }
            o.text = Some(table);
        }
    }
    Ok(o)
}

/// One corpus instance.
#[derive(Clone, Debug, Serialize)]
struct CorpusRow {
    n: usize,
    seed: u64,
    parts: usize,
    layered_width_w: usize,
    layered_width_l: usize,
    queues_t3: usize,
    queues_t4: usize,
    width: usize,
    width_bound: usize,
    violations: Vec<String>,
}

fn corpus_row(h: usize, n: usize, seed: u64, density: f64, max_n: usize) -> Result<CorpusRow> {
    let g = if h == 3 {
        generate_triangulation(&GeneratorConfig::new(n, 3, 0.0, seed))
    } else {
        generate_framed(&GeneratorConfig::new(n, h, density, seed))
    };
    let (top, dc) = decompose_checked(&g, TREEWIDTH_CAP)?;
    let st = Structure::from_top(&top);
    let mut violations = dc.violations.clone();
    let mut queues = [0; 2];
    for (i, mode) in [ProductMode::T3, ProductMode::T4].into_iter().enumerate() {
        let (spec, asg, pc) = product_checked(&g, &st, mode)?;
        violations.extend(pc.violations);
        let (_, qc) = queues_checked(&g, &st, &spec, &asg, max_n)?;
        violations.extend(qc.violations);
        queues[i] = qc.queue_count;
    }
    let mode = if h == 3 { TwinMode::Planar } else { TwinMode::Framed { h } };
    let (_, tc) = twinwidth_checked(&g, mode)?;
    violations.extend(tc.violations);
    Ok(CorpusRow {
        n: g.n(),
        seed,
        parts: dc.parts,
        layered_width_w: dc.layered_width_w,
        layered_width_l: dc.layered_width_l,
        queues_t3: queues[0],
        queues_t4: queues[1],
        width: tc.width,
        width_bound: tc.bound,
        violations,
    })
}

fn corpus_rows(h: usize, n_max: usize, count: usize, seed: u64, density: f64, max_n: usize, jobs: usize) -> Result<Vec<CorpusRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plan: Vec<(usize, u64)> = (0..count).map(|_| (rng.gen_range(4..=n_max), rng.gen::<u32>() as u64)).collect();
    let mut rows: Vec<Option<Result<CorpusRow>>> = (0..count).map(|_| None).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let plan = &plan;
                s.spawn(move || {
                    (j..plan.len())
                        .step_by(jobs)
                        .map(|i| (i, corpus_row(h, plan[i].0, plan[i].1, density, max_n)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for hnd in handles {
            for (i, r) in hnd.join().expect("corpus worker panicked") {
                rows[i] = Some(r);
            }
        }
    });
    rows.into_iter().map(|r| r.expect("every instance is run")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with_output(std::iter::once("framed").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn bounds_lookup() {
        let (code, out, _) = run_capture(&["bounds", "--class", "1-planar", "--quantity", "twinwidth"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next(), Some("80"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_capture(&["bounds", "--class", "nonsense", "--quantity", "queue"]).0, 2);
        assert_eq!(run_capture(&["no-such-command"]).0, 2);
        let (code, _, err) = run_capture(&["decompose", "/nonexistent/file.json"]);
        assert_eq!(code, 2);
        assert!(err.contains("\"error\":\"io\""));
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run_capture(&["--help"]).0, 0);
    }
}
