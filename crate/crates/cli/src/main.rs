use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use maxcr_core::io::{load_graph, read_json, write_json, write_text, CandidateList, MissedPairFile};
use maxcr_core::maximizer::{maximize_crossings, MaximizeBudget};
use maxcr_core::pipeline::{self, check_certificate, proof_log, run_theorem, TheoremConfig};
use maxcr_core::realize::{
    attach_coordinates, decide_exact, prove_unrealizable_relaxed, render_svg, verify_drawing, Budget,
    CombinatorialDrawing, EliminationPolicy, ExactVerdict, RelaxedVerdict, SubgraphCatalog,
};
use maxcr_core::search::{
    compute_maxcr_exact, eliminate_all, enumerate_candidates, CandidateQuery, Constraint, EnumerationMode,
};
use maxcr_core::subgraph::{count_named, sub_thrackle_number};
use maxcr_core::{find_subgraphs, thrackle_number, FilterSuite, PairIndex, Prescription};
use serde::Serialize;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "maxcr", version, about = "Maximum crossing numbers of small graphs")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file, or output directory for prove-theorem.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Node budget per search.
    #[arg(long, global = true)]
    budget_nodes: Option<u64>,
    /// Wall-clock budget per search, in seconds.
    #[arg(long, global = true)]
    budget_seconds: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Thrackle and sub-thrackle numbers.
    Thrackle {
        /// Designator such as `c3xc3`, `cycle:5`, `c3xc3-v0`, or an edge-list file.
        #[arg(long)]
        graph: String,
    },
    /// Copies of a pattern graph.
    Subgraphs {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        pattern: String,
    },
    /// Missed-pair sets of size k passing a filter suite.
    Enumerate {
        #[arg(long, required_unless_present = "config")]
        graph: Option<String>,
        #[arg(long, required_unless_present = "config")]
        k: Option<usize>,
        /// `full`, `props`, `none`, or a list such as `1,2,coverage`.
        #[arg(long, default_value = "full")]
        suite: String,
        /// Require some bowtie to hold at least this many missed pairs.
        #[arg(long)]
        bowtie_min: Option<usize>,
        /// Plain k-subset scan instead of pool allocation.
        #[arg(long)]
        brute_force: bool,
        /// A JSON query, used instead of the flags above.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Decide whether a missed-pair set can be drawn.
    Decide {
        /// JSON missed-pair file.
        #[arg(long)]
        missed: PathBuf,
        /// Also run the relaxed prover.
        #[arg(long)]
        relaxed: bool,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Find an undrawable subgraph for every candidate in a list.
    Eliminate {
        /// JSON candidate list, as written by `enumerate`.
        #[arg(long)]
        candidates: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_edges: usize,
    },
    /// Maximum crossing number by exhaustive decision.
    MaxcrExact {
        #[arg(long)]
        graph: String,
        /// Levels to profile below the maximum.
        #[arg(long, default_value_t = 0)]
        extra_levels: usize,
    },
    /// Drawing with many crossings by edge insertion.
    Maximize {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 400)]
        stall: usize,
        #[arg(long)]
        target: Option<usize>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run the full argument and write the certificate.
    ProveTheorem {
        /// JSON run configuration.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Check a drawing file.
    VerifyDrawing {
        #[arg(long)]
        graph: Option<String>,
        #[arg(long)]
        drawing: PathBuf,
    },
    /// Re-check a certificate without searching.
    CheckCertificate {
        #[arg(long)]
        certificate: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

impl Cli {
    fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(n) = self.budget_nodes {
            b.max_nodes = n;
        }
        if let Some(s) = self.budget_seconds {
            b.max_seconds = s;
        }
        b
    }

    /// Write to `--out` if given, otherwise print.
    fn emit<T: Serialize>(&self, value: &T) -> Result<()> {
        match &self.out {
            Some(path) => {
                write_json(path, value)?;
                eprintln!("wrote {}", path.display());
            }
            None => print(&format!("{}\n", serde_json::to_string_pretty(value)?)),
        }
        Ok(())
    }
}

/// Print to stdout, ignoring a closed pipe.
fn print(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn write_svg(path: &Path, d: &CombinatorialDrawing) -> Result<()> {
    write_text(path, &render_svg(d)?)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Thrackle { graph } => {
            let g = load_graph(graph)?;
            cli.emit(&json!({
                "graph": g.name(),
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "thrackle_number": thrackle_number(&g),
                "c4_copies": count_named(&g, "cycle", &[4]),
                "k4_copies": count_named(&g, "complete", &[4]),
                "sub_thrackle_number": sub_thrackle_number(&g),
            }))?;
        }
        Command::Subgraphs { graph, pattern } => {
            let g = load_graph(graph)?;
            let p = load_graph(pattern)?;
            let copies = find_subgraphs(&g, &p);
            cli.emit(&json!({
                "graph": g.name(),
                "pattern": p.name(),
                "count": copies.len(),
                "copies": copies,
            }))?;
        }
        Command::Enumerate {
            graph,
            k,
            suite,
            bowtie_min,
            brute_force,
            config,
        } => {
            let mut q = match config {
                Some(path) => CandidateQuery::from_json(&maxcr_core::io::read_text(path)?)?,
                None => {
                    let g = load_graph(graph.as_deref().unwrap())?;
                    let suite: FilterSuite = suite.parse()?;
                    let mut q = CandidateQuery::new(g, k.unwrap(), suite);
                    if let Some(min) = bowtie_min {
                        q = q.with_constraint(Constraint::BowtieAtLeast { min: *min });
                    }
                    if *brute_force {
                        q = q.with_mode(EnumerationMode::BruteForce);
                    }
                    q
                }
            };
            if cli.budget_nodes.is_some() || cli.budget_seconds.is_some() {
                q.budget = cli.budget();
            }
            let r = enumerate_candidates(&q)?;
            let index = PairIndex::new(&q.host);
            eprintln!(
                "{} candidates, {} nodes, {} ms{}",
                r.candidates.len(),
                r.nodes,
                r.millis,
                if r.complete { "" } else { " (budget ran out)" }
            );
            cli.emit(&CandidateList {
                host: q.host.clone(),
                k: q.k,
                suite: q.suite.to_string(),
                complete: r.complete,
                count: r.candidates.len(),
                note: r.note.clone(),
                candidates: r.candidates.iter().map(|m| m.edge_pairs(&index)).collect(),
            })?;
        }
        Command::Decide { missed, relaxed, svg } => {
            let file: MissedPairFile = read_json(missed)?;
            let set = file.to_set()?;
            let p = Prescription::from_missed(&file.host, &PairIndex::new(&file.host), &set)?;
            let mut out = json!({ "graph": file.host.name(), "crossings": p.total_crossings() });
            if *relaxed {
                let (v, stats) = prove_unrealizable_relaxed(&p, cli.budget())?;
                let verdict = match v {
                    RelaxedVerdict::Unrealizable => "unrealizable",
                    RelaxedVerdict::Undecided(_) => "undecided",
                    RelaxedVerdict::BudgetExhausted => "budget_exhausted",
                };
                out["relaxed"] = json!({ "verdict": verdict, "stats": stats });
            }
            let (v, stats) = decide_exact(&p, cli.budget());
            out["stats"] = json!(stats);
            match v {
                ExactVerdict::Realizable(d) => {
                    let mut d = *d;
                    attach_coordinates(&mut d)?;
                    if let Some(path) = svg {
                        write_svg(path, &d)?;
                    }
                    out["verdict"] = json!("realizable");
                    out["drawing"] = json!(d);
                }
                ExactVerdict::Unrealizable => out["verdict"] = json!("unrealizable"),
                ExactVerdict::BudgetExhausted => out["verdict"] = json!("budget_exhausted"),
            }
            eprintln!("{}", out["verdict"]);
            cli.emit(&out)?;
        }
        Command::Eliminate { candidates, max_edges } => {
            let list: CandidateList = read_json(candidates)?;
            let sets = list.sets()?;
            let catalog = SubgraphCatalog::standard(&list.host, *max_edges);
            let mut policy = EliminationPolicy::default();
            if cli.budget_nodes.is_some() || cli.budget_seconds.is_some() {
                policy.exact_escalated = cli.budget();
            }
            let report = eliminate_all(&list.host, &sets, &catalog, &policy);
            eprintln!(
                "{} of {} eliminated, {} survivors",
                report.eliminated,
                report.candidates,
                report.survivors.len()
            );
            cli.emit(&report)?;
            return Ok(report.all_eliminated);
        }
        Command::MaxcrExact { graph, extra_levels } => {
            let g = load_graph(graph)?;
            let mut r = compute_maxcr_exact(&g, cli.budget(), *extra_levels);
            if let Some(w) = r.witness.as_mut() {
                attach_coordinates(w)?;
            }
            match r.maxcr {
                Some(c) => eprintln!("maxcr({}) = {c}", g.name()),
                None => eprintln!("maxcr({}) undecided within budget", g.name()),
            }
            cli.emit(&r)?;
        }
        Command::Maximize {
            graph,
            restarts,
            stall,
            target,
            svg,
        } => {
            let g = load_graph(graph)?;
            let mut budget = MaximizeBudget {
                restarts: *restarts,
                stall_limit: *stall,
                target: *target,
                ..MaximizeBudget::default()
            };
            if let Some(s) = cli.budget_seconds {
                budget.max_seconds = s;
            }
            let r = maximize_crossings(&g, &budget, cli.seed);
            let report = verify_drawing(&r.drawing, &g)?;
            eprintln!("{}: {} crossings (verified {})", g.name(), r.crossings, report.count);
            if let Some(path) = svg {
                write_svg(path, &r.drawing)?;
            }
            cli.emit(&r.drawing)?;
        }
        Command::ProveTheorem { config } => {
            let mut cfg: TheoremConfig = match config {
                Some(path) => read_json(path)?,
                None => TheoremConfig::default(),
            };
            cfg.seed = cli.seed;
            if cli.budget_nodes.is_some() || cli.budget_seconds.is_some() {
                cfg.decision_budget = cli.budget();
            }
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("certificate"));
            std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            let run = run_theorem(&cfg)?;
            let c = &run.certificate;
            pipeline::emit_certificate(c, &dir.join("certificate.json"))?;
            let log = proof_log(c);
            write_text(&dir.join("proof.txt"), &log)?;
            for (name, report) in &run.reports {
                write_json(&dir.join(format!("{name}-report.json")), report)?;
            }
            for w in &c.witnesses {
                write_json(&dir.join(format!("{}.json", w.name)), &w.drawing)?;
                pipeline::emit_svg(&w.drawing, &dir.join(format!("{}.svg", w.name)))?;
            }
            print(&log);
            eprintln!("wrote {}", dir.display());
            return Ok(c.conclusion.is_some());
        }
        Command::VerifyDrawing { graph, drawing } => {
            let d: CombinatorialDrawing = read_json(drawing)?;
            let host = match graph {
                Some(designator) => load_graph(designator)?,
                None => d.graph.clone(),
            };
            match pipeline::check_witness(&d, &host) {
                Ok(count) => {
                    cli.emit(&json!({ "valid": true, "crossings": count, "pairs": d.crossing_pairs() }))?;
                }
                Err(e) => {
                    cli.emit(&json!({ "valid": false, "error": e.to_string() }))?;
                    return Ok(false);
                }
            }
        }
        Command::CheckCertificate { certificate } => {
            let c = pipeline::load_certificate(certificate)?;
            let report = check_certificate(&c);
            for check in report.checks.iter().filter(|c| !c.ok) {
                eprintln!("FAILED {}: {}", check.name, check.detail);
            }
            if report.ok {
                eprintln!(
                    "{} checks passed: {}",
                    report.checks.len(),
                    c.conclusion.as_ref().map_or("no conclusion", |c| c.statement.as_str())
                );
            }
            cli.emit(&report)?;
            if !report.ok {
                bail!("certificate check failed");
            }
        }
    }
    Ok(true)
}
