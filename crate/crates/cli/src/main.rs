//! coclass-forge: consistency checking, automorphism orders, and coclass
//! graph exploration for finite 2-groups given by power-commutator
//! presentations.
//!
//! Exit codes: 0 success / affirmative, 1 negative result, 2 usage or parse
//! error, 3 budget exceeded.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use coclass_core::families::{k_group, parse_family_spec, KFamilyId};
use coclass_core::graph::{build_graph, BuildConfig, CoclassGraph};
use coclass_core::morphisms::{automorphism_order, isomorphism, AutReport, SearchBudget};
use coclass_core::pcp::{parse_pcp, PcPresentation};
use coclass_core::structure::{class_and_coclass, group_order, lower_central_series, quotient};
use coclass_core::Error as CoreError;

const EXIT_OK: i32 = 0;
const EXIT_NEGATIVE: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_BUDGET: i32 = 3;

#[derive(Parser)]
#[command(
    name = "coclass-forge",
    version,
    about = "Explore finite 2-groups of coclass at most 3",
    after_help = "The COCLASS_FORGE_SEED environment variable is reserved; every computation is deterministic."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Search-node budget for automorphism/isomorphism backtracking.
    #[arg(long, default_value_t = 1_000_000_000)]
    budget_nodes: u64,
    /// Wall-clock budget in seconds for one search.
    #[arg(long)]
    budget_seconds: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonOpts {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_nodes: self.budget_nodes,
            max_wall: self.budget_seconds.map(Duration::from_secs),
        }
    }

    fn init_pool(&self) -> anyhow::Result<()> {
        if self.jobs > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(self.jobs)
                .build_global()
                .context("thread pool")?;
        }
        Ok(())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the consistency of a presentation file.
    Consistency { path: PathBuf },
    /// Automorphism group order of a presentation file or family spec.
    Aut {
        /// Family spec (e.g. dihedral:8, K1:2, prod(quaternion:8,cyclic:2))
        /// or a path to a PCP file.
        target: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Build G(2,r) up to an order bound, annotate automorphism orders, and
    /// report exceptions plus the edge-propagation check.
    Explore {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
        coclass: u32,
        #[arg(long)]
        max_order: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Print the canonical presentation of a family spec.
    Family { spec: String },
    /// Test two presentations (files or family specs) for isomorphism.
    Iso {
        a: String,
        b: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Verify the exceptional coclass-3 sequences over index and level
    /// ranges, one table row per member.
    Kverify {
        /// Sequence indices, e.g. 1..6 or a single value.
        #[arg(long, default_value = "1..6")]
        i: String,
        /// Levels, e.g. 2..3.
        #[arg(long, default_value = "2..3")]
        n: String,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code_for(&e)
        }
    };
    std::process::exit(code);
}

fn exit_code_for(e: &anyhow::Error) -> i32 {
    if let Some(core) = e.downcast_ref::<CoreError>() {
        return match core {
            CoreError::SearchBudget { .. } | CoreError::CollectBudget(_) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
    }
    EXIT_USAGE
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Consistency { path } => cmd_consistency(&path),
        Command::Aut { target, common } => cmd_aut(&target, &common),
        Command::Explore {
            coclass,
            max_order,
            common,
        } => cmd_explore(coclass, max_order, &common),
        Command::Family { spec } => cmd_family(&spec),
        Command::Iso { a, b, common } => cmd_iso(&a, &b, &common),
        Command::Kverify { i, n, common } => cmd_kverify(&i, &n, &common),
    }
}

/// Atomic write: temp file in the target directory, then rename.
fn emit(out: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        None => {
            print!("{content}");
            std::io::stdout().flush()?;
        }
        Some(path) => {
            let dir = path.parent().unwrap_or_else(|| Path::new("."));
            let tmp = dir.join(format!(
                ".{}.tmp",
                path.file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "report".into())
            ));
            std::fs::write(&tmp, content).with_context(|| format!("writing {}", tmp.display()))?;
            std::fs::rename(&tmp, path)
                .with_context(|| format!("renaming to {}", path.display()))?;
        }
    }
    Ok(())
}

fn load_target(target: &str) -> anyhow::Result<PcPresentation> {
    match parse_family_spec(target) {
        Ok(p) => Ok(p),
        Err(spec_err) => {
            if Path::new(target).exists() {
                let text = std::fs::read_to_string(target)
                    .with_context(|| format!("reading {target}"))?;
                Ok(parse_pcp(&text)?)
            } else {
                Err(anyhow!(
                    "`{target}` is neither a family spec ({spec_err}) nor an existing file"
                ))
            }
        }
    }
}

fn cmd_consistency(path: &Path) -> anyhow::Result<i32> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let p = parse_pcp(&text)?;
    let report = p.check_consistency()?;
    if report.consistent {
        println!(
            "consistent: {} generators, order {}",
            p.num_generators(),
            p.order_product()
        );
        Ok(EXIT_OK)
    } else {
        println!(
            "inconsistent: {} violated overlap(s)",
            report.violations.len()
        );
        for v in &report.violations {
            println!(
                "  {}: {} != {}",
                v.overlap,
                p.word_of(&v.lhs),
                p.word_of(&v.rhs)
            );
        }
        Ok(EXIT_NEGATIVE)
    }
}

fn cmd_aut(target: &str, common: &CommonOpts) -> anyhow::Result<i32> {
    common.init_pool()?;
    let p = Arc::new(load_target(target)?);
    let started = Instant::now();
    let report = automorphism_order(&p, &common.budget())?;
    eprintln!("# aut computed in {:?}", started.elapsed());
    let content = format_aut(target, &report, common.format)?;
    emit(&common.out, &content)?;
    Ok(if report.is_2_group() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

fn format_aut(target: &str, report: &AutReport, format: Format) -> anyhow::Result<String> {
    Ok(match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({
                "version": env!("CARGO_PKG_VERSION"),
                "target": target,
                "aut": report.to_json(),
            }))?
        ),
        Format::Csv => format!(
            "target,order_two_exponent,odd_part,is_2_group\n{target},{},{},{}\n",
            report.two_part_exponent,
            report.odd_part,
            report.is_2_group()
        ),
        Format::Text => {
            let mut s = format!(
                "|Aut| = 2^{} * {} = {}\n",
                report.two_part_exponent,
                report.odd_part,
                report.aut_order()
            );
            if let Some(w) = &report.odd_witness {
                s.push_str("odd-order witness images:\n");
                for (k, img) in w.images().iter().enumerate() {
                    s.push_str(&format!("  g{} -> {}\n", k + 1, w.target().word_of(img)));
                }
            }
            s
        }
    })
}

fn graph_report(g: &CoclassGraph, format: Format) -> anyhow::Result<String> {
    let exceptions = g.exceptions_report();
    let lemma = g.lemma_check();
    Ok(match format {
        Format::Json => {
            let exc: Vec<serde_json::Value> = exceptions
                .iter()
                .map(|(order, e)| {
                    json!({
                        "order": order,
                        "vertices": e.vertex_count,
                        "exceptional": e.exceptional,
                        "unchecked": e.unchecked,
                    })
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({
                    "version": env!("CARGO_PKG_VERSION"),
                    "graph": g.to_json(),
                    "exceptions": exc,
                    "lemma_check": {
                        "violations": lemma.violations,
                        "unchecked_edges": lemma.unchecked,
                    },
                }))?
            )
        }
        Format::Csv => {
            let mut s = String::from("order,vertices,exceptional,unchecked\n");
            for (order, e) in &exceptions {
                s.push_str(&format!(
                    "{order},{},{},{}\n",
                    e.vertex_count,
                    e.exceptional.len(),
                    e.unchecked.len()
                ));
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "G(2,{}) up to order {}: {} kept nodes, {} vertices, {} edges\n",
                g.r,
                g.max_order,
                g.nodes.len(),
                g.vertices().count(),
                g.edges.len()
            );
            for (order, e) in &exceptions {
                s.push_str(&format!(
                    "order {order}: {} vertices, {} exceptional",
                    e.vertex_count,
                    e.exceptional.len()
                ));
                if !e.exceptional.is_empty() {
                    s.push_str(&format!(" (nodes {:?})", e.exceptional));
                }
                if !e.unchecked.is_empty() {
                    s.push_str(&format!(", {} unchecked", e.unchecked.len()));
                }
                s.push('\n');
            }
            s.push_str(&format!(
                "edge propagation check: {} violations, {} unchecked edges\n",
                lemma.violations.len(),
                lemma.unchecked.len()
            ));
            s
        }
    })
}

fn cmd_explore(r: u32, max_order: u64, common: &CommonOpts) -> anyhow::Result<i32> {
    common.init_pool()?;
    let cfg = BuildConfig {
        search_budget: common.budget(),
        ..BuildConfig::default()
    };
    let started = Instant::now();
    let mut g = build_graph(r, max_order, &cfg)?;
    eprintln!("# graph built in {:?}", started.elapsed());
    let t_aut = Instant::now();
    g.annotate_auts(&common.budget(), true)?;
    eprintln!("# automorphism annotation in {:?}", t_aut.elapsed());
    let content = graph_report(&g, common.format)?;
    emit(&common.out, &content)?;
    let lemma = g.lemma_check();
    let unchecked: usize = g
        .exceptions_report()
        .values()
        .map(|e| e.unchecked.len())
        .sum();
    if !lemma.violations.is_empty() {
        return Ok(EXIT_NEGATIVE);
    }
    if unchecked > 0 || !lemma.unchecked.is_empty() {
        return Ok(EXIT_BUDGET);
    }
    Ok(EXIT_OK)
}

fn cmd_family(spec: &str) -> anyhow::Result<i32> {
    let p = parse_family_spec(spec)?;
    print!("{}", p.to_text());
    Ok(EXIT_OK)
}

fn cmd_iso(a: &str, b: &str, common: &CommonOpts) -> anyhow::Result<i32> {
    common.init_pool()?;
    let pa = Arc::new(load_target(a)?);
    let pb = Arc::new(load_target(b)?);
    match isomorphism(&pa, &pb, &common.budget())? {
        Some(hom) => {
            println!("isomorphic");
            for (k, img) in hom.images().iter().enumerate() {
                println!("  g{} -> {}", k + 1, hom.target().word_of(img));
            }
            Ok(EXIT_OK)
        }
        None => {
            println!("not isomorphic");
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn parse_range(s: &str, what: &str) -> anyhow::Result<(u32, u32)> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u32 = lo
            .parse()
            .with_context(|| format!("bad {what} range `{s}`"))?;
        let hi: u32 = hi
            .parse()
            .with_context(|| format!("bad {what} range `{s}`"))?;
        if lo > hi {
            return Err(anyhow!("empty {what} range `{s}`"));
        }
        Ok((lo, hi))
    } else {
        let v: u32 = s.parse().with_context(|| format!("bad {what} value `{s}`"))?;
        Ok((v, v))
    }
}

struct KRow {
    i: u8,
    n: u32,
    consistent: bool,
    order: u64,
    class: u32,
    coclass: u32,
    aut_two: u32,
    aut_odd: u64,
    iso_to_previous_quotient: Option<bool>,
    aut_ratio_to_previous: Option<u64>,
}

fn cmd_kverify(i_range: &str, n_range: &str, common: &CommonOpts) -> anyhow::Result<i32> {
    common.init_pool()?;
    let (i_lo, i_hi) = parse_range(i_range, "sequence index")?;
    let (n_lo, n_hi) = parse_range(n_range, "level")?;
    let budget = common.budget();
    let mut rows: Vec<KRow> = Vec::new();
    let mut all_good = true;
    for i in i_lo..=i_hi {
        let mut previous: Option<(Arc<PcPresentation>, u64)> = None;
        for n in n_lo..=n_hi {
            let id = KFamilyId::new(i as u8, n).map_err(|e| anyhow!("{e}"))?;
            let p = Arc::new(k_group(id)?);
            let consistent = p.check_consistency()?.consistent;
            if !consistent {
                rows.push(KRow {
                    i: i as u8,
                    n,
                    consistent,
                    order: p.order_product(),
                    class: 0,
                    coclass: 0,
                    aut_two: 0,
                    aut_odd: 0,
                    iso_to_previous_quotient: None,
                    aut_ratio_to_previous: None,
                });
                all_good = false;
                previous = None;
                continue;
            }
            let order = group_order(&p)?;
            let (class, coclass) = class_and_coclass(&p)?;
            let report = automorphism_order(&p, &budget)?;
            let iso_to_previous_quotient = match &previous {
                Some((prev, _)) => {
                    let series = lower_central_series(&p)?;
                    let last = &series.terms[series.terms.len() - 2];
                    let q = Arc::new(quotient(&p, last)?);
                    Some(isomorphism(&q, prev, &budget)?.is_some())
                }
                None => None,
            };
            let aut_ratio_to_previous = previous
                .as_ref()
                .map(|(_, prev_aut)| report.aut_order() / (*prev_aut).max(1));
            if coclass != 3 || report.is_2_group() {
                all_good = false;
            }
            rows.push(KRow {
                i: i as u8,
                n,
                consistent,
                order,
                class,
                coclass,
                aut_two: report.two_part_exponent,
                aut_odd: report.odd_part,
                iso_to_previous_quotient,
                aut_ratio_to_previous,
            });
            previous = Some((p, report.aut_order()));
        }
    }

    let content = match common.format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "i": r.i,
                        "n": r.n,
                        "consistent": r.consistent,
                        "order": r.order,
                        "class": r.class,
                        "coclass": r.coclass,
                        "aut": {"order_two_exponent": r.aut_two, "odd_part": r.aut_odd},
                        "iso_to_previous_n_quotient": r.iso_to_previous_quotient,
                        "aut_ratio_to_previous": r.aut_ratio_to_previous,
                    })
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({
                    "version": env!("CARGO_PKG_VERSION"),
                    "rows": rows,
                }))?
            )
        }
        Format::Csv => {
            let mut s = String::from(
                "i,n,consistent,order,class,coclass,aut_two_exponent,aut_odd_part,iso_to_previous_n_quotient,aut_ratio_to_previous\n",
            );
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    r.i,
                    r.n,
                    r.consistent,
                    r.order,
                    r.class,
                    r.coclass,
                    r.aut_two,
                    r.aut_odd,
                    r.iso_to_previous_quotient
                        .map(|b| b.to_string())
                        .unwrap_or_default(),
                    r.aut_ratio_to_previous
                        .map(|v| v.to_string())
                        .unwrap_or_default(),
                ));
            }
            s
        }
        Format::Text => {
            let mut s = String::from(
                "  i  n  consistent  order  class  coclass  |Aut|       quotient=prev  ratio\n",
            );
            for r in &rows {
                s.push_str(&format!(
                    "  {}  {}  {:<10}  2^{:<3}  {:<5}  {:<7}  2^{}*{:<5}  {:<13}  {}\n",
                    r.i,
                    r.n,
                    r.consistent,
                    r.order.trailing_zeros(),
                    r.class,
                    r.coclass,
                    r.aut_two,
                    r.aut_odd,
                    r.iso_to_previous_quotient
                        .map(|b| b.to_string())
                        .unwrap_or_else(|| "-".into()),
                    r.aut_ratio_to_previous
                        .map(|v| v.to_string())
                        .unwrap_or_else(|| "-".into()),
                ));
            }
            s
        }
    };
    emit(&common.out, &content)?;
    Ok(if all_good { EXIT_OK } else { EXIT_NEGATIVE })
}
