use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use cactus_gcc::batch::{run_batch, BatchConfig};
use cactus_gcc::cactus::{cactus_oracle, generate_cactus, recognize_cactus, tree_cover_bounds, tree_cover_oracle};
use cactus_gcc::cert::{gcc_check, verify_representation, CertifyOptions};
use cactus_gcc::format::{parse_graph, to_json, write_edge_list};
use cactus_gcc::ordering::{find_construction_ordering, validate_cdelta_graph, validate_ordering};
use cactus_gcc::ortho::{build_representation, representation_from_json, DimPolicy, RepresentationJson, MAX_DIM};
use cactus_gcc::{Error, Graph};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

const EXIT_CERTIFIED: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_NOT_CERTIFIED: u8 = 2;
const EXIT_NOT_CACTUS: u8 = 3;

#[derive(Parser)]
#[command(name = "cactus-gcc", version, about = "Certify msr(G) + msr(complement G) <= |G| + 2 for cactus graphs")]
struct Cli {
    /// More log output on stderr (repeat for debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Input {
    /// Edge list or JSON graph file, `-` for stdin.
    input: PathBuf,
}

#[derive(clap::Args)]
struct Output {
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct Build {
    /// `auto` (3, 4 or 5 by cycle count) or a fixed dimension.
    #[arg(long, default_value = "auto", value_parser = parse_dim)]
    dim: DimPolicy,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    EdgeList,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a graph as tree, unicyclic or multicyclic cactus.
    Recognize {
        #[command(flatten)]
        input: Input,
        /// Cross-check with exhaustive searches (small graphs only).
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Construction ordering of a cactus.
    Order {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Orthogonal representation of the complement.
    BuildRep {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        build: Build,
        #[command(flatten)]
        output: Output,
    },
    /// Check a representation file against the complement of a graph.
    Verify {
        #[command(flatten)]
        input: Input,
        /// Representation JSON as written by `build-rep`.
        #[arg(long)]
        rep: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Build, verify and assemble a full report.
    Certify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        build: Build,
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Random cactus with a given number of cycles.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        cycles: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "edge-list")]
        format: GraphFormat,
        #[command(flatten)]
        output: Output,
    },
    /// Generate and certify many cacti.
    Batch {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        min_n: usize,
        #[arg(long, default_value_t = 40)]
        max_n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "auto", value_parser = parse_dim)]
        dim: DimPolicy,
        #[arg(long)]
        oracle: bool,
        /// Add wall-clock percentiles to the summary (makes it run dependent).
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        output: Output,
    },
}

fn parse_dim(s: &str) -> Result<DimPolicy, String> {
    if s == "auto" {
        return Ok(DimPolicy::Auto);
    }
    match s.parse::<usize>() {
        Ok(d) if (1..=MAX_DIM).contains(&d) => Ok(DimPolicy::Fixed(d)),
        _ => Err(format!("expected `auto` or an integer in 1..={MAX_DIM}")),
    }
}

fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(parse_graph(&text)?)
}

fn emit(output: &Output, text: &str) -> anyhow::Result<()> {
    match &output.out {
        Some(p) => fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Recognize { input, oracle, output } => {
            let g = read_graph(&input.input)?;
            let profile = recognize_cactus(&g)?;
            let mut out = json!({ "n": g.n(), "edges": g.edge_count(), "profile": profile });
            if profile.is_cactus {
                out["tree_cover"] = json!(tree_cover_bounds(&profile)?);
            }
            if oracle {
                out["cactus_oracle"] = json!(cactus_oracle(&g)?);
                if profile.is_cactus {
                    out["tree_cover_oracle"] = json!(tree_cover_oracle(&g)?);
                }
            }
            emit(&output, &pretty(&out))?;
            if profile.is_cactus {
                eprintln!("cactus, {} cycles ({:?})", profile.cycle_count, profile.class);
                Ok(EXIT_CERTIFIED)
            } else {
                eprintln!("not a cactus");
                Ok(EXIT_NOT_CACTUS)
            }
        }
        Command::Order { input, output } => {
            let g = read_graph(&input.input)?;
            let profile = recognize_cactus(&g)?;
            let ord = find_construction_ordering(&g, &profile)?;
            let check = validate_ordering(&g, &ord)?;
            let cdelta = validate_cdelta_graph(&g, &ord.order).ok();
            let out = json!({ "ordering": ord, "valid": check.valid, "violations": check.violations, "cdelta_labeling": cdelta });
            emit(&output, &pretty(&out))?;
            eprintln!("ordering of {} vertices, valid: {}", ord.len(), check.valid);
            Ok(EXIT_CERTIFIED)
        }
        Command::BuildRep { input, build, output } => {
            let g = read_graph(&input.input)?;
            let rep = build_representation(&g, build.dim, build.seed)?;
            emit(&output, &pretty(&RepresentationJson::from(&rep)))?;
            eprintln!("representation in dimension {}", rep.dim);
            if let Some(d) = rep.fallback_from {
                eprintln!("note: dimension {d} failed, fell back to {}", rep.dim);
            }
            Ok(EXIT_CERTIFIED)
        }
        Command::Verify { input, rep, output } => {
            let g = read_graph(&input.input)?;
            let text = fs::read_to_string(&rep).with_context(|| format!("reading {}", rep.display()))?;
            let rep = representation_from_json(&g, &text)?;
            let cert = verify_representation(&rep, &g.complement())?;
            emit(&output, &pretty(&cert))?;
            eprintln!(
                "pattern {}, rank {} in dimension {}",
                if cert.pattern_ok { "ok" } else { "MISMATCH" },
                cert.rank,
                cert.dim
            );
            Ok(if cert.pattern_ok { EXIT_CERTIFIED } else { EXIT_NOT_CERTIFIED })
        }
        Command::Certify { input, build, oracle, output } => {
            let g = read_graph(&input.input)?;
            let report = gcc_check(&g, &CertifyOptions { dim: build.dim, seed: build.seed, oracle })?;
            emit(&output, &report.to_json_pretty())?;
            if let (Some(m), Some(c), Some(i)) = (&report.msr_g, report.msr_comp_bound, report.inequality) {
                eprintln!(
                    "msr(G) <= {} [{}], msr(complement) <= {}: {} <= {} {}",
                    m.value,
                    m.rule_chain.first().map(|r| r.to_string()).unwrap_or_default(),
                    c,
                    i.lhs,
                    i.rhs,
                    if i.holds { "holds" } else { "fails" }
                );
            }
            if let Some(reason) = &report.reason {
                eprintln!("not certified: {reason}");
                return Ok(EXIT_NOT_CERTIFIED);
            }
            eprintln!("certified");
            Ok(EXIT_CERTIFIED)
        }
        Command::Generate { n, cycles, seed, format, output } => {
            let g = generate_cactus(n, cycles, seed)?;
            let text = match format {
                GraphFormat::EdgeList => write_edge_list(&g).trim_end().to_string(),
                GraphFormat::Json => to_json(&g),
            };
            emit(&output, &text)?;
            Ok(EXIT_CERTIFIED)
        }
        Command::Batch { count, min_n, max_n, seed, dim, oracle, timing, output } => {
            let config = BatchConfig { count, min_n, max_n, seed, dim, oracle };
            let (summary, t) = run_batch(&config)?;
            let mut out = serde_json::to_value(&summary)?;
            if timing {
                out["timing"] = json!(t);
            }
            emit(&output, &pretty(&out))?;
            eprintln!(
                "{}/{} certified, {} fallbacks, {} oracle failures, {:.0} ms",
                summary.certified_count, summary.count, summary.fallback_count, summary.oracle_failures, t.total_ms
            );
            for f in &summary.failures {
                eprintln!("  instance {} (n = {}): {:?}", f.instance.id, f.instance.n, f.instance.error.as_ref().or(f.report.as_ref().and_then(|r| r.reason.as_ref())));
            }
            Ok(if summary.failures.is_empty() { EXIT_CERTIFIED } else { EXIT_NOT_CERTIFIED })
        }
    }
}

fn main() -> ExitCode {
    // usage errors are input errors; clap's own exit code 2 would read as "not certified"
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_CERTIFIED });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<Error>() {
                Some(Error::NotCactus) => EXIT_NOT_CACTUS,
                _ => EXIT_INPUT,
            };
            ExitCode::from(code)
        }
    }
}
