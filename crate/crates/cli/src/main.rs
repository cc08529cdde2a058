use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use itrans_core::bounds::{default_regular_h, verify_instance, HSpec, InstanceParams, Preset};
use itrans_core::constructions::{build_g1, build_g2_with, Construction, ConstructionError};
use itrans_core::critical::{criticalize, CriticalError};
use itrans_core::graph::MultipartiteGraph;
use itrans_core::imc::{
    attachment_sets, decompose_bipartite_union, extract_pit, find_imc_containing_edge, verify_imc, Imc, ImcError,
    PairsDocument,
};
use itrans_core::solver::{
    count_its_naive, count_its_parallel, find_blowup_it, find_it, find_krrs_from_its, find_kss, DEFAULT_IT_CAP,
};

/// Independent transversals in multipartite graphs.
///
/// Exit codes: 0 success, 1 claim fails, 2 usage or input error,
/// 3 infeasible construction.
#[derive(Parser)]
#[command(name = "itrans", version)]
struct Cli {
    /// Worker threads for IT counting.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    workers: u32,
    /// Seed for every random choice.
    #[arg(long, global = true, env = "TOOL_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one of the extremal constructions.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Count independent transversals exactly.
    Count {
        #[command(flatten)]
        input: Input,
        /// Use the odometer enumeration instead of the pruned search.
        #[arg(long)]
        naive: bool,
    },
    /// Search for a witness structure.
    Find {
        #[command(subcommand)]
        what: FindKind,
    },
    /// Induced matching configurations.
    Imc {
        #[command(subcommand)]
        op: ImcOp,
    },
    /// Delete edges until the graph is critical.
    Criticalize {
        #[command(flatten)]
        input: Input,
        /// Output graph (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the criticality report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Build an instance, run the exact solvers and compare with the closed forms.
    Verify {
        #[arg(long)]
        preset: PresetArg,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        r: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        s: u32,
        /// Override H: a graph file, cycle:N or regular:N,d,seed.
        #[arg(long)]
        h: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args)]
struct Input {
    /// Input graph (stdin if omitted).
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    /// Output graph (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write block sizes, predicted max degree and the pair system here.
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ConstructKind {
    /// The IT-free rn/(2r-2)-regular graph.
    G1 {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        r: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[command(flatten)]
        output: Output,
    },
    /// The construction of max degree ceil(rn/(2r-2)) - t built from H.
    G2 {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        r: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, default_value_t = 1)]
        t: u32,
        /// Graph file, cycle:N or regular:N,d,seed. Defaults to a seeded rt/2-regular graph.
        #[arg(long)]
        h: Option<String>,
        /// Separate H for the last block pair (defaults to --h).
        #[arg(long)]
        h2: Option<String>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum FindKind {
    /// An independent transversal.
    It {
        #[command(flatten)]
        input: Input,
    },
    /// An s-blowup of an independent transversal.
    Blowup {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        s: u32,
    },
    /// A K_{s,s} in a bipartite graph.
    Kss {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        s: u32,
    },
    /// A part-respecting K_r^r(s) among the collected transversals.
    Krrs {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        s: u32,
        /// Stop collecting after this many transversals.
        #[arg(long, default_value_t = DEFAULT_IT_CAP)]
        cap: usize,
    },
}

#[derive(Args)]
struct PairsInput {
    #[command(flatten)]
    input: Input,
    /// Pairs document {"pairs": [[v,w],...]}.
    #[arg(long)]
    pairs: PathBuf,
}

#[derive(Subcommand)]
enum ImcOp {
    /// Check that the pairs form an IMC (exit 1 if not).
    Verify {
        #[command(flatten)]
        args: PairsInput,
    },
    /// Extract a partial transversal avoiding part q.
    Pit {
        #[command(flatten)]
        args: PairsInput,
        #[arg(long)]
        q: usize,
    },
    /// Attachment sets of every IMC vertex.
    Attach {
        #[command(flatten)]
        args: PairsInput,
    },
    /// Search for an IMC containing the edge (u, v).
    Find {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
    },
    /// Split the graph into r - 1 disjoint complete bipartite blocks.
    Decompose {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    G1,
    Prop22,
    Prop24,
    Bipartite,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn claim(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn infeasible(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        Self::infeasible(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

#[derive(Serialize)]
struct SearchResult<W: Serialize> {
    exists: bool,
    witness: Option<W>,
    count: Option<u128>,
    /// First empty part, when one makes every transversal impossible.
    #[serde(skip_serializing_if = "Option::is_none")]
    empty_part: Option<usize>,
}

fn read_text(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::usage(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn read_graph(input: &Input) -> Result<MultipartiteGraph, Failure> {
    let text = read_text(input.input.as_deref())?;
    MultipartiteGraph::deserialize(&text).map_err(|e| Failure::usage(format!("bad graph: {e}")))
}

fn read_pairs(path: &Path) -> Result<Vec<(usize, usize)>, Failure> {
    let text = read_text(Some(path))?;
    let doc: PairsDocument =
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("bad pairs document: {e}")))?;
    Ok(doc.to_pairs())
}

fn write_text(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| Failure::usage(format!("stdout: {e}")))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn emit<T: Serialize>(value: &T) -> Outcome {
    write_text(None, &to_json(value))
}

fn parse_h(text: &str) -> Result<HSpec, Failure> {
    if text.starts_with("cycle:") || text.starts_with("regular:") {
        return HSpec::parse(text).map_err(Failure::usage);
    }
    let g = read_graph(&Input {
        input: Some(PathBuf::from(text)),
    })?;
    Ok(HSpec::Graph(g))
}

fn write_construction(c: &Construction, h: Option<String>, output: &Output) -> Outcome {
    write_text(output.out.as_deref(), &c.graph.serialize())?;
    if let Some(path) = &output.meta {
        #[derive(Serialize)]
        struct Meta<'a> {
            #[serde(flatten)]
            meta: &'a itrans_core::constructions::ConstructionMeta,
            #[serde(skip_serializing_if = "Option::is_none")]
            h: Option<String>,
            pairs: &'a itrans_core::constructions::PairSystem,
        }
        let meta = Meta {
            meta: &c.meta,
            h,
            pairs: &c.pairs,
        };
        write_text(Some(path), &to_json(&meta))?;
    }
    Ok(())
}

fn construct(kind: ConstructKind, seed: u64) -> Outcome {
    match kind {
        ConstructKind::G1 { r, n, output } => {
            let c = build_g1(r as usize, n as usize)?;
            write_construction(&c, None, &output)
        }
        ConstructKind::G2 { r, n, t, h, h2, output } => {
            let (r, n, t) = (r as usize, n as usize, t as usize);
            let h1 = match &h {
                Some(text) => parse_h(text)?,
                None => default_regular_h(r, n, t, seed),
            };
            let h2 = match &h2 {
                Some(text) => parse_h(text)?,
                None => h1.clone(),
            };
            let description = h1.describe();
            let (g1, g2) = (h1.build()?, h2.build()?);
            let c = build_g2_with(r, n, t, &g1, &g2)?;
            write_construction(&c, Some(description), &output)
        }
    }
}

fn count(input: Input, naive: bool, workers: usize) -> Outcome {
    let g = read_graph(&input)?;
    let count = if naive {
        count_its_naive(&g)
    } else {
        count_its_parallel(&g, workers).map_err(|e| Failure::usage(e.to_string()))?
    };
    emit(&SearchResult::<()> {
        exists: count > 0,
        witness: None,
        count: Some(count),
        empty_part: g.empty_part(),
    })
}

fn found<W: Serialize>(witness: Option<W>, g: &MultipartiteGraph) -> Outcome {
    emit(&SearchResult {
        exists: witness.is_some(),
        witness,
        count: None,
        empty_part: g.empty_part(),
    })
}

fn find(what: FindKind) -> Outcome {
    match what {
        FindKind::It { input } => {
            let g = read_graph(&input)?;
            found(find_it(&g), &g)
        }
        FindKind::Blowup { input, s } => {
            let g = read_graph(&input)?;
            let w = find_blowup_it(&g, s as usize).map_err(|e| Failure::usage(e.to_string()))?;
            found(w, &g)
        }
        FindKind::Kss { input, s } => {
            let g = read_graph(&input)?;
            let w = find_kss(&g, s as usize).map_err(|e| Failure::usage(e.to_string()))?;
            emit(&SearchResult {
                exists: w.is_some(),
                witness: w,
                count: None,
                empty_part: None,
            })
        }
        FindKind::Krrs { input, s, cap } => {
            let g = read_graph(&input)?;
            let outcome = find_krrs_from_its(&g, s as usize, cap).map_err(|e| Failure::usage(e.to_string()))?;
            emit(&outcome)
        }
    }
}

fn imc_failure(e: ImcError) -> Failure {
    match e {
        ImcError::UnknownVertex(_) | ImcError::BadPart { .. } => Failure::usage(e.to_string()),
        _ => Failure::claim(e.to_string()),
    }
}

fn imc(op: ImcOp) -> Outcome {
    match op {
        ImcOp::Verify { args } => {
            let g = read_graph(&args.input)?;
            let pairs = read_pairs(&args.pairs)?;
            #[derive(Serialize)]
            struct Verdict {
                valid: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                violation: Option<itrans_core::imc::ImcViolation>,
            }
            match verify_imc(&g, &pairs) {
                Ok(()) => emit(&Verdict {
                    valid: true,
                    violation: None,
                }),
                Err(ImcError::Invalid(v)) => {
                    emit(&Verdict {
                        valid: false,
                        violation: Some(v.clone()),
                    })?;
                    Err(Failure::claim(v.to_string()))
                }
                Err(e) => Err(imc_failure(e)),
            }
        }
        ImcOp::Pit { args, q } => {
            let g = read_graph(&args.input)?;
            let imc = Imc::new(&g, &read_pairs(&args.pairs)?).map_err(imc_failure)?;
            let pit = extract_pit(&g, &imc, q).map_err(imc_failure)?;
            emit(&pit)
        }
        ImcOp::Attach { args } => {
            let g = read_graph(&args.input)?;
            let imc = Imc::new(&g, &read_pairs(&args.pairs)?).map_err(imc_failure)?;
            emit(&attachment_sets(&g, &imc).map_err(imc_failure)?)
        }
        ImcOp::Find { input, u, v } => {
            let g = read_graph(&input)?;
            if u.max(v) >= g.vertex_count() || !g.has_edge(u, v) {
                return Err(Failure::usage(format!("({u}, {v}) is not an edge")));
            }
            found(find_imc_containing_edge(&g, (u.min(v), u.max(v))), &g)
        }
        ImcOp::Decompose { input } => {
            let g = read_graph(&input)?;
            #[derive(Serialize)]
            struct Decomposition {
                decomposable: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                pairs: Option<itrans_core::constructions::PairSystem>,
                #[serde(skip_serializing_if = "Option::is_none")]
                failure: Option<itrans_core::imc::DecomposeFailure>,
            }
            let d = match decompose_bipartite_union(&g) {
                Ok(p) => Decomposition {
                    decomposable: true,
                    pairs: Some(p),
                    failure: None,
                },
                Err(f) => Decomposition {
                    decomposable: false,
                    pairs: None,
                    failure: Some(f),
                },
            };
            emit(&d)
        }
    }
}

fn critical(input: Input, out: Option<PathBuf>, report: Option<PathBuf>) -> Outcome {
    let g = read_graph(&input)?;
    let (crit, rep) = criticalize(&g).map_err(|CriticalError::HasIt(t)| {
        Failure::usage(format!("input has an independent transversal {:?}", t.picks))
    })?;
    write_text(out.as_deref(), &crit.serialize())?;
    if let Some(path) = report {
        write_text(Some(&path), &to_json(&rep))?;
    }
    Ok(())
}

fn verify(
    preset: PresetArg,
    (r, n, t, s): (u32, u32, u32, u32),
    h: Option<String>,
    format: Format,
    seed: u64,
    workers: usize,
) -> Outcome {
    let preset = match preset {
        PresetArg::G1 => Preset::G1,
        PresetArg::Prop22 => Preset::Prop22,
        PresetArg::Prop24 => Preset::Prop24,
        PresetArg::Bipartite => Preset::Bipartite,
    };
    let params = InstanceParams {
        t: t as usize,
        s: s as usize,
        seed,
        h: h.as_deref().map(parse_h).transpose()?,
        workers,
        ..InstanceParams::new(preset, r as usize, n as usize)
    };
    let report = verify_instance(&params);
    match format {
        Format::Json => emit(&report)?,
        Format::Table => write_text(None, &report.to_table())?,
    }
    if let Some(err) = &report.infeasible {
        return Err(Failure::infeasible(err.clone()));
    }
    if report.any_fail() {
        return Err(Failure::claim("a claim failed"));
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let workers = cli.workers as usize;
    match cli.command {
        Command::Construct { kind } => construct(kind, cli.seed),
        Command::Count { input, naive } => count(input, naive, workers),
        Command::Find { what } => find(what),
        Command::Imc { op } => imc(op),
        Command::Criticalize { input, out, report } => critical(input, out, report),
        Command::Verify {
            preset,
            r,
            n,
            t,
            s,
            h,
            format,
        } => verify(preset, (r, n, t, s), h, format, cli.seed, workers),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("itrans: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
