use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use bcube_pef::dpc::{self, EndpointQuad};
use bcube_pef::files::{DpcDoc, FaultFile, PathDoc, SweepRecord};
use bcube_pef::hampath;
use bcube_pef::oracle;
use bcube_pef::pef::{self, FaultSet, PefBudget};
use bcube_pef::topology::{self, Dims, NodeId};
use bcube_pef::{Error, Result};

#[derive(Parser)]
#[command(
    name = "bcube",
    about = "BCube topology, fault models, and path covers",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TopologyFormat {
    Dot,
    JsonSummary,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleMode {
    Ham,
    Dpc,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SweepMode {
    Dpc,
    Ham,
}

#[derive(Subcommand)]
enum Command {
    /// Export BC(n,k) as DOT or print a size summary.
    Topology {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        k: u8,
        #[arg(long, value_enum, default_value = "json-summary")]
        format: TopologyFormat,
    },
    /// Generate a deterministic random f-PEF fault set.
    GenFaults {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        k: u8,
        #[arg(long, default_value_t = 1.0)]
        fill: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct a fault-avoiding Hamiltonian path.
    Hampath {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        k: u8,
        #[arg(long)]
        faults: Option<PathBuf>,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Construct a paired 2-disjoint path cover.
    Dpc {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        k: u8,
        #[arg(long)]
        faults: Option<PathBuf>,
        #[arg(long)]
        s1: String,
        #[arg(long)]
        t1: String,
        #[arg(long)]
        s2: String,
        #[arg(long)]
        t2: String,
    },
    /// Verify a path or cover document against a fault set.
    Verify {
        /// Path or 2-DPC JSON document (kind inferred from fields).
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        faults: Option<PathBuf>,
    },
    /// Exhaustive existence search on a small instance.
    Oracle {
        #[arg(long, value_enum)]
        mode: OracleMode,
        #[arg(long)]
        n: u8,
        #[arg(long)]
        k: u8,
        #[arg(long)]
        faults: Option<PathBuf>,
        /// Endpoints: two node strings for ham, four for dpc.
        endpoints: Vec<String>,
        #[arg(long, default_value_t = oracle::DEFAULT_HAM_CAP)]
        cap: u64,
    },
    /// Run a randomized construction-and-verify matrix, one JSON record per
    /// trial; nonzero exit if any trial fails verification.
    Sweep {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        k: u8,
        #[arg(long, default_value_t = 1.0)]
        fill: f64,
        /// Number of fault sets (consecutive seeds starting at --seed).
        #[arg(long, default_value_t = 10)]
        fault_sets: u64,
        /// Endpoint tuples per fault set.
        #[arg(long, default_value_t = 20)]
        quads: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "dpc")]
        mode: SweepMode,
        /// Output file for the records; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_faults(dims: Dims, path: &Option<PathBuf>) -> Result<FaultSet> {
    match path {
        None => Ok(FaultSet::empty(dims)),
        Some(p) => {
            let doc: FaultFile = serde_json::from_str(&fs::read_to_string(p)?)?;
            let f = doc.to_fault_set()?;
            if f.dims() != dims {
                return Err(Error::DimsMismatch);
            }
            Ok(f)
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Topology { n, k, format } => {
            let dims = Dims::new(n, k)?;
            match format {
                TopologyFormat::Dot => {
                    let mut out = std::io::stdout().lock();
                    topology::write_dot(dims, &mut out)?;
                }
                TopologyFormat::JsonSummary => {
                    let per_dim: Vec<u64> = (0..dims.levels() as u8)
                        .map(|i| topology::dimension_edges(dims, i).map(|e| e.len() as u64))
                        .collect::<Result<_>>()?;
                    println!(
                        "{}",
                        json!({
                            "nodes": dims.node_count(),
                            "edges": dims.edge_count(),
                            "per_dim": per_dim,
                        })
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::GenFaults {
            n,
            k,
            fill,
            seed,
            out,
        } => {
            let dims = Dims::new(n, k)?;
            let f = pef::gen_random_pef(dims, fill, seed)?;
            let budgets = PefBudget::new(dims)?;
            let doc = FaultFile::from_fault_set(&f);
            let body = serde_json::to_string_pretty(&doc)?;
            match out {
                Some(p) => fs::write(p, body)?,
                None => println!("{body}"),
            }
            eprintln!(
                "per-dimension counts: {:?}; budgets: {:?}; f-PEF: {}",
                f.per_dim_counts(),
                (0..dims.levels() as u8)
                    .map(|i| budgets.get(i))
                    .collect::<Vec<_>>(),
                pef::is_f_pef(&f)?
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Hampath {
            n,
            k,
            faults,
            from,
            to,
        } => {
            let dims = Dims::new(n, k)?;
            let f = load_faults(dims, &faults)?;
            let s = dims.parse_node(&from)?;
            let t = dims.parse_node(&to)?;
            let p = hampath::ham_path_bcube(dims, &f, &s, &t)?;
            let required: Vec<NodeId> = dims.nodes().collect();
            let report = oracle::verify_path(&p, &f, &required, &s, &t);
            println!(
                "{}",
                json!({
                    "path": PathDoc::new(dims, &p),
                    "verified": report.ok,
                    "violations": report.violations,
                })
            );
            Ok(if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Dpc {
            n,
            k,
            faults,
            s1,
            t1,
            s2,
            t2,
        } => {
            let dims = Dims::new(n, k)?;
            let f = load_faults(dims, &faults)?;
            let q = EndpointQuad::new(
                dims.parse_node(&s1)?,
                dims.parse_node(&t1)?,
                dims.parse_node(&s2)?,
                dims.parse_node(&t2)?,
            )?;
            let (d, trace) = dpc::dpc_bcube_traced(dims, &f, &q)?;
            let report = oracle::verify_2dpc(&d, &f, dims, &q);
            println!(
                "{}",
                json!({
                    "dpc": DpcDoc::new(dims, &d, trace),
                    "verified": report.ok,
                    "violations": report.violations,
                })
            );
            Ok(if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Verify { input, faults } => {
            let raw: serde_json::Value = serde_json::from_str(&fs::read_to_string(&input)?)?;
            let report = if raw.get("p1").is_some() {
                let doc: DpcDoc = serde_json::from_value(raw)?;
                let (dims, d, q) = doc.decode()?;
                let f = load_faults(dims, &faults)?;
                oracle::verify_2dpc(&d, &f, dims, &q)
            } else {
                let doc: PathDoc = serde_json::from_value(raw)?;
                let (dims, p) = doc.decode()?;
                let f = load_faults(dims, &faults)?;
                let required: Vec<NodeId> = dims.nodes().collect();
                oracle::verify_path(&p, &f, &required, p.first(), p.last())
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Oracle {
            mode,
            n,
            k,
            faults,
            endpoints,
            cap,
        } => {
            let dims = Dims::new(n, k)?;
            let f = load_faults(dims, &faults)?;
            let nodes = endpoints
                .iter()
                .map(|s| dims.parse_node(s))
                .collect::<Result<Vec<_>>>()?;
            match mode {
                OracleMode::Ham => {
                    if nodes.len() != 2 {
                        return Err(Error::InvalidQuad("ham mode needs two endpoints".into()));
                    }
                    match oracle::brute_ham_bcube(&f, &nodes[0], &nodes[1], cap)? {
                        Some(p) => {
                            println!(
                                "{}",
                                json!({"exists": true, "path": PathDoc::new(dims, &p)})
                            );
                        }
                        None => println!("{}", json!({"exists": false})),
                    }
                }
                OracleMode::Dpc => {
                    if nodes.len() != 4 {
                        return Err(Error::InvalidQuad("dpc mode needs four endpoints".into()));
                    }
                    let q = EndpointQuad::new(
                        nodes[0].clone(),
                        nodes[1].clone(),
                        nodes[2].clone(),
                        nodes[3].clone(),
                    )?;
                    match oracle::brute_2dpc_bcube(&f, &q, cap)? {
                        Some(d) => println!(
                            "{}",
                            json!({"exists": true, "dpc": DpcDoc::new(dims, &d, vec![])})
                        ),
                        None => println!("{}", json!({"exists": false})),
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            n,
            k,
            fill,
            fault_sets,
            quads,
            seed,
            mode,
            out,
        } => {
            let dims = Dims::new(n, k)?;
            let trials: Vec<(usize, u64, u64)> = (0..fault_sets)
                .flat_map(|fs_i| (0..quads).map(move |q_i| (fs_i, q_i)))
                .enumerate()
                .map(|(trial, (fs_i, q_i))| (trial, seed + fs_i, q_i))
                .collect();
            let mut records: Vec<SweepRecord> = trials
                .par_iter()
                .map(|&(trial, fault_seed, quad_index)| {
                    run_trial(dims, fill, fault_seed, quad_index, trial, mode)
                })
                .collect::<Result<Vec<_>>>()?;
            records.sort_by_key(|r| r.trial);
            let failed = records.iter().filter(|r| !r.verified).count();
            let mut sink: Box<dyn Write> = match out {
                Some(p) => Box::new(fs::File::create(p)?),
                None => Box::new(std::io::stdout().lock()),
            };
            for r in &records {
                writeln!(sink, "{}", serde_json::to_string(r)?)?;
            }
            eprintln!("{} trials, {} failed verification", records.len(), failed);
            Ok(if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn run_trial(
    dims: Dims,
    fill: f64,
    fault_seed: u64,
    quad_index: u64,
    trial: usize,
    mode: SweepMode,
) -> Result<SweepRecord> {
    let f = pef::gen_random_pef(dims, fill, fault_seed)?;
    let want = match mode {
        SweepMode::Dpc => 4,
        SweepMode::Ham => 2,
    };
    let endpoints = sample_endpoints(dims, fault_seed, quad_index, want);
    let started = Instant::now();
    let (verified, trace, endpoint_strings) = match mode {
        SweepMode::Dpc => {
            let q = EndpointQuad::new(
                endpoints[0].clone(),
                endpoints[1].clone(),
                endpoints[2].clone(),
                endpoints[3].clone(),
            )?;
            let strings = endpoints.iter().map(|u| dims.format_node(u)).collect();
            match dpc::dpc_bcube_traced(dims, &f, &q) {
                Ok((d, trace)) => (oracle::verify_2dpc(&d, &f, dims, &q).ok, trace, strings),
                Err(_) => (false, vec![], strings),
            }
        }
        SweepMode::Ham => {
            let strings = endpoints.iter().map(|u| dims.format_node(u)).collect();
            let required: Vec<NodeId> = dims.nodes().collect();
            match hampath::ham_path_bcube(dims, &f, &endpoints[0], &endpoints[1]) {
                Ok(p) => (
                    oracle::verify_path(&p, &f, &required, &endpoints[0], &endpoints[1]).ok,
                    vec![],
                    strings,
                ),
                Err(_) => (false, vec![], strings),
            }
        }
    };
    Ok(SweepRecord {
        trial,
        n: dims.n(),
        k: dims.k(),
        fill,
        seed: fault_seed,
        fault_count: f.len(),
        endpoints: endpoint_strings,
        case_trace: trace,
        verified,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

fn sample_endpoints(dims: Dims, fault_seed: u64, quad_index: u64, want: usize) -> Vec<NodeId> {
    let mut rng = ChaCha8Rng::seed_from_u64(
        fault_seed
            .wrapping_mul(0x9e37_79b9)
            .wrapping_add(quad_index),
    );
    let mut picked = HashSet::new();
    let mut codes: Vec<u64> = (0..dims.node_count()).collect();
    codes.shuffle(&mut rng);
    let mut out = Vec::new();
    for c in codes {
        if picked.insert(c) {
            out.push(NodeId::from_code(dims, c));
            if out.len() == want {
                break;
            }
        }
    }
    out
}
