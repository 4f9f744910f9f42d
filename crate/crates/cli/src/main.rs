//! Command line front end: builds the named code families, verifies code
//! files against claims, evaluates the cardinality bound, runs packing
//! decompositions and solves the pairing program.
//!
//! Exit codes: 0 on success (and PASS verdicts), 1 on usage or input
//! errors, 2 when a verification reaches a FAIL verdict, 3 when the
//! requested parameters are unsupported or infeasible. Output files and
//! stdout are deterministic for identical flags.

use std::fmt::Display;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use subspace_codes::construct::{self, Construction};
use subspace_codes::io;
use subspace_codes::packing::{self, AqOracle, LambdaProgram, Packing};
use subspace_codes::verify::{self, CertifyOptions};
use subspace_codes::{metrics, Code, Error, Result, Subspace};

/// Pair count up to which certification stays exhaustive.
const EXHAUSTIVE_CAP: u64 = 1 << 28;

#[derive(Parser)]
#[command(name = "subspace-codes", version, about = "Constant-dimension subspace codes: construction, verification, bounds and packings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a named code family and optionally certify it.
    Construct {
        /// One of: 8-4-4, 9-6-4, 3k-3 (with --k), 10-6-4.
        #[arg(long)]
        family: String,
        /// Field order.
        #[arg(long)]
        q: u32,
        /// Subspace dimension for the 3k-3 family.
        #[arg(long)]
        k: Option<usize>,
        /// Code file supplying the trailing-block side of the 10-6-4 family.
        #[arg(long)]
        b_code: Option<PathBuf>,
        /// Write the code to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-verify the claimed minimum distance from the definition.
        #[arg(long)]
        certify: bool,
        /// Seed for sampled certification; only used above the exhaustive cap.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Certify a code file against a claimed distance and cardinality.
    Verify {
        #[arg(value_name = "FILE")]
        file: PathBuf,
        /// Claimed minimum subspace distance.
        #[arg(long)]
        distance: usize,
        /// Claimed number of codewords.
        #[arg(long)]
        cardinality: Option<u64>,
        /// Seed for sampled certification; only used above the exhaustive cap.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate cardinality bounds.
    Bound {
        #[command(subcommand)]
        kind: BoundCmd,
    },
    /// Split a code file into parts with a guaranteed internal distance.
    Decompose {
        #[arg(value_name = "FILE")]
        file: PathBuf,
        /// Internal minimum distance of every part.
        #[arg(long)]
        d: usize,
        /// Minimum distance of the ground code itself (checked).
        #[arg(long)]
        dprime: usize,
        /// Run the exact branch-and-bound selection instead of the greedy pass.
        #[arg(long)]
        exact: bool,
        /// Number of parts to select (exact mode).
        #[arg(long)]
        l: Option<usize>,
        /// Largest part size to consider (exact mode).
        #[arg(long)]
        kappa: Option<usize>,
    },
    /// Solve the coset pairing program.
    Lambda {
        #[command(subcommand)]
        kind: LambdaCmd,
    },
    /// Build a parallelism: spreads that partition all lines of PG(3, q).
    Parallelism {
        /// Field order (only 2 is constructed).
        #[arg(long)]
        q: u32,
        /// Write the spreads to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BoundCmd {
    /// Lifted-MRD plus addendum cardinality bound.
    Mrd {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        /// Table of known packing numbers: `q n d k value` per line.
        #[arg(long)]
        aq_table: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum LambdaCmd {
    /// Maximize paired family sizes under totals and per-index caps.
    Solve {
        /// Total budget on the leading side.
        #[arg(long)]
        alpha: u64,
        /// Total budget on the trailing side.
        #[arg(long)]
        beta: u64,
        /// Per-index cap on the leading side.
        #[arg(long)]
        abar: u64,
        /// Per-index cap on the trailing side.
        #[arg(long)]
        bbar: u64,
        /// Number of paired families.
        #[arg(long)]
        l: u64,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let is_usage = e.use_stderr();
            let _ = e.print();
            return if is_usage { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Unsupported(_)
                | Error::Infeasible(_)
                | Error::Budget(_)
                | Error::Blueprint(_)
                | Error::OracleGap { .. } => 3,
                _ => 1,
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Construct { family, q, k, b_code, out, certify, seed } => {
            cmd_construct(&family, q, k, b_code.as_deref(), out.as_deref(), certify, seed)
        }
        Cmd::Verify { file, distance, cardinality, seed } => {
            cmd_verify(&file, distance, cardinality, seed)
        }
        Cmd::Bound { kind: BoundCmd::Mrd { q, n, k, d, aq_table } } => {
            let oracle = match aq_table {
                Some(p) => AqOracle::parse(&std::fs::read_to_string(p)?)?,
                None => AqOracle::builtin(),
            };
            println!("{}", construct::mrd_bound(q, n, k, d, &oracle)?);
            Ok(true)
        }
        Cmd::Decompose { file, d, dprime, exact, l, kappa } => {
            cmd_decompose(&file, d, dprime, exact, l, kappa)
        }
        Cmd::Lambda { kind: LambdaCmd::Solve { alpha, beta, abar, bbar, l } } => {
            let sol = packing::lambda_ilp_solve(&LambdaProgram {
                l,
                alpha,
                beta,
                alpha_bar: abar,
                beta_bar: bbar,
            })?;
            println!("lambda={}", sol.objective);
            println!("a={}", join(&sol.a));
            println!("b={}", join(&sol.b));
            Ok(true)
        }
        Cmd::Parallelism { q, out } => cmd_parallelism(q, out.as_deref()),
    }
}

fn join<T: Display>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn cmd_construct(
    family: &str,
    q: u32,
    k: Option<usize>,
    b_code: Option<&Path>,
    out: Option<&Path>,
    certify: bool,
    seed: u64,
) -> Result<bool> {
    if b_code.is_some() && family != "10-6-4" {
        return Err(Error::InvalidParameter(
            "--b-code only applies to --family 10-6-4".into(),
        ));
    }
    if k.is_some() && family != "3k-3" {
        return Err(Error::InvalidParameter("--k only applies to --family 3k-3".into()));
    }
    let external = match b_code {
        Some(p) => Some(io::read_code(p)?.collect()?),
        None => None,
    };
    let c = match family {
        "8-4-4" => construct::build_8_4_4(q)?,
        "9-6-4" => construct::build_9_6_4(q)?,
        "10-6-4" => construct::build_10_6_4(q, external.as_ref())?,
        "3k-3" => {
            let k = k.ok_or_else(|| {
                Error::InvalidParameter("--family 3k-3 needs --k".into())
            })?;
            construct::build_family_3km3(k, q)?
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown family `{other}` (expected 8-4-4, 9-6-4, 3k-3 or 10-6-4)"
            )))
        }
    };

    let summary = summarize(family, q, &c);
    for line in &summary {
        println!("{line}");
    }
    if let Some(path) = out {
        io::write_text(path, &io::render_code(&c.code, &summary))?;
        println!("wrote={}", path.display());
    }
    if certify {
        println!();
        return certify_built(&c, seed);
    }
    Ok(true)
}

fn summarize(family: &str, q: u32, c: &Construction) -> Vec<String> {
    let mut lines = vec![
        format!("family={family}"),
        format!("q={q}"),
        format!("n={}", c.code.ambient()),
    ];
    if let Some(k) = c.code.constant_dim() {
        lines.push(format!("k={k}"));
    }
    lines.push(format!("distance={}", c.distance));
    lines.push(format!("cardinality={}", c.size()));
    for (name, count) in &c.blocks {
        lines.push(format!("block {name}={count}"));
    }
    if let Some(lambda) = c.lambda {
        lines.push(format!("lambda={lambda}"));
    }
    for note in &c.notes {
        lines.push(format!("note: {note}"));
    }
    lines
}

/// Exhaustive certification when the pair count fits the cap; above it, a
/// structural pass over pair routes plus a seeded sample of definitional
/// distances. The verdicts of everything printed must all pass.
fn certify_built(c: &Construction, seed: u64) -> Result<bool> {
    let m = c.code.len() as u64;
    let pairs = m * m.saturating_sub(1) / 2;
    if pairs <= EXHAUSTIVE_CAP {
        let rep = verify::certify_code(
            &c.code,
            &CertifyOptions {
                claimed_distance: Some(c.distance),
                exhaustive_pair_limit: EXHAUSTIVE_CAP,
                seed,
                ..Default::default()
            },
        );
        println!("{rep}");
        Ok(rep.pass)
    } else {
        let structural = verify::certify_structural(&c.code, c.distance)?;
        println!("{structural}");
        println!();
        let sampled = verify::certify_code(
            &c.code,
            &CertifyOptions {
                claimed_distance: Some(c.distance),
                exhaustive_pair_limit: 0,
                seed,
                ..Default::default()
            },
        );
        println!("{sampled}");
        Ok(structural.pass && sampled.pass)
    }
}

fn cmd_verify(
    file: &Path,
    distance: usize,
    cardinality: Option<u64>,
    seed: u64,
) -> Result<bool> {
    let raw = io::read_code(file)?;
    let rep = verify::certify(
        &raw.field,
        raw.ambient,
        &raw.words,
        &CertifyOptions {
            claimed_distance: Some(distance),
            claimed_cardinality: cardinality,
            exhaustive_pair_limit: EXHAUSTIVE_CAP,
            sample_pairs: 1_000_000,
            seed,
        },
    )?;
    println!("{rep}");
    Ok(rep.pass)
}

fn print_packing(p: &Packing) {
    let mut sizes: Vec<usize> = p.parts().iter().map(Code::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let covered: usize = sizes.iter().sum();
    println!("parts={}", p.length());
    println!("covered={covered}");
    println!("residual={}", p.residual().len());
    println!("part_sizes={}", join(&sizes));
}

fn cmd_decompose(
    file: &Path,
    d: usize,
    dprime: usize,
    exact: bool,
    l: Option<usize>,
    kappa: Option<usize>,
) -> Result<bool> {
    let ground = io::read_code(file)?.collect()?;
    if let Err(w) = metrics::check_min_distance(&ground, dprime) {
        return Err(Error::InvalidParameter(format!(
            "ground code has a pair at distance {}, below --dprime {dprime}",
            w.d
        )));
    }
    if exact {
        let l = l.ok_or_else(|| Error::InvalidParameter("--exact needs --l".into()))?;
        let out = packing::ilp_decompose(&ground, d, l, kappa, None)?;
        print_packing(&out.packing);
        println!("objective={}", out.objective);
        println!("upper_bound={}", out.upper_bound);
        println!("optimal={}", out.optimal);
        println!("kappa={}", out.kappa);
        println!("census={}", join(&out.census));
        Ok(true)
    } else {
        if l.is_some() || kappa.is_some() {
            return Err(Error::InvalidParameter("--l and --kappa need --exact".into()));
        }
        let p = packing::greedy_decompose(&ground, d, dprime)?;
        print_packing(&p);
        Ok(true)
    }
}

fn cmd_parallelism(q: u32, out: Option<&Path>) -> Result<bool> {
    let p = packing::parallelism_g42(q)?;
    let report = verify::validate_packing(&p);
    if let Some(path) = out {
        let groups: Vec<(String, Vec<Subspace>)> = p
            .parts()
            .iter()
            .enumerate()
            .map(|(i, part)| (format!("spread {}", i + 1), part.words().to_vec()))
            .collect();
        let comments =
            vec![format!("line parallelism of PG(3, {q}): each spread partitions the points")];
        let text = io::render_grouped(p.ground().field(), p.ground().ambient(), &comments, &groups);
        io::write_text(path, &text)?;
        println!("wrote={}", path.display());
    }
    println!("{report}");
    Ok(report.pass)
}
