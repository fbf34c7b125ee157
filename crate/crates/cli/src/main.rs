//! `k3syz`: JSON-in, JSON-out front end for the k3syz library.
//!
//! Exit codes: 0 success (for `stability`: cohomologically stable), 2 malformed
//! input, 3 violated precondition, 10 unstable, 11 not certified stable.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use k3syz::field::{random_prime, DEFAULT_PRIME};
use k3syz::form::{Form, Variables};
use k3syz::io::{self as kio, bigint_to_json, rational_to_json};
use k3syz::koszul::{koszul_matrix, BackendMode, FormSpace, KernelBackend};
use k3syz::lattice::{self, Preconditions};
use k3syz::random::{random_form_space, seeded};
use k3syz::ring::graded_dim;
use k3syz::stability::{check_cohomological_stability, default_basepoint_bound, StabilityOptions, Verdict};
use k3syz::Error;

#[derive(Parser, Debug)]
#[command(name = "k3syz", version, about = "Invariants and cohomological stability of syzygy bundles on K3 surfaces")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalArgs {
    /// Prime for modular ranks (default 2^61-1, or a seeded random prime when --seed is given)
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Compute every rank exactly over the rationals
    #[arg(long, global = true)]
    exact: bool,
    /// Largest degree tried by the base-point check
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    /// Seed for every randomized choice
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Skip the range checks on w and v; only keep ranks positive
    #[arg(long, global = true)]
    formal: bool,
    /// Include wall-clock times in the output (makes it non-reproducible)
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Euler characteristic, moduli dimension and slope; optional transforms
    Invariants {
        input: PathBuf,
        /// Apply the syzygy transform with dim W = w
        #[arg(long)]
        syzygy: Option<String>,
        /// Apply the extension transform with dim V = v
        #[arg(long)]
        extension: Option<String>,
    },
    /// Cohomological stability certificate for a form space on a surface
    Stability(SurfaceForms),
    /// Kernel dimension of one Koszul map, i.e. h^0 of a twisted exterior power
    H0 {
        #[command(flatten)]
        io: SurfaceForms,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        t: u32,
        /// Write the rational Koszul matrix as JSON
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Certify that the forms have no common zero on the surface
    Basepoints(SurfaceForms),
    /// Dimensions of graded pieces of the coordinate ring
    RingDim {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long)]
        t: u32,
        /// Report every degree from --t up to this one
        #[arg(long)]
        to: Option<u32>,
        /// Export the matrix of multiplication by this form from degree --t
        #[arg(long, requires = "export")]
        multiply: Option<String>,
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Verdict statistics over random form spaces
    Sample {
        #[arg(long)]
        surface: PathBuf,
        /// Degree a of the forms
        #[arg(long)]
        degree: u32,
        /// Dimension w of the form space
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u16).range(1..))]
        max_terms: u16,
    },
}

#[derive(Args, Debug)]
struct SurfaceForms {
    #[arg(long)]
    surface: PathBuf,
    #[arg(long)]
    forms: PathBuf,
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 2,
            CliError::Core(e) if e.is_malformed_input() => 2,
            CliError::Core(Error::InternalInconsistency(_)) => 1,
            CliError::Core(_) => 3,
        }
    }

    fn to_json(&self) -> Value {
        let (kind, message) = match self {
            CliError::Io(m) => ("IoError", m.clone()),
            CliError::Core(e) => (e.kind(), e.to_string()),
        };
        json!({ "error": { "kind": kind, "message": message } })
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(kio::parse_json(&text)?)
}

fn write_json(path: &Path, v: &Value) -> CliResult<()> {
    let text = serde_json::to_string(v).expect("serializable");
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn parse_big(s: &str, what: &str) -> CliResult<num_bigint::BigInt> {
    s.parse().map_err(|_| Error::InvalidInput(format!("--{what} expects an integer, got `{s}`")).into())
}

impl GlobalArgs {
    fn mode(&self) -> Preconditions {
        if self.formal {
            Preconditions::Formal
        } else {
            Preconditions::Enforced
        }
    }

    fn backend_mode(&self) -> BackendMode {
        if self.exact {
            return BackendMode::Exact;
        }
        let prime = self
            .prime
            .or_else(|| self.seed.map(|s| random_prime(&mut seeded(s))))
            .unwrap_or(DEFAULT_PRIME);
        BackendMode::Modular { prime }
    }
}

struct Loaded {
    backend: KernelBackend,
    vars: Variables,
}

fn load_surface(path: &Path, global: &GlobalArgs) -> CliResult<Loaded> {
    let (f, vars) = kio::parse_surface(&read_json(path)?)?;
    let backend = KernelBackend::new(f, vars.clone(), global.backend_mode())?;
    Ok(Loaded { backend, vars })
}

fn load_forms(path: &Path, loaded: &Loaded) -> CliResult<(FormSpace, Option<u64>)> {
    let input = kio::parse_form_space(&read_json(path)?)?;
    let forms = input.parse_forms(&loaded.vars)?;
    Ok((FormSpace::new(forms, loaded.backend.rational_ring())?, input.target_rank))
}

fn cmd_invariants(global: &GlobalArgs, input: &Path, syzygy: Option<&str>, extension: Option<&str>) -> CliResult<Value> {
    let (lat, inv) = kio::parse_invariants(&read_json(input)?)?;
    let mode = global.mode();
    let mut out = json!({
        "input": kio::invariants_to_json(&lat, &inv),
        "euler_characteristic": bigint_to_json(&lattice::euler_characteristic(&inv, &lat)),
        "chi_end": bigint_to_json(&lattice::chi_end(&inv, &lat)),
        "spl_dim": bigint_to_json(&lattice::spl_dim(&inv, &lat)?),
        "slope": rational_to_json(&lattice::slope(&inv, &lat)),
    });
    if let Some(w) = syzygy {
        let w = parse_big(w, "syzygy")?;
        let s = lattice::syzygy_transform(&inv, &lat, &w, mode)?;
        out["syzygy"] = json!({
            "w": bigint_to_json(&w),
            "invariants": s,
            "euler_characteristic": bigint_to_json(&lattice::euler_characteristic(&s, &lat)),
            "slope": rational_to_json(&lattice::slope(&s, &lat)),
            "fiber_dim": bigint_to_json(&lattice::syzygy_fiber_dim(&inv, &lat, &w, mode)?),
            "doubling": lattice::doubling_check_syzygy(&inv, &lat, &w, mode)?,
        });
    }
    if let Some(v) = extension {
        let v = parse_big(v, "extension")?;
        let e = lattice::extension_transform(&inv, &lat, &v, mode)?;
        out["extension"] = json!({
            "v": bigint_to_json(&v),
            "u": bigint_to_json(&lattice::extension_space_dim(&inv, &lat)),
            "invariants": e,
            "euler_characteristic": bigint_to_json(&lattice::euler_characteristic(&e, &lat)),
            "slope": rational_to_json(&lattice::slope(&e, &lat)),
            "fiber_dim": bigint_to_json(&lattice::extension_fiber_dim(&inv, &lat, &v, mode)?),
            "doubling": lattice::doubling_check_extension(&inv, &lat, &v, mode)?,
        });
    }
    Ok(out)
}

fn cmd_stability(global: &GlobalArgs, io: &SurfaceForms) -> CliResult<(Value, u8)> {
    let loaded = load_surface(&io.surface, global)?;
    let (space, target_rank) = load_forms(&io.forms, &loaded)?;
    let options = StabilityOptions { max_degree: global.max_degree, target_rank };
    let cert = check_cohomological_stability(&loaded.backend, &space, &options)?;
    let code = match cert.verdict {
        Some(Verdict::CohomologicallyStable) => 0,
        Some(Verdict::Unstable) => 10,
        _ => 11,
    };
    let mut out = serde_json::to_value(&cert).expect("serializable");
    if global.timings {
        out["timings_ms"] = json!(cert.timings.iter().map(|d| d.as_secs_f64() * 1e3).collect::<Vec<_>>());
    }
    Ok((out, code))
}

fn cmd_h0(global: &GlobalArgs, io: &SurfaceForms, q: usize, t: u32, export: Option<&Path>) -> CliResult<Value> {
    let loaded = load_surface(&io.surface, global)?;
    let (space, _) = load_forms(&io.forms, &loaded)?;
    let k = loaded.backend.h0_wedge_syzygy(&space, q, t)?;
    let d = loaded.backend.degree();
    let bound = global.max_degree.unwrap_or_else(|| default_basepoint_bound(space.degree(), space.dim(), d));
    let basepoints = loaded.backend.basepoint_check(&space, bound)?;
    let bundle = matches!(basepoints, k3syz::koszul::BasepointStatus::Certified { .. });
    if let Some(path) = export {
        let ring = loaded.backend.rational_ring();
        let map = koszul_matrix(ring, &space, q, t)?;
        write_json(path, &map.matrix.to_json(ring.field()))?;
    }
    Ok(json!({
        "q": q,
        "t": t,
        "kernel_dim": k.dim,
        // Only a section count of a vector bundle when W is base-point free.
        "h0": if bundle { json!(k.dim) } else { Value::Null },
        "rows": k.target_dim,
        "cols": k.source_dim,
        "provenance": k.provenance,
        "modular_kernel_dim": k.modular_dim,
        "prime": loaded.backend.prime(),
        "basepoints": basepoints,
    }))
}

fn cmd_basepoints(global: &GlobalArgs, io: &SurfaceForms) -> CliResult<Value> {
    let loaded = load_surface(&io.surface, global)?;
    let (space, _) = load_forms(&io.forms, &loaded)?;
    let bound = global
        .max_degree
        .unwrap_or_else(|| default_basepoint_bound(space.degree(), space.dim(), loaded.backend.degree()));
    let status = loaded.backend.basepoint_check(&space, bound)?;
    Ok(json!({ "basepoints": status, "max_degree": bound, "prime": loaded.backend.prime() }))
}

fn cmd_ring_dim(
    global: &GlobalArgs,
    surface: &Path,
    t: u32,
    to: Option<u32>,
    multiply: Option<&str>,
    export: Option<&Path>,
) -> CliResult<Value> {
    let loaded = load_surface(surface, global)?;
    let ring = loaded.backend.rational_ring();
    let d = ring.degree();
    let dims: Vec<Value> = (t..=to.unwrap_or(t).max(t))
        .map(|s| {
            let explicit = match loaded.backend.modular_ring() {
                Some(r) => r.piece(s).dim(),
                None => ring.piece(s).dim(),
            };
            json!({ "t": s, "closed_form": graded_dim(d, s as i64), "explicit": explicit })
        })
        .collect();
    let mut out = json!({ "hypersurface": ring.hypersurface().to_text(&loaded.vars), "degree": d, "dims": dims });
    if let (Some(g), Some(path)) = (multiply, export) {
        let g = Form::parse(g, &loaded.vars)?;
        let m = ring.multiplication_matrix(&g, t)?;
        write_json(path, &m.to_json(ring.field()))?;
        out["exported"] = json!({ "rows": m.nrows(), "cols": m.ncols() });
    }
    Ok(out)
}

fn cmd_sample(global: &GlobalArgs, surface: &Path, a: u32, w: usize, trials: usize, max_terms: usize) -> CliResult<Value> {
    let loaded = load_surface(surface, global)?;
    let mut rng = seeded(global.seed.unwrap_or(0));
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut runs = Vec::with_capacity(trials);
    let options = StabilityOptions { max_degree: global.max_degree, target_rank: None };
    for _ in 0..trials {
        let space = random_form_space(&mut rng, loaded.backend.rational_ring(), a, w, max_terms)?;
        let cert = check_cohomological_stability(&loaded.backend, &space, &options)?;
        let label = cert.verdict.map_or("Withheld".to_string(), |v| format!("{v:?}"));
        *counts.entry(label.clone()).or_default() += 1;
        runs.push(json!({ "forms": cert.form_space.forms, "kernel_dims": cert.kernel_dims, "verdict": label }));
    }
    Ok(json!({ "degree": a, "dim": w, "trials": trials, "seed": global.seed.unwrap_or(0), "counts": counts, "runs": runs }))
}

fn run(cli: &Cli) -> CliResult<(Value, u8)> {
    let g = &cli.global;
    match &cli.command {
        Command::Invariants { input, syzygy, extension } => {
            Ok((cmd_invariants(g, input, syzygy.as_deref(), extension.as_deref())?, 0))
        }
        Command::Stability(io) => cmd_stability(g, io),
        Command::H0 { io, q, t, export } => Ok((cmd_h0(g, io, *q, *t, export.as_deref())?, 0)),
        Command::Basepoints(io) => Ok((cmd_basepoints(g, io)?, 0)),
        Command::RingDim { surface, t, to, multiply, export } => {
            Ok((cmd_ring_dim(g, surface, *t, *to, multiply.as_deref(), export.as_deref())?, 0))
        }
        Command::Sample { surface, degree, dim, trials, max_terms } => {
            Ok((cmd_sample(g, surface, *degree, *dim, *trials, *max_terms as usize)?, 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, code)) => {
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
