use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use serde::Serialize;
use serde_json::json;

use cpmaps::channel::AnyMap;
use cpmaps::constructors::{
    group_average_channel, local_update_channel, pauli_matrices, pinned_channel, projective_channel,
    random_channel, weighted_basis_channel, WeightMatrix,
};
use cpmaps::dynamics::{iterate, rate_check, self_adjoint_spectrum, semigroup_evolve, uniform_grid, RateCheck};
use cpmaps::linalg::NormOrder;
use cpmaps::matrix::{c64, ComplexMatrix};
use cpmaps::positivity::{classify, CheckConfig, ClassificationReport, Tolerances};
use cpmaps::spectral::{peripheral_analysis, spectrum as spectral_report, PeripheralMode, SpectralReport, SpectralTolerances};
use cpmaps::verify::{self, PropertyRun};
use cpmaps::{DensityMatrix, Error};

use crate::input::{check_dim, emit, read_channel, read_json, read_matrix};
use crate::{Failure, Shared, EXIT_CONSTRUCT, EXIT_EVOLVE, EXIT_PARSE, EXIT_VIOLATIONS};

/// Default threshold for the self-adjointness test of the semigroup.
const SELF_ADJOINT_TOL: f64 = 1e-8;

fn internal(e: Error) -> Failure {
    Failure::new(1, e.to_string())
}

fn single_seed(shared: &Shared, what: &str) -> Result<u64, Failure> {
    match shared.seed.as_slice() {
        [s] => Ok(*s),
        [] => Err(Failure::new(EXIT_PARSE, format!("{what} is randomized; pass --seed"))),
        _ => Err(Failure::new(EXIT_PARSE, format!("{what} takes a single --seed"))),
    }
}

fn check_config(trials: usize, seed: u64, shared: &Shared) -> CheckConfig {
    let cfg = CheckConfig::new(trials, seed);
    match shared.tol {
        Some(t) => cfg.with_tolerances(Tolerances::uniform(t)),
        None => cfg,
    }
}

fn spectral_tolerances(shared: &Shared) -> SpectralTolerances {
    shared.tol.map(SpectralTolerances::uniform).unwrap_or_default()
}

fn validate_tol(shared: &Shared) -> Result<(), Failure> {
    match shared.tol {
        Some(t) if !(t.is_finite() && t > 0.0) => Err(Failure::new(EXIT_PARSE, format!("--tol must be positive, got {t}"))),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct AnalyzeReport<'a> {
    channel: &'a AnyMap,
    classification: ClassificationReport,
    spectral: SpectralReport,
}

pub fn analyze(path: &Path, trials: usize, shared: &Shared) -> Result<u8, Failure> {
    validate_tol(shared)?;
    let seed = single_seed(shared, "analyze")?;
    let map = read_channel(path)?;
    let classification = classify(&map, &check_config(trials.max(1), seed, shared)).map_err(internal)?;
    let spectral = spectral_report(&map, &spectral_tolerances(shared)).map_err(internal)?;
    emit(&AnalyzeReport { channel: &map, classification, spectral }, shared)?;
    Ok(0)
}

#[derive(Serialize)]
struct SpectrumOutput {
    #[serde(flatten)]
    report: SpectralReport,
    peripheral_modes: Vec<PeripheralMode>,
}

pub fn spectrum(path: &Path, shared: &Shared) -> Result<u8, Failure> {
    validate_tol(shared)?;
    let map = read_channel(path)?;
    let tol = spectral_tolerances(shared);
    let report = spectral_report(&map, &tol).map_err(internal)?;
    let peripheral_modes = peripheral_analysis(&map, &tol).map_err(internal)?;
    emit(&SpectrumOutput { report, peripheral_modes }, shared)?;
    Ok(0)
}

#[derive(Subcommand, Debug)]
pub enum Construct {
    /// `A -> tr(A) rho` for a faithful state rho.
    Pinned {
        /// Diagonal of rho.
        #[arg(long, num_args = 1.., conflicts_with = "rho", required_unless_present = "rho")]
        diag: Vec<f64>,
        /// Density matrix file.
        #[arg(long)]
        rho: Option<PathBuf>,
    },
    /// Rank-one Kraus operators `c_ik |e_i><e_k|`.
    Weighted {
        /// `c_ik = c_i` for every column; the profile must have unit norm.
        #[arg(long, num_args = 1.., conflicts_with = "weights", required_unless_present = "weights")]
        profile: Vec<f64>,
        /// JSON rows of `c_ik`.
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Nearest-neighbour updates with invariant state `diag`.
    Local {
        #[arg(long, num_args = 1.., required = true)]
        diag: Vec<f64>,
    },
    /// Pinching by orthogonal projections.
    Projective {
        /// JSON list of projection matrices.
        #[arg(long, conflicts_with = "dim", required_unless_present = "dim")]
        projections: Option<PathBuf>,
        /// Pinching onto the diagonal in this dimension.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Average over a finite group of unitaries.
    Group {
        /// JSON list of unitary matrices.
        #[arg(long, conflicts_with_all = ["weyl", "pauli"], required_unless_present_any = ["weyl", "pauli"])]
        unitaries: Option<PathBuf>,
        /// Clock-and-shift group in this dimension.
        #[arg(long, conflicts_with = "pauli")]
        weyl: Option<usize>,
        /// The Pauli group on a qubit.
        #[arg(long)]
        pauli: bool,
    },
    /// Random trace-preserving channel with `kraus` operators.
    Random {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        kraus: usize,
    },
    /// Channel embedded in an analyze report (or any channel file), re-emitted.
    FromReport { report: PathBuf },
}

fn invalid(e: Error) -> Failure {
    Failure::new(EXIT_CONSTRUCT, e.to_string())
}

fn weyl_group(d: usize) -> Vec<ComplexMatrix> {
    let shift = ComplexMatrix::from_fn(d, |i, j| if i == (j + 1) % d { c64(1.0, 0.0) } else { c64(0.0, 0.0) });
    let clock = ComplexMatrix::diag(
        &(0..d)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / d as f64;
                c64(t.cos(), t.sin())
            })
            .collect::<Vec<_>>(),
    );
    (0..d * d).map(|n| &shift.powi((n / d) as u32) * &clock.powi((n % d) as u32)).collect()
}

fn positive_dim(d: usize) -> Result<usize, Failure> {
    if d == 0 {
        return Err(Failure::new(EXIT_CONSTRUCT, "dimension must be at least 1"));
    }
    check_dim(d)?;
    Ok(d)
}

pub fn construct(kind: Construct, shared: &Shared) -> Result<u8, Failure> {
    let channel: AnyMap = match kind {
        Construct::Pinned { diag, rho } => {
            let rho = match rho {
                Some(p) => read_json::<DensityMatrix>(&p, "density matrix")?,
                None => {
                    check_dim(diag.len())?;
                    DensityMatrix::from_diag(&diag).map_err(invalid)?
                }
            };
            check_dim(rho.dim())?;
            AnyMap::Kraus(pinned_channel(&rho).map_err(invalid)?)
        }
        Construct::Weighted { profile, weights } => {
            let w = match weights {
                Some(p) => {
                    let rows: Vec<Vec<f64>> = read_json(&p, "weight rows")?;
                    check_dim(rows.len())?;
                    WeightMatrix::new(rows).map_err(invalid)?
                }
                None => {
                    check_dim(profile.len())?;
                    WeightMatrix::from_profile(&profile).map_err(invalid)?
                }
            };
            AnyMap::Kraus(weighted_basis_channel(&w).map_err(invalid)?)
        }
        Construct::Local { diag } => {
            check_dim(diag.len())?;
            let rho = DensityMatrix::from_diag(&diag).map_err(invalid)?;
            AnyMap::Kraus(local_update_channel(&rho).map_err(invalid)?)
        }
        Construct::Projective { projections, dim } => {
            let ps: Vec<ComplexMatrix> = match (projections, dim) {
                (Some(p), _) => read_json(&p, "projection list")?,
                (None, Some(d)) => (0..positive_dim(d)?).map(|k| ComplexMatrix::unit(d, k, k)).collect(),
                (None, None) => unreachable!("clap requires one of the two"),
            };
            if let Some(p) = ps.first() {
                check_dim(p.dim())?;
            }
            AnyMap::Kraus(projective_channel(&ps).map_err(invalid)?)
        }
        Construct::Group { unitaries, weyl, pauli } => {
            let us: Vec<ComplexMatrix> = match (unitaries, weyl, pauli) {
                (Some(p), _, _) => read_json(&p, "unitary list")?,
                (None, Some(d), _) => weyl_group(positive_dim(d)?),
                _ => pauli_matrices().to_vec(),
            };
            if let Some(u) = us.first() {
                check_dim(u.dim())?;
            }
            AnyMap::Kraus(group_average_channel(&us).map_err(invalid)?)
        }
        Construct::Random { dim, kraus } => {
            let seed = single_seed(shared, "construct random")?;
            positive_dim(dim)?;
            AnyMap::Kraus(random_channel(dim, kraus, seed).map_err(invalid)?)
        }
        Construct::FromReport { report } => read_channel(&report)?,
    };
    emit(&channel, shared)?;
    Ok(0)
}

#[derive(Subcommand, Debug)]
pub enum Evolve {
    /// `A_k = phi^k(A_0)`, distances to `tr(A_0)` times the invariant state.
    Discrete {
        channel: PathBuf,
        /// Initial matrix file (matrix object or `{"diag": [...]}`).
        #[arg(long)]
        initial: PathBuf,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Schatten order for the distance; `inf` for the operator norm.
        #[arg(long, default_value = "1")]
        norm: String,
    },
    /// `exp(t(phi - ||phi||_2))(B)` for a self-adjoint ergodic CP map.
    Semigroup {
        channel: PathBuf,
        #[arg(long)]
        initial: PathBuf,
        /// Explicit times; overrides `--t-max`/`--points`.
        #[arg(long, num_args = 1..)]
        times: Vec<f64>,
        /// Grid end; defaults to 25 / gap.
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
}

#[derive(Serialize)]
struct Row {
    t: f64,
    distance: f64,
    bound: Option<f64>,
}

#[derive(Serialize)]
struct EvolveOutput {
    mode: &'static str,
    norm: NormOrder,
    rows: Vec<Row>,
    limit: ComplexMatrix,
    final_state: ComplexMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    rate: Option<RateCheck>,
}

fn parse_norm(s: &str) -> Result<NormOrder, Failure> {
    let p = match s {
        "inf" | "infinity" => f64::INFINITY,
        _ => s.parse::<f64>().map_err(|_| Failure::new(EXIT_PARSE, format!("--norm: cannot parse '{s}'")))?,
    };
    NormOrder::new(p).map_err(|e| Failure::new(EXIT_PARSE, format!("--norm: {e}")))
}

fn precondition(e: Error) -> Failure {
    Failure::new(EXIT_EVOLVE, e.to_string())
}

pub fn evolve(mode: Evolve, shared: &Shared) -> Result<u8, Failure> {
    validate_tol(shared)?;
    let out = match mode {
        Evolve::Discrete { channel, initial, steps, norm } => {
            let norm = parse_norm(&norm)?;
            let map = read_channel(&channel)?;
            let a0 = read_matrix(&initial)?;
            let traj = iterate(&map, &a0, steps, norm, &spectral_tolerances(shared)).map_err(precondition)?;
            EvolveOutput {
                mode: "discrete",
                norm,
                rows: traj.times.iter().zip(&traj.distances).map(|(&t, &distance)| Row { t, distance, bound: None }).collect(),
                limit: traj.limit,
                final_state: traj.states.last().cloned().expect("step 0 is always present"),
                rate: None,
            }
        }
        Evolve::Semigroup { channel, initial, times, t_max, points } => {
            let map = read_channel(&channel)?;
            let b = read_matrix(&initial)?;
            let tol = shared.tol.unwrap_or(SELF_ADJOINT_TOL);
            let spec = self_adjoint_spectrum(&map, tol).map_err(precondition)?;
            let grid = if times.is_empty() {
                let end = t_max.unwrap_or(25.0 / spec.gap());
                if !(end.is_finite() && end >= 0.0) {
                    return Err(Failure::new(EXIT_EVOLVE, format!("time grid end {end} is not finite")));
                }
                uniform_grid(end, points)
            } else {
                times
            };
            let traj = semigroup_evolve(&map, &b, &grid, tol).map_err(precondition)?;
            let rate = rate_check(&traj, spec.gap(), 1e-9);
            let bounds = traj.bounds.clone().unwrap_or_default();
            EvolveOutput {
                mode: "semigroup",
                norm: traj.norm,
                rows: traj
                    .times
                    .iter()
                    .zip(&traj.distances)
                    .zip(&bounds)
                    .map(|((&t, &distance), &b)| Row { t, distance, bound: Some(b) })
                    .collect(),
                limit: traj.limit,
                final_state: traj.states.last().cloned().unwrap_or_else(|| b.clone()),
                rate: Some(rate),
            }
        }
    };
    emit(&out, shared)?;
    Ok(0)
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Properties to run; all asserted properties when omitted.
    #[arg(long, num_args = 1..)]
    property: Vec<String>,
    /// Falsification probes to run alongside; never affect the exit code.
    #[arg(long, num_args = 1..)]
    probe: Vec<String>,
    #[arg(long, default_value_t = verify::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, num_args = 1.., default_values_t = verify::DEFAULT_DIMS)]
    dims: Vec<usize>,
    /// Where full witnesses go when there are violations.
    #[arg(long, default_value = "cpmaps-witnesses.json")]
    witness_file: PathBuf,
}

#[derive(Serialize)]
struct RunSummary {
    name: String,
    asserted: bool,
    seed: u64,
    trials: usize,
    dims: Vec<usize>,
    tolerance: f64,
    violation_count: usize,
    worst_margin: f64,
    worst_digest: Option<String>,
    violations: Vec<serde_json::Value>,
}

impl From<&PropertyRun> for RunSummary {
    fn from(r: &PropertyRun) -> Self {
        RunSummary {
            name: r.name.clone(),
            asserted: r.asserted,
            seed: r.seed,
            trials: r.trials,
            dims: r.dims.clone(),
            tolerance: r.tolerance,
            violation_count: r.violations.len(),
            worst_margin: r.worst_margin,
            worst_digest: r.worst_digest.clone(),
            violations: r.violations.iter().map(|v| json!({ "digest": v.digest, "residual": v.residual })).collect(),
        }
    }
}

pub fn verify(args: VerifyArgs, shared: &Shared) -> Result<u8, Failure> {
    validate_tol(shared)?;
    if shared.seed.is_empty() {
        return Err(Failure::new(EXIT_PARSE, "verify is randomized; pass --seed (one or more)"));
    }
    let names: Vec<String> = if args.property.is_empty() {
        verify::PROPERTIES.iter().map(|s| s.to_string()).collect()
    } else {
        args.property.clone()
    };
    let arg_error = |e: Error| match e {
        Error::UnknownProperty(_) | Error::InvalidArgument(_) => Failure::new(EXIT_PARSE, e.to_string()),
        e => internal(e),
    };
    let mut runs = Vec::new();
    let mut probes = Vec::new();
    for &seed in &shared.seed {
        for name in &names {
            let run = match shared.tol {
                Some(t) => verify::run_property_with_tolerance(name, args.trials, seed, &args.dims, t),
                None => verify::run_property(name, args.trials, seed, &args.dims),
            };
            runs.push(run.map_err(arg_error)?);
        }
        for name in &args.probe {
            probes.push(verify::falsification_probe(name, args.trials, seed, &args.dims).map_err(arg_error)?);
        }
    }
    let total: usize = runs.iter().map(|r| r.violations.len()).sum();
    let witness_file = if total > 0 {
        let witnesses: Vec<_> = runs
            .iter()
            .flat_map(|r| r.violations.iter().map(move |v| json!({ "property": r.name, "seed": r.seed, "violation": v })))
            .collect();
        let text = serde_json::to_string(&witnesses).map_err(|e| Failure::new(1, e.to_string()))?;
        std::fs::write(&args.witness_file, text)
            .map_err(|e| Failure::new(1, format!("{}: {e}", args.witness_file.display())))?;
        Some(args.witness_file.display().to_string())
    } else {
        None
    };
    let report = json!({
        "runs": runs.iter().map(RunSummary::from).collect::<Vec<_>>(),
        "probes": probes.iter().map(RunSummary::from).collect::<Vec<_>>(),
        "total_violations": total,
        "witness_file": witness_file,
    });
    emit(&report, shared)?;
    Ok(if total > 0 { EXIT_VIOLATIONS } else { 0 })
}
