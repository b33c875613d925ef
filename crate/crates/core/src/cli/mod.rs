//! Batch front end: `count`, `basis`, `analyze`, `hom` and `density`.
//!
//! Every command reads an optional JSON scenario (`--config`), writes its
//! report to stdout or `--output`, and exits with a stable code:
//! 0 success, 2 config/schema error, 3 resource cap, 4 domain error,
//! 5 I/O error.

pub mod config;
pub mod format;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::emergence::{detect_emergent_particles, slater_rank_two_fermions, EmergenceReport};
use crate::exchange::{sector_basis, ExchangeSector};
use crate::fock::{
    fock_to_labeled, occupation_to_labeled, parse_symbol, FockVector, OccupationState,
};
use crate::hilbert::{digits, LabeledState, OneParticleBasis};
use crate::interferometry::{
    build_initial_state, evolve_through_splitter, joint_spatial_density, measure_ports_and_spins,
    BeamSplitterScenario, ExperimentResult, GaussianPacket, GridSpec,
};
use crate::statistics::{
    count_microstates, entropy, enumerate_distributions_capped, enumerate_symbols_capped,
    planck_count, CountingProblem, StatisticsKind, DEFAULT_ENUMERATION_CAP,
};
use crate::{Error, Matrix};
use config::*;
use format::{round12, sig12};

#[derive(Debug, Parser)]
#[command(
    name = "qparticles",
    version,
    about = "Identical-particle formalisms and analyses"
)]
pub struct Cli {
    /// JSON scenario file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report (or the density grid) here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Microstate counts, entropies and enumerations.
    Count,
    /// Orthonormal basis of a symmetric or antisymmetric sector.
    Basis,
    /// Emergent-particle analysis of a sector state.
    Analyze,
    /// Two-electron beam-splitter experiment.
    Hom {
        /// Also report the pre-splitter state.
        #[arg(long)]
        baseline: bool,
    },
    /// Joint two-packet spatial density grid.
    Density,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Compute(#[from] Error),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Io(_) => 5,
            Self::Compute(e) => match e {
                Error::CapExceeded { .. } => 3,
                Error::NotInSector(_)
                | Error::PauliViolation(_)
                | Error::IdenticalPackets
                | Error::UnderResolved(_)
                | Error::NoCoincidence(_)
                | Error::EmptyMode(_)
                | Error::NotOrthogonal(_)
                | Error::NotDensityMatrix(_) => 4,
                _ => 2,
            },
        }
    }
}

/// Errors raised while turning a config into library inputs.
fn config_err(e: Error) -> CliError {
    match e {
        Error::CapExceeded { .. } => CliError::Compute(e),
        other => CliError::Config(other.to_string()),
    }
}

/// Result of one invocation: text for stdout plus a note for stderr.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub notes: Vec<String>,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let text = match &cli.config {
        Some(path) => Some(
            std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        ),
        None => None,
    };
    let mut outcome = Outcome::default();
    let report = match &cli.command {
        Command::Count => {
            let cfg: CountConfig = parse(text.as_deref())?;
            cmd_count(&cfg, cli.format.unwrap_or(Format::Csv))?
        }
        Command::Basis => {
            let cfg: BasisConfig = parse_required(require(text.as_deref())?)?;
            cmd_basis(&cfg, cli.format.unwrap_or(Format::Csv), &mut outcome.notes)?
        }
        Command::Analyze => {
            let cfg: AnalyzeConfig = parse_required(require(text.as_deref())?)?;
            cmd_analyze(&cfg, cli.format.unwrap_or(Format::Json))?
        }
        Command::Hom { baseline } => {
            let mut cfg: HomConfig = parse(text.as_deref())?;
            cfg.baseline |= *baseline;
            cmd_hom(&cfg, cli.format.unwrap_or(Format::Csv))?
        }
        Command::Density => {
            let cfg: DensityConfig = parse(text.as_deref())?;
            let path = cli
                .output
                .clone()
                .or_else(|| cfg.output.as_ref().map(PathBuf::from))
                .ok_or_else(|| CliError::Config("density needs --output or \"output\"".into()))?;
            outcome.stdout = cmd_density(&cfg, &path, cli.format.unwrap_or(Format::Csv))?;
            return Ok(outcome);
        }
    };
    match &cli.output {
        Some(path) => write_file(path, report.as_bytes())?,
        None => outcome.stdout = report,
    }
    Ok(outcome)
}

fn parse<T: serde::de::DeserializeOwned + Default>(text: Option<&str>) -> Result<T, CliError> {
    text.map_or_else(|| Ok(T::default()), parse_required)
}

fn parse_required<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

fn require(text: Option<&str>) -> Result<&str, CliError> {
    text.ok_or_else(|| CliError::Config("this command needs --config".into()))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON value serializes");
    s.push('\n');
    s
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(round12(x))
    } else {
        Value::Null
    }
}

fn pair(c: Complex64) -> Value {
    json!([round12(c.re), round12(c.im)])
}

// count

pub fn cmd_count(cfg: &CountConfig, format: Format) -> Result<String, CliError> {
    let k = cfg.k.unwrap_or(1.0);
    let cap = cfg.cap.unwrap_or(DEFAULT_ENUMERATION_CAP);
    let planck = cfg.resonators.is_some() || cfg.quanta.is_some();
    let labeled = cfg.n.is_some() || cfg.d.is_some() || cfg.kinds.is_some();
    if planck && labeled {
        return Err(CliError::Config(
            "use either N/P or n/d/kinds, not both".into(),
        ));
    }
    if !k.is_finite() {
        return Err(CliError::Config("k must be finite".into()));
    }
    if planck {
        let (Some(n_res), Some(p)) = (cfg.resonators, cfg.quanta) else {
            return Err(CliError::Config("N and P must both be given".into()));
        };
        let problem = CountingProblem::new(n_res, p)
            .map_err(config_err)?
            .with_quantum_size(cfg.epsilon.unwrap_or(1.0));
        let w = planck_count(&problem);
        let s = entropy(&w, k)?;
        let symbols = if cfg.enumerate {
            enumerate_symbols_capped(&problem, cap)?
        } else {
            Vec::new()
        };
        return Ok(match format {
            Format::Csv => {
                let mut out = String::from("N,P,epsilon,W,S\n");
                writeln!(
                    out,
                    "{n_res},{p},{},{w},{}",
                    sig12(problem.quantum_size),
                    sig12(s)
                )
                .unwrap();
                if cfg.enumerate {
                    out.push_str("\nindex,symbol,energies\n");
                    for (i, sym) in symbols.iter().enumerate() {
                        let e: Vec<String> = sym.energies().iter().map(u64::to_string).collect();
                        writeln!(out, "{i},{sym},{}", e.join(" ")).unwrap();
                    }
                }
                out
            }
            Format::Json => {
                let mut v = json!({
                    "N": n_res, "P": p, "epsilon": num(problem.quantum_size),
                    "W": w.to_string(), "S": num(s),
                });
                if cfg.enumerate {
                    v["symbols"] = symbols
                        .iter()
                        .map(|s| json!({"symbol": s.to_string(), "energies": s.energies()}))
                        .collect();
                }
                pretty(&v)
            }
        });
    }
    let (Some(n), Some(d)) = (cfg.n, cfg.d) else {
        return Err(CliError::Config("give N and P, or n and d".into()));
    };
    if d == 0 {
        return Err(CliError::Config("d must be at least 1".into()));
    }
    let kinds = cfg
        .kinds
        .clone()
        .unwrap_or_else(|| StatisticsKind::ALL.to_vec());
    let mut rows = Vec::new();
    for &kind in &kinds {
        let w = count_microstates(kind, n, d).map_err(config_err)?;
        let s = entropy(&w, k).ok();
        let configs = if cfg.enumerate {
            enumerate_distributions_capped(kind, n, d, cap)?
        } else {
            Vec::new()
        };
        rows.push((kind, w, s, configs));
    }
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("kind,n,d,W,S\n");
            for (kind, w, s, _) in &rows {
                let s = s.map_or_else(|| "undefined".to_string(), sig12);
                writeln!(out, "{kind},{n},{d},{w},{s}").unwrap();
            }
            if cfg.enumerate {
                out.push_str("\nkind,index,configuration\n");
                for (kind, _, _, configs) in &rows {
                    for (i, c) in configs.iter().enumerate() {
                        writeln!(out, "{kind},{i},{c}").unwrap();
                    }
                }
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(kind, w, s, configs)| {
                    let mut v = json!({
                        "kind": kind.name(), "n": n, "d": d,
                        "W": w.to_string(), "S": s.map_or(Value::Null, num),
                    });
                    if cfg.enumerate {
                        v["configurations"] =
                            configs.iter().map(|c| json!(c.to_string())).collect();
                    }
                    v
                })
                .collect();
            pretty(&json!({ "counts": rows }))
        }
    })
}

// basis

fn make_basis(
    d: Option<usize>,
    labels: &Option<Vec<String>>,
) -> Result<OneParticleBasis, CliError> {
    match (d, labels) {
        (Some(d), Some(l)) if l.len() != d => Err(CliError::Config(format!(
            "d = {d} but {} labels given",
            l.len()
        ))),
        (_, Some(l)) => OneParticleBasis::new(l.iter().cloned()).map_err(config_err),
        (Some(d), None) if d > 0 => OneParticleBasis::indexed(d).map_err(config_err),
        _ => Err(CliError::Config("need d >= 1 or labels".into())),
    }
}

/// Mode labels of one nonzero amplitude, with the amplitude.
type Term = (Vec<String>, Complex64);

fn term_string(state: &LabeledState) -> Vec<Term> {
    let (d, n) = (state.dim(), state.n_slots());
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 1e-14)
        .map(|(i, a)| {
            let modes = digits(i, d, n)
                .into_iter()
                .map(|m| state.basis().labels()[m].clone())
                .collect();
            (modes, *a)
        })
        .collect()
}

fn complex_text(c: Complex64) -> String {
    if c.im == 0.0 {
        sig12(c.re)
    } else {
        format!("({},{})", sig12(c.re), sig12(c.im))
    }
}

pub fn cmd_basis(
    cfg: &BasisConfig,
    format: Format,
    notes: &mut Vec<String>,
) -> Result<String, CliError> {
    let basis = make_basis(cfg.d, &cfg.labels)?;
    if cfg.n == 0 {
        return Err(CliError::Config("n must be at least 1".into()));
    }
    let states = sector_basis(&basis, cfg.n, cfg.sector)?;
    if states.is_empty() {
        notes.push(format!(
            "note: the {} sector of {} particles over {} modes is empty",
            cfg.sector,
            cfg.n,
            basis.dim()
        ));
    }
    let rows: Vec<(Vec<u32>, Vec<Term>)> = states
        .iter()
        .map(|st| {
            let fock =
                crate::fock::labeled_to_fock(st, cfg.sector).expect("basis vector in sector");
            let (occ, _) = fock.terms().next().expect("single term");
            (occ.occupations().to_vec(), term_string(st))
        })
        .collect();
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("index,occupation,symbol,terms\n");
            for (i, (occ, terms)) in rows.iter().enumerate() {
                let occ_state = OccupationState::new(occ.clone(), cfg.sector)?;
                let occ_text: Vec<String> = occ.iter().map(u32::to_string).collect();
                let terms: Vec<String> = terms
                    .iter()
                    .map(|(m, a)| format!("{}|{}>", complex_text(*a), m.join(";")))
                    .collect();
                writeln!(
                    out,
                    "{i},{},{occ_state},{}",
                    occ_text.join(" "),
                    terms.join(" ")
                )
                .unwrap();
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(occ, terms)| {
                    let symbol = OccupationState::new(occ.clone(), cfg.sector)
                        .map(|o| o.to_string())
                        .unwrap_or_default();
                    json!({
                        "occupation": occ,
                        "symbol": symbol,
                        "terms": terms.iter().map(|(m, a)| json!({"modes": m, "amplitude": pair(*a)})).collect::<Vec<_>>(),
                    })
                })
                .collect();
            pretty(&json!({
                "sector": cfg.sector.to_string(),
                "d": basis.dim(),
                "n": cfg.n,
                "labels": basis.labels(),
                "states": rows,
            }))
        }
    })
}

// analyze

fn build_state(spec: &StateSpec, sector: ExchangeSector) -> Result<LabeledState, CliError> {
    let given = [
        spec.symbol.is_some(),
        spec.fock.is_some(),
        spec.amplitudes.is_some(),
    ];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(CliError::Config(
            "state needs exactly one of symbol, fock, amplitudes".into(),
        ));
    }
    let basis = make_basis(spec.d, &spec.labels)?;
    let d = basis.dim();
    if let Some(symbol) = &spec.symbol {
        if spec.n_slots.is_some() {
            return Err(CliError::Config("n_slots is implied by the symbol".into()));
        }
        let occ = parse_symbol(symbol, d, sector).map_err(config_err)?;
        if occ.total() == 0 {
            return Err(CliError::Config(
                "vacuum symbol has no particles to analyze".into(),
            ));
        }
        return occupation_to_labeled(&occ, &basis).map_err(config_err);
    }
    if let Some(terms) = &spec.fock {
        if spec.n_slots.is_some() {
            return Err(CliError::Config("n_slots is implied by the symbols".into()));
        }
        let terms = terms
            .iter()
            .map(|t| {
                let occ = parse_symbol(&t.symbol, d, sector)?;
                Ok((occ, Complex64::new(t.amplitude[0], t.amplitude[1])))
            })
            .collect::<crate::Result<Vec<_>>>()
            .map_err(config_err)?;
        let fock = FockVector::from_terms(terms).map_err(config_err)?;
        return fock_to_labeled(&fock, &basis).map_err(config_err);
    }
    let amps = spec.amplitudes.as_ref().expect("checked above");
    let n_slots = spec
        .n_slots
        .ok_or_else(|| CliError::Config("amplitude states need n_slots".into()))?;
    let amps = amps.iter().map(|p| Complex64::new(p[0], p[1])).collect();
    LabeledState::normalized(n_slots, basis, amps).map_err(config_err)
}

pub fn report_json(
    report: &EmergenceReport,
    sector: ExchangeSector,
    slater_rank: Option<usize>,
) -> Value {
    let defining: Vec<Value> = report
        .defining_states
        .iter()
        .map(|ds| {
            let interleaved: Vec<f64> = ds
                .state
                .iter()
                .flat_map(|c| [round12(c.re), round12(c.im)])
                .collect();
            json!({"occupation": ds.occupation, "state": interleaved})
        })
        .collect();
    let mut v = json!({
        "verdict": report.verdict.as_str(),
        "sector": sector.to_string(),
        "defining_states": defining,
        "fidelity": num(report.fidelity),
        "natural_spectrum": report.natural_spectrum.iter().map(|&x| num(x)).collect::<Vec<_>>(),
    });
    if let Some(rank) = slater_rank {
        v["slater_rank"] = json!(rank);
    }
    v
}

pub fn cmd_analyze(cfg: &AnalyzeConfig, format: Format) -> Result<String, CliError> {
    let state = build_state(&cfg.state, cfg.sector)?;
    let report = detect_emergent_particles(&state, cfg.sector)?;
    let rank = (state.n_slots() == 2 && cfg.sector == ExchangeSector::Antisymmetric)
        .then(|| slater_rank_two_fermions(&state))
        .transpose()?;
    Ok(match format {
        Format::Json => pretty(&report_json(&report, cfg.sector, rank)),
        Format::Csv => {
            let mut out = String::from("quantity,value\n");
            writeln!(out, "verdict,{}", report.verdict).unwrap();
            writeln!(out, "sector,{}", cfg.sector).unwrap();
            writeln!(out, "fidelity,{}", sig12(report.fidelity)).unwrap();
            if let Some(r) = rank {
                writeln!(out, "slater_rank,{r}").unwrap();
            }
            for (i, w) in report.natural_spectrum.iter().enumerate() {
                writeln!(out, "natural_spectrum_{i},{}", sig12(*w)).unwrap();
            }
            for (i, ds) in report.defining_states.iter().enumerate() {
                writeln!(out, "defining_state_{i}_occupation,{}", ds.occupation).unwrap();
                let parts: Vec<String> = ds
                    .state
                    .iter()
                    .flat_map(|c| [sig12(c.re), sig12(c.im)])
                    .collect();
                writeln!(out, "defining_state_{i},{}", parts.join(" ")).unwrap();
            }
            out
        }
    })
}

// hom

fn hom_rows(stage: &str, r: &ExperimentResult, out: &mut Vec<(String, String, f64)>) {
    for (o, p) in &r.joint_probabilities {
        out.push((stage.into(), format!("p({})", r.outcome_name(o)), *p));
    }
    out.push((stage.into(), "p_both_left".into(), r.p_both_left));
    out.push((stage.into(), "p_both_right".into(), r.p_both_right));
    out.push((stage.into(), "p_coincidence".into(), r.p_coincidence));
    for (k, c) in r.conditional_coincidence_spin_state.iter().enumerate() {
        let name = format!("{}{}", r.spins[k / 2], r.spins[k % 2]);
        out.push((stage.into(), format!("cond_{name}_re"), c.re));
        out.push((stage.into(), format!("cond_{name}_im"), c.im));
    }
    for (name, v) in &r.correlators {
        out.push((stage.into(), format!("corr_{name}"), *v));
    }
}

pub fn cmd_hom(cfg: &HomConfig, format: Format) -> Result<String, CliError> {
    let scenario = match &cfg.splitter {
        Some(rows) => {
            let m = Matrix::from_fn(2, 2, |r, c| Complex64::new(rows[r][c][0], rows[r][c][1]));
            BeamSplitterScenario::with_splitter(m).map_err(|e| CliError::Config(e.to_string()))?
        }
        None => BeamSplitterScenario::default(),
    };
    let initial = build_initial_state(&scenario);
    let mut rows = Vec::new();
    if cfg.baseline {
        hom_rows(
            "initial",
            &measure_ports_and_spins(&initial, &scenario)?,
            &mut rows,
        );
    }
    let evolved = evolve_through_splitter(&initial, &scenario)?;
    hom_rows(
        "final",
        &measure_ports_and_spins(&evolved, &scenario)?,
        &mut rows,
    );
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("stage,quantity,value\n");
            for (stage, q, v) in rows {
                writeln!(out, "{stage},{q},{}", sig12(v)).unwrap();
            }
            out
        }
        Format::Json => {
            let mut stages = serde_json::Map::new();
            for (stage, q, v) in rows {
                stages
                    .entry(stage)
                    .or_insert_with(|| json!({}))
                    .as_object_mut()
                    .unwrap()
                    .insert(q, num(v));
            }
            pretty(&Value::Object(stages))
        }
    })
}

// density

fn packet(spec: &PacketSpec) -> Result<GaussianPacket, CliError> {
    GaussianPacket::with_phase_velocity(spec.center, spec.width, spec.phase_velocity)
        .map_err(config_err)
}

pub fn cmd_density(cfg: &DensityConfig, path: &Path, format: Format) -> Result<String, CliError> {
    let (s, n) = match (cfg.packet_s, cfg.packet_n, cfg.separation) {
        (Some(a), Some(b), None) => {
            if cfg.width.is_some() {
                return Err(CliError::Config(
                    "width only applies with separation".into(),
                ));
            }
            (packet(&a)?, packet(&b)?)
        }
        (None, None, sep) => {
            let width = cfg.width.unwrap_or(1.0);
            let half = sep.unwrap_or(10.0) * width / 2.0;
            (
                GaussianPacket::new(-half, width).map_err(config_err)?,
                GaussianPacket::new(half, width).map_err(config_err)?,
            )
        }
        _ => {
            return Err(CliError::Config(
                "give packet_s and packet_n together, or separation".into(),
            ))
        }
    };
    let grid = match (cfg.grid, cfg.n_points) {
        (Some(_), Some(_)) => {
            return Err(CliError::Config("n_points conflicts with grid".into()));
        }
        (Some(g), None) => GridSpec {
            x_min: g.x_min,
            x_max: g.x_max,
            n_points: g.n_points,
        },
        (None, n_points) => GridSpec::covering(&s, &n, n_points.unwrap_or(128)),
    };
    let density = joint_spatial_density(&s, &n, &grid).map_err(|e| match e {
        Error::InvalidArgument(m) => CliError::Config(m),
        other => CliError::Compute(other),
    })?;
    let mut buf = Vec::new();
    density
        .write_csv(&mut buf)
        .map_err(|e| CliError::Io(e.to_string()))?;
    write_file(path, &buf)?;
    let summary = [
        ("cross_term_max", density.cross_term_max),
        ("integral", density.integral()),
        ("overlap_re", density.overlap.re),
        ("overlap_im", density.overlap.im),
        ("x_min", grid.x_min),
        ("x_max", grid.x_max),
        ("n_points", grid.n_points as f64),
    ];
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("quantity,value\n");
            for (k, v) in summary {
                writeln!(out, "{k},{}", sig12(v)).unwrap();
            }
            out
        }
        Format::Json => {
            let map: serde_json::Map<String, Value> = summary
                .iter()
                .map(|(k, v)| (k.to_string(), num(*v)))
                .collect();
            pretty(&Value::Object(map))
        }
    })
}
