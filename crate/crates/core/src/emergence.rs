//! Particles as one-particle states rather than as factor-space labels.
//!
//! [`detect_emergent_particles`] reads occupations off the natural orbitals
//! of the one-particle reduced density matrix, rebuilds the (anti)symmetrized
//! product they imply and compares it with the input. A perfect match with
//! single occupations yields individual particles; a match with some
//! occupation of two or more yields one condensed object; anything else has
//! no particle decomposition.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::exchange::{is_in_sector, symmetrized_product, ExchangeSector};
use crate::hilbert::{apply_one_body_sum, check_unitary, dot, reduce_one_particle, LabeledState};
use crate::linalg::{fix_phase, hermitian_eigen};
use crate::{tol, Error, Matrix, Result};

/// Components below this modulus do not count when fixing phases or
/// breaking eigenvalue ties.
const LEAD_THRESHOLD: f64 = 1e-10;
/// Eigenvalues closer than this are treated as degenerate.
const DEGENERACY: f64 = 1e-10;
/// Gram eigenvalues below this span the commuting one-body operators.
const NULL_GRAM: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// Orthogonal one-particle states, each singly occupied.
    ParticleDecomposition,
    /// A product state with some mode occupied two or more times.
    CondensedObject,
    /// Not a single (anti)symmetrized product.
    NoParticleDecomposition,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ParticleDecomposition => "PARTICLE_DECOMPOSITION",
            Self::CondensedObject => "CONDENSED_OBJECT",
            Self::NoParticleDecomposition => "NO_PARTICLE_DECOMPOSITION",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefiningState {
    pub state: Vec<Complex64>,
    pub occupation: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmergenceReport {
    pub verdict: Verdict,
    /// Empty for [`Verdict::NoParticleDecomposition`].
    pub defining_states: Vec<DefiningState>,
    /// `|⟨ψ|candidate⟩|²` for the best product candidate.
    pub fidelity: f64,
    /// All 1-RDM eigenvalues, descending.
    pub natural_spectrum: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NaturalOrbital {
    pub weight: f64,
    pub vector: Vec<Complex64>,
}

/// Eigenpairs of a one-particle density matrix, descending by weight.
///
/// Each eigenvector has its first significant component real and positive;
/// degenerate eigenvalues are ordered by the index of that component.
pub fn natural_orbitals(rdm: &Matrix) -> Result<Vec<NaturalOrbital>> {
    let d = rdm.nrows();
    if d == 0 || rdm.ncols() != d {
        return Err(Error::NotDensityMatrix(format!(
            "{}×{} is not a square matrix",
            rdm.nrows(),
            rdm.ncols()
        )));
    }
    let herm_defect = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| (rdm[(i, j)] - rdm[(j, i)].conj()).norm())
        .fold(0.0, f64::max);
    if herm_defect > tol::PSD {
        return Err(Error::NotDensityMatrix(format!(
            "not Hermitian (defect {herm_defect:e})"
        )));
    }
    let trace: f64 = (0..d).map(|i| rdm[(i, i)].re).sum();
    if (trace - 1.0).abs() > 10.0 * tol::NORM {
        return Err(Error::NotDensityMatrix(format!("trace {trace}")));
    }
    let (values, vectors) = hermitian_eigen(rdm);
    if let Some(v) = values.iter().find(|&&v| v < -tol::PSD) {
        return Err(Error::NotDensityMatrix(format!(
            "negative eigenvalue {v:e}"
        )));
    }
    let mut orbitals: Vec<(f64, usize, Vec<Complex64>)> = values
        .iter()
        .enumerate()
        .map(|(k, &w)| {
            let mut v: Vec<Complex64> = vectors.column(k).iter().copied().collect();
            let lead = fix_phase(&mut v, LEAD_THRESHOLD).unwrap_or(0);
            (w, lead, v)
        })
        .collect();
    orbitals.sort_by(|a, b| b.0.total_cmp(&a.0));
    sort_ties_by_lead(&mut orbitals);
    Ok(orbitals
        .into_iter()
        .map(|(weight, _, vector)| NaturalOrbital { weight, vector })
        .collect())
}

fn sort_ties_by_lead(orbitals: &mut [(f64, usize, Vec<Complex64>)]) {
    let mut start = 0;
    while start < orbitals.len() {
        let mut end = start + 1;
        while end < orbitals.len() && orbitals[end - 1].0 - orbitals[end].0 <= DEGENERACY {
            end += 1;
        }
        orbitals[start..end].sort_by_key(|o| o.1);
        start = end;
    }
}

/// Integer occupations `round(N·λ)`, if every one is within the guard.
fn read_occupations(spectrum: &[f64], n: usize) -> Option<Vec<usize>> {
    spectrum
        .iter()
        .map(|&w| {
            let x = n as f64 * w;
            let k = x.round();
            ((x - k).abs() <= tol::OCCUPATION).then_some(k.max(0.0) as usize)
        })
        .collect()
}

/// Largest-remainder occupations summing to `n`, for the best-effort
/// candidate when the integer guard fails.
fn forced_occupations(spectrum: &[f64], n: usize, sector: ExchangeSector) -> Vec<usize> {
    match sector {
        ExchangeSector::Antisymmetric => (0..spectrum.len()).map(|i| usize::from(i < n)).collect(),
        ExchangeSector::Symmetric => {
            let scaled: Vec<f64> = spectrum.iter().map(|&w| n as f64 * w.max(0.0)).collect();
            let mut occ: Vec<usize> = scaled.iter().map(|x| x.floor() as usize).collect();
            let mut order: Vec<usize> = (0..spectrum.len()).collect();
            order.sort_by(|&a, &b| {
                (scaled[b] - scaled[b].floor()).total_cmp(&(scaled[a] - scaled[a].floor()))
            });
            let assigned: usize = occ.iter().sum();
            for &i in order.iter().cycle().take(n.saturating_sub(assigned)) {
                occ[i] += 1;
            }
            occ
        }
    }
}

fn candidate(
    state: &LabeledState,
    sector: ExchangeSector,
    orbitals: &[Vec<Complex64>],
    occupations: &[usize],
) -> Option<f64> {
    let factors: Vec<Vec<Complex64>> = orbitals
        .iter()
        .zip(occupations)
        .flat_map(|(v, &k)| std::iter::repeat_n(v.clone(), k))
        .collect();
    if factors.len() != state.n_slots() {
        return None;
    }
    let cand = symmetrized_product(state.basis(), &factors, sector).ok()?;
    Some(dot(state.amplitudes(), cand.amplitudes()).norm_sqr())
}

/// Rotates a degenerate block of orbitals onto the basis in which `state`
/// is an eigenvector of every block-diagonal one-body operator. Returns
/// `None` when only the identity commutes, i.e. no preferred basis exists.
fn refine_block(state: &LabeledState, block: &[Vec<Complex64>]) -> Option<Vec<Vec<Complex64>>> {
    let k = block.len();
    let d = state.dim();
    let outer = |a: usize, b: usize, z: Complex64| {
        Matrix::from_fn(d, d, |i, j| z * block[a][i] * block[b][j].conj())
    };
    // Hermitian generators on the block, with their k×k coordinates
    let mut generators: Vec<(Matrix, Matrix)> = Vec::with_capacity(k * k);
    let unit = |a: usize, b: usize, z: Complex64| {
        let mut m = Matrix::zeros(k, k);
        m[(a, b)] = z;
        m
    };
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    for a in 0..k {
        generators.push((outer(a, a, one), unit(a, a, one)));
        for b in a + 1..k {
            generators.push((
                outer(a, b, one) + outer(b, a, one),
                unit(a, b, one) + unit(b, a, one),
            ));
            generators.push((
                outer(a, b, -i) + outer(b, a, i),
                unit(a, b, -i) + unit(b, a, i),
            ));
        }
    }
    let psi = state.amplitudes();
    let residuals: Vec<Vec<Complex64>> = generators
        .iter()
        .map(|(h, _)| {
            let mut w = apply_one_body_sum(state, h);
            let mean = dot(psi, &w);
            w.iter_mut().zip(psi).for_each(|(x, p)| *x -= mean * p);
            w
        })
        .collect();
    let m = residuals.len();
    let gram = Matrix::from_fn(m, m, |r, c| {
        Complex64::new(dot(&residuals[r], &residuals[c]).re, 0.0)
    });
    let (values, vectors) = hermitian_eigen(&gram);
    let null: Vec<usize> = (0..m).filter(|&j| values[j] <= NULL_GRAM).collect();
    if null.len() < 2 {
        return None;
    }
    // generic element of the commuting family
    let mut h = Matrix::zeros(k, k);
    for (rank, &col) in null.iter().enumerate() {
        let g = ((rank + 1) as f64 * 0.618_033_988_749_894_9).fract() + 0.5;
        for (j, (_, coords)) in generators.iter().enumerate() {
            h += coords * Complex64::new(g * vectors[(j, col)].re, 0.0);
        }
    }
    let (_, rotation) = hermitian_eigen(&h);
    Some(
        (0..k)
            .map(|col| {
                let mut v: Vec<Complex64> = (0..d)
                    .map(|x| (0..k).map(|b| rotation[(b, col)] * block[b][x]).sum())
                    .collect();
                fix_phase(&mut v, LEAD_THRESHOLD);
                v
            })
            .collect(),
    )
}

/// Best product candidate for the given occupations; refines degenerate
/// bosonic blocks when the eigensolver basis does not fit.
fn fit_candidate(
    state: &LabeledState,
    sector: ExchangeSector,
    mut orbitals: Vec<Vec<Complex64>>,
    occupations: &[usize],
) -> (Vec<Vec<Complex64>>, f64) {
    let fidelity = candidate(state, sector, &orbitals, occupations).unwrap_or(0.0);
    if fidelity >= 1.0 - tol::FIDELITY || sector == ExchangeSector::Antisymmetric {
        return (orbitals, fidelity);
    }
    let mut refined = false;
    let mut start = 0;
    while start < orbitals.len() {
        let mut end = start + 1;
        while end < orbitals.len() && occupations[end] == occupations[start] {
            end += 1;
        }
        if occupations[start] > 0 && end - start > 1 {
            if let Some(block) = refine_block(state, &orbitals[start..end]) {
                orbitals.splice(start..end, block);
                refined = true;
            }
        }
        start = end;
    }
    if !refined {
        return (orbitals, fidelity);
    }
    let improved = candidate(state, sector, &orbitals, occupations).unwrap_or(0.0);
    (orbitals, improved.max(fidelity))
}

pub fn detect_emergent_particles(
    state: &LabeledState,
    sector: ExchangeSector,
) -> Result<EmergenceReport> {
    if !is_in_sector(state, sector) {
        return Err(Error::NotInSector(sector));
    }
    let n = state.n_slots();
    let natural = natural_orbitals(&reduce_one_particle(state))?;
    let spectrum: Vec<f64> = natural.iter().map(|o| o.weight.max(0.0)).collect();
    let vectors: Vec<Vec<Complex64>> = natural.into_iter().map(|o| o.vector).collect();

    let occupations = read_occupations(&spectrum, n).filter(|occ| {
        occ.iter().sum::<usize>() == n
            && (sector == ExchangeSector::Symmetric || occ.iter().all(|&k| k <= 1))
    });
    let Some(occupations) = occupations else {
        let forced = forced_occupations(&spectrum, n, sector);
        let fidelity = candidate(state, sector, &vectors, &forced).unwrap_or(0.0);
        return Ok(EmergenceReport {
            verdict: Verdict::NoParticleDecomposition,
            defining_states: Vec::new(),
            fidelity,
            natural_spectrum: spectrum,
        });
    };

    let (orbitals, fidelity) = fit_candidate(state, sector, vectors, &occupations);
    if fidelity < 1.0 - tol::FIDELITY {
        return Ok(EmergenceReport {
            verdict: Verdict::NoParticleDecomposition,
            defining_states: Vec::new(),
            fidelity,
            natural_spectrum: spectrum,
        });
    }
    let verdict = if occupations.iter().any(|&k| k >= 2) {
        Verdict::CondensedObject
    } else {
        Verdict::ParticleDecomposition
    };
    let defining_states = orbitals
        .into_iter()
        .zip(&occupations)
        .filter(|(_, &k)| k > 0)
        .map(|(state, &occupation)| DefiningState { state, occupation })
        .collect();
    Ok(EmergenceReport {
        verdict,
        defining_states,
        fidelity: fidelity.min(1.0),
        natural_spectrum: spectrum,
    })
}

/// Number of antisymmetrized products needed to write a two-fermion state.
pub fn slater_rank_two_fermions(state: &LabeledState) -> Result<usize> {
    if state.n_slots() != 2 {
        return Err(Error::InvalidArgument(format!(
            "Slater rank needs 2 particles, got {}",
            state.n_slots()
        )));
    }
    if !is_in_sector(state, ExchangeSector::Antisymmetric) {
        return Err(Error::NotInSector(ExchangeSector::Antisymmetric));
    }
    let d = state.dim();
    let w = Matrix::from_row_slice(d, d, state.amplitudes());
    let nonzero = w
        .singular_values()
        .iter()
        .filter(|&&s| s > tol::SLATER_RANK)
        .count();
    Ok(nonzero.div_ceil(2))
}

/// Transports pairwise orthogonal one-particle states through `u`.
pub fn genidentity_track(initial: &[Vec<Complex64>], u: &Matrix) -> Result<Vec<Vec<Complex64>>> {
    let d = u.nrows();
    if u.ncols() != d {
        return Err(Error::DimensionMismatch("evolution must be square".into()));
    }
    if let Some(bad) = initial.iter().find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch(format!(
            "state of length {} for {d}×{d} evolution",
            bad.len()
        )));
    }
    for (i, a) in initial.iter().enumerate() {
        for b in &initial[i + 1..] {
            let overlap = dot(a, b).norm();
            if overlap > tol::ORTH {
                return Err(Error::NotOrthogonal(overlap));
            }
        }
    }
    check_unitary(u)?;
    Ok(initial
        .iter()
        .map(|v| {
            (0..d)
                .map(|r| (0..d).map(|c| u[(r, c)] * v[c]).sum())
                .collect()
        })
        .collect())
}
