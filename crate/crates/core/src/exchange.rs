//! Symmetrization and antisymmetrization of labeled states.

use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::hilbert::{
    checked_dimension, digits, dot, norm, permute_amplitudes, tensor_product, LabeledState,
    OneParticleBasis, Permutation,
};
use crate::statistics::{
    count_microstates, occupation_vectors, StatisticsKind, DEFAULT_ENUMERATION_CAP,
};
use crate::{tol, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExchangeSector {
    Symmetric,
    Antisymmetric,
}

impl ExchangeSector {
    /// Sign picked up under a permutation of the given parity.
    pub fn sign(self, parity: i8) -> f64 {
        match self {
            Self::Symmetric => 1.0,
            Self::Antisymmetric => f64::from(parity),
        }
    }

    pub fn statistics(self) -> StatisticsKind {
        match self {
            Self::Symmetric => StatisticsKind::BoseEinstein,
            Self::Antisymmetric => StatisticsKind::FermiDirac,
        }
    }

    /// Largest occupation a mode may carry.
    pub fn max_occupation(self) -> Option<u32> {
        match self {
            Self::Symmetric => None,
            Self::Antisymmetric => Some(1),
        }
    }
}

impl fmt::Display for ExchangeSector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Symmetric => "symmetric",
            Self::Antisymmetric => "antisymmetric",
        })
    }
}

/// `(1/N!) Σ_p sign(p) P_p |ψ⟩`, without renormalization.
pub fn project_amplitudes(
    amps: &[Complex64],
    d: usize,
    n: usize,
    sector: ExchangeSector,
) -> Vec<Complex64> {
    let perms = Permutation::all(n);
    let weight = 1.0 / perms.len() as f64;
    let mut out = vec![Complex64::zero(); amps.len()];
    for p in &perms {
        let s = sector.sign(p.parity()) * weight;
        for (o, a) in out.iter_mut().zip(permute_amplitudes(amps, d, n, p)) {
            *o += a * s;
        }
    }
    out
}

/// Renormalized sector projection; `None` when the projection vanishes.
pub fn sector_project(state: &LabeledState, sector: ExchangeSector) -> Option<LabeledState> {
    let raw = project_amplitudes(state.amplitudes(), state.dim(), state.n_slots(), sector);
    if norm(&raw) <= tol::NORM {
        return None;
    }
    state.with_amplitudes(raw).ok()
}

/// Normalized (anti)symmetrized product of one-particle states.
pub fn symmetrized_product(
    basis: &OneParticleBasis,
    factors: &[Vec<Complex64>],
    sector: ExchangeSector,
) -> Result<LabeledState> {
    let product = tensor_product(basis, factors)?;
    let raw = project_amplitudes(product.amplitudes(), basis.dim(), factors.len(), sector);
    let raw_norm = norm(&raw);
    if sector == ExchangeSector::Antisymmetric {
        // |A(f₁⊗…⊗f_N)|² = det(Gram)/N!; compare √det(Gram) with the guard
        let n_fact: f64 = (1..=factors.len()).map(|k| k as f64).product();
        let scaled = raw_norm * n_fact.sqrt();
        if scaled < tol::ILL_CONDITIONED {
            return Err(Error::PauliViolation(format!(
                "antisymmetrized product of linearly dependent states (scaled norm {scaled:e})"
            )));
        }
    }
    product.with_amplitudes(raw)
}

/// Whether `P_sector |ψ⟩ = |ψ⟩` within [`tol::SECTOR`].
pub fn is_in_sector(state: &LabeledState, sector: ExchangeSector) -> bool {
    sector_distance(state, sector) <= tol::SECTOR
}

/// `‖P_sector ψ − ψ‖`.
pub fn sector_distance(state: &LabeledState, sector: ExchangeSector) -> f64 {
    let raw = project_amplitudes(state.amplitudes(), state.dim(), state.n_slots(), sector);
    raw.iter()
        .zip(state.amplitudes())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Sign of the permutation sorting `modes` ascending, or 0 if a mode repeats.
pub(crate) fn sorting_sign(modes: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..modes.len() {
        for j in i + 1..modes.len() {
            match modes[i].cmp(&modes[j]) {
                std::cmp::Ordering::Greater => inversions += 1,
                std::cmp::Ordering::Equal => return 0,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Occupation vector of a product basis state.
pub(crate) fn occupations_of(modes: &[usize], d: usize) -> Vec<u32> {
    let mut occ = vec![0; d];
    for &m in modes {
        occ[m] += 1;
    }
    occ
}

/// Number of product basis states sharing this occupation, `N!/∏ nᵢ!`.
pub(crate) fn multinomial(occ: &[u32]) -> f64 {
    let n: u32 = occ.iter().sum();
    let mut out: f64 = (1..=n).map(f64::from).product();
    for &k in occ {
        out /= (1..=k).map(f64::from).product::<f64>();
    }
    out
}

/// Amplitude of the sector basis vector with occupations `occ` on the
/// product state `modes`; zero when the occupations differ.
pub(crate) fn sector_basis_amplitude(modes: &[usize], occ: &[u32], sector: ExchangeSector) -> f64 {
    if occupations_of(modes, occ.len()) != occ {
        return 0.0;
    }
    let sign = match sector {
        ExchangeSector::Symmetric => 1.0,
        ExchangeSector::Antisymmetric => f64::from(sorting_sign(modes)),
    };
    sign / multinomial(occ).sqrt()
}

/// Normalized sector vector for one occupation vector. The first nonzero
/// amplitude (the ascending-sorted mode string) is real and positive.
pub(crate) fn occupation_vector_state(
    basis: &OneParticleBasis,
    occ: &[u32],
    sector: ExchangeSector,
) -> Result<LabeledState> {
    let d = basis.dim();
    if occ.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "occupation vector of length {} for {d} modes",
            occ.len()
        )));
    }
    if sector == ExchangeSector::Antisymmetric && occ.iter().any(|&k| k > 1) {
        return Err(Error::PauliViolation(format!(
            "occupation {occ:?} not allowed in the antisymmetric sector"
        )));
    }
    let n: u32 = occ.iter().sum();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "vacuum has no labeled representation".into(),
        ));
    }
    let n = n as usize;
    let dim = checked_dimension(d, n)?;
    let mut amps = vec![Complex64::zero(); dim];
    for (i, a) in amps.iter_mut().enumerate() {
        let modes = digits(i, d, n);
        let v = sector_basis_amplitude(&modes, occ, sector);
        if v != 0.0 {
            *a = Complex64::new(v, 0.0);
        }
    }
    LabeledState::normalized(n, basis.clone(), amps)
}

/// Orthonormal basis of the sector, one vector per occupation vector, in the
/// occupation enumeration order of the statistics module.
pub fn sector_basis(
    basis: &OneParticleBasis,
    n: usize,
    sector: ExchangeSector,
) -> Result<Vec<LabeledState>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "sector basis needs at least one particle".into(),
        ));
    }
    let d = basis.dim();
    let dim = checked_dimension(d, n)?;
    let count = count_microstates(sector.statistics(), n as u64, d as u64)?;
    let cap = num_bigint::BigUint::from(DEFAULT_ENUMERATION_CAP);
    let total = &count * dim;
    if count > cap || total > num_bigint::BigUint::from(crate::hilbert::MAX_DIMENSION) {
        return Err(Error::CapExceeded {
            what: "sector basis size",
            size: format!("{count} vectors × {dim} amplitudes"),
            cap: crate::hilbert::MAX_DIMENSION.to_string(),
        });
    }
    occupation_vectors(n, d, sector.max_occupation())
        .iter()
        .map(|occ| occupation_vector_state(basis, occ, sector))
        .collect()
}

/// Overlap helper for tests and callers holding raw vectors.
pub fn fidelity(a: &LabeledState, b: &LabeledState) -> f64 {
    dot(a.amplitudes(), b.amplitudes()).norm_sqr()
}
