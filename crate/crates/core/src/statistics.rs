//! Exact counting of energy distributions under the three quantum statistics.
//!
//! All counting paths use [`BigUint`]; floating point appears only in
//! [`entropy`].

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default cap on the size of any enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatisticsKind {
    Boltzmann,
    BoseEinstein,
    FermiDirac,
}

impl StatisticsKind {
    pub const ALL: [StatisticsKind; 3] = [Self::Boltzmann, Self::BoseEinstein, Self::FermiDirac];

    pub fn name(self) -> &'static str {
        match self {
            Self::Boltzmann => "boltzmann",
            Self::BoseEinstein => "bose_einstein",
            Self::FermiDirac => "fermi_dirac",
        }
    }
}

impl fmt::Display for StatisticsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `P` quanta of size ε distributed over `N` resonators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingProblem {
    pub n_resonators: u64,
    pub n_quanta: u64,
    /// Only carried for display.
    pub quantum_size: f64,
}

impl CountingProblem {
    pub fn new(n_resonators: u64, n_quanta: u64) -> Result<Self> {
        if n_resonators == 0 {
            return Err(Error::InvalidArgument("need at least one resonator".into()));
        }
        Ok(Self {
            n_resonators,
            n_quanta,
            quantum_size: 1.0,
        })
    }

    pub fn with_quantum_size(mut self, epsilon: f64) -> Self {
        self.quantum_size = epsilon;
        self
    }
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Number of distinct symbols `(N−1+P)! / ((N−1)!·P!)`.
pub fn planck_count(problem: &CountingProblem) -> BigUint {
    binomial(
        problem.n_resonators - 1 + problem.n_quanta,
        problem.n_quanta,
    )
}

/// One mark of a distribution symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    Separator,
    Quantum,
}

/// Arrangement of `P` quanta and `N−1` separators. Displayed with `e` for a
/// quantum and `|` for a separator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolString {
    marks: Vec<Mark>,
}

impl SymbolString {
    /// Symbol whose resonators hold the given numbers of quanta.
    pub fn from_energies(energies: &[u64]) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::InvalidArgument("need at least one resonator".into()));
        }
        let mut marks = Vec::new();
        for (i, &e) in energies.iter().enumerate() {
            if i > 0 {
                marks.push(Mark::Separator);
            }
            marks.extend(std::iter::repeat_n(Mark::Quantum, e as usize));
        }
        Ok(Self { marks })
    }

    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    /// Quanta held by each resonator.
    pub fn energies(&self) -> Vec<u64> {
        let mut out = vec![0];
        for m in &self.marks {
            match m {
                Mark::Separator => out.push(0),
                Mark::Quantum => *out.last_mut().unwrap() += 1,
            }
        }
        out
    }
}

impl fmt::Display for SymbolString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.marks {
            f.write_str(match m {
                Mark::Separator => "|",
                Mark::Quantum => "e",
            })?;
        }
        Ok(())
    }
}

fn check_cap(count: &BigUint, cap: u64, what: &'static str) -> Result<()> {
    if *count > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            what,
            size: count.to_string(),
            cap: cap.to_string(),
        });
    }
    Ok(())
}

pub fn enumerate_symbols(problem: &CountingProblem) -> Result<Vec<SymbolString>> {
    enumerate_symbols_capped(problem, DEFAULT_ENUMERATION_CAP)
}

/// All distinct symbols, lexicographic with separator before quantum.
pub fn enumerate_symbols_capped(problem: &CountingProblem, cap: u64) -> Result<Vec<SymbolString>> {
    check_cap(&planck_count(problem), cap, "symbol enumeration")?;
    let mut out = Vec::new();
    let mut marks = Vec::new();
    fill_symbols(
        problem.n_resonators as usize - 1,
        problem.n_quanta as usize,
        &mut marks,
        &mut out,
    );
    Ok(out)
}

fn fill_symbols(seps: usize, quanta: usize, marks: &mut Vec<Mark>, out: &mut Vec<SymbolString>) {
    if seps == 0 && quanta == 0 {
        out.push(SymbolString {
            marks: marks.clone(),
        });
        return;
    }
    if seps > 0 {
        marks.push(Mark::Separator);
        fill_symbols(seps - 1, quanta, marks, out);
        marks.pop();
    }
    if quanta > 0 {
        marks.push(Mark::Quantum);
        fill_symbols(seps, quanta - 1, marks, out);
        marks.pop();
    }
}

/// Number of microstates of `n` particles over `d` modes.
pub fn count_microstates(kind: StatisticsKind, n_particles: u64, n_modes: u64) -> Result<BigUint> {
    if n_modes == 0 {
        return Err(Error::InvalidArgument("need at least one mode".into()));
    }
    Ok(match kind {
        StatisticsKind::Boltzmann => {
            let exp = u32::try_from(n_particles)
                .map_err(|_| Error::InvalidArgument("particle count too large".into()))?;
            BigUint::from(n_modes).pow(exp)
        }
        StatisticsKind::BoseEinstein => binomial(n_modes + n_particles - 1, n_particles),
        StatisticsKind::FermiDirac => binomial(n_modes, n_particles),
    })
}

/// One configuration from [`enumerate_distributions`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Configuration {
    /// Per-mode occupation numbers (label-free).
    Occupation(Vec<u32>),
    /// Mode index of each labeled particle.
    Assignment(Vec<usize>),
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = match self {
            Self::Occupation(v) => v.iter().map(u32::to_string).collect(),
            Self::Assignment(v) => v.iter().map(usize::to_string).collect(),
        };
        write!(f, "({})", parts.join(" "))
    }
}

pub fn enumerate_distributions(kind: StatisticsKind, n: u64, d: u64) -> Result<Vec<Configuration>> {
    enumerate_distributions_capped(kind, n, d, DEFAULT_ENUMERATION_CAP)
}

/// Occupation vectors in descending lexicographic order (so `(n,0,…)` comes
/// first), or Boltzmann slot assignments in ascending lexicographic order.
pub fn enumerate_distributions_capped(
    kind: StatisticsKind,
    n: u64,
    d: u64,
    cap: u64,
) -> Result<Vec<Configuration>> {
    check_cap(
        &count_microstates(kind, n, d)?,
        cap,
        "distribution enumeration",
    )?;
    let (n, d) = (n as usize, d as usize);
    Ok(match kind {
        StatisticsKind::Boltzmann => {
            let total = d.pow(n as u32);
            (0..total)
                .map(|i| Configuration::Assignment(crate::hilbert::digits(i, d, n)))
                .collect()
        }
        StatisticsKind::BoseEinstein => occupation_vectors(n, d, None)
            .into_iter()
            .map(Configuration::Occupation)
            .collect(),
        StatisticsKind::FermiDirac => occupation_vectors(n, d, Some(1))
            .into_iter()
            .map(Configuration::Occupation)
            .collect(),
    })
}

/// Length-`d` vectors summing to `n`, each entry at most `max`, in
/// descending lexicographic order. Callers are responsible for size caps.
pub(crate) fn occupation_vectors(n: usize, d: usize, max: Option<u32>) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(d);
    fill_occupations(n as u32, d, max, &mut current, &mut out);
    out
}

fn fill_occupations(
    remaining: u32,
    modes_left: usize,
    max: Option<u32>,
    current: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if modes_left == 1 {
        if max.is_none_or(|m| remaining <= m) {
            current.push(remaining);
            out.push(current.clone());
            current.pop();
        }
        return;
    }
    let top = max.map_or(remaining, |m| m.min(remaining));
    for k in (0..=top).rev() {
        current.push(k);
        fill_occupations(remaining - k, modes_left - 1, max, current, out);
        current.pop();
    }
}

/// `S = k ln W`.
pub fn entropy(count: &BigUint, k: f64) -> Result<f64> {
    if count.is_zero() {
        return Err(Error::InvalidArgument(
            "entropy undefined for zero microstates".into(),
        ));
    }
    Ok(k * ln_big(count))
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}
