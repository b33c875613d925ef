//! Dense N-slot, d-mode tensor-product states.
//!
//! Amplitudes are stored in a flat vector of length `d^N`. The flat index is
//! the base-`d` number whose most significant digit is the mode of slot 0,
//! so `|A⟩|B⟩|A⟩` over `(A, B)` sits at index `0·4 + 1·2 + 0 = 2`.

use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::{tol, Error, Matrix, Result};

/// Largest admissible `d^N`.
pub const MAX_DIMENSION: usize = 1 << 24;

/// Ordered list of distinct one-particle mode names, optionally with
/// energies in units of the quantum ε.
#[derive(Debug, Clone, PartialEq)]
pub struct OneParticleBasis {
    labels: Vec<String>,
    energies: Option<Vec<f64>>,
}

impl OneParticleBasis {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidArgument(
                "basis needs at least one mode".into(),
            ));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate mode label {l:?}"
                )));
            }
        }
        Ok(Self {
            labels,
            energies: None,
        })
    }

    /// Modes `e1, e2, …, ed`, matching the occupation symbol tokens.
    pub fn indexed(d: usize) -> Result<Self> {
        Self::new((1..=d).map(|k| format!("e{k}")))
    }

    pub fn with_energies(mut self, energies: Vec<f64>) -> Result<Self> {
        if energies.len() != self.labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} energies for {} modes",
                energies.len(),
                self.labels.len()
            )));
        }
        self.energies = Some(energies);
        Ok(self)
    }

    /// Flattened product basis, outer factor major: `L×up, L×down, R×up, …`.
    pub fn composite(outer: &OneParticleBasis, inner: &OneParticleBasis) -> Result<Self> {
        let labels = outer
            .labels
            .iter()
            .flat_map(|o| inner.labels.iter().map(move |i| format!("{o}×{i}")));
        Self::new(labels)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn energies(&self) -> Option<&[f64]> {
        self.energies.as_deref()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Unit vector on mode `i`.
    pub fn ket(&self, i: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::zero(); self.dim()];
        v[i] = Complex64::new(1.0, 0.0);
        v
    }
}

/// `d^n`, or an error if it exceeds [`MAX_DIMENSION`].
pub fn checked_dimension(d: usize, n: usize) -> Result<usize> {
    let mut total: usize = 1;
    for _ in 0..n {
        total = total
            .checked_mul(d)
            .filter(|&t| t <= MAX_DIMENSION)
            .ok_or_else(|| Error::CapExceeded {
                what: "tensor-product dimension",
                size: format!("{d}^{n}"),
                cap: MAX_DIMENSION.to_string(),
            })?;
    }
    Ok(total)
}

/// Base-`d` digits of `index`, slot 0 first.
pub fn digits(mut index: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in (0..n).rev() {
        out[slot] = index % d;
        index /= d;
    }
    out
}

pub fn flat_index(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &k| acc * d + k)
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Normalized N-particle state in the labeled tensor-product space.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledState {
    n_slots: usize,
    basis: OneParticleBasis,
    amplitudes: Vec<Complex64>,
}

impl LabeledState {
    /// Validates length, finiteness and unit norm.
    pub fn new(
        n_slots: usize,
        basis: OneParticleBasis,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        let state = Self::unchecked_norm(n_slots, basis, amplitudes)?;
        let nrm = norm(&state.amplitudes);
        if (nrm - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized(nrm));
        }
        Ok(state)
    }

    /// Like [`LabeledState::new`] but rescales the amplitudes to unit norm.
    pub fn normalized(
        n_slots: usize,
        basis: OneParticleBasis,
        mut amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        let nrm = norm(&amplitudes);
        if nrm <= tol::NORM || !nrm.is_finite() {
            return Err(Error::ZeroNorm("cannot normalize state".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= nrm);
        Self::new(n_slots, basis, amplitudes)
    }

    fn unchecked_norm(
        n_slots: usize,
        basis: OneParticleBasis,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        if n_slots == 0 {
            return Err(Error::InvalidArgument("n_slots must be positive".into()));
        }
        let dim = checked_dimension(basis.dim(), n_slots)?;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {dim} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        if let Some(i) = amplitudes.iter().position(|a| !a.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            n_slots,
            basis,
            amplitudes,
        })
    }

    /// Product basis state `|m₀⟩|m₁⟩…` from mode indices.
    pub fn basis_state(basis: OneParticleBasis, modes: &[usize]) -> Result<Self> {
        let d = basis.dim();
        if let Some(&m) = modes.iter().find(|&&m| m >= d) {
            return Err(Error::DimensionMismatch(format!(
                "mode {m} outside basis of size {d}"
            )));
        }
        let dim = checked_dimension(d, modes.len())?;
        let mut amps = vec![Complex64::zero(); dim];
        amps[flat_index(modes, d)] = Complex64::new(1.0, 0.0);
        Self::new(modes.len(), basis, amps)
    }

    pub fn n_slots(&self) -> usize {
        self.n_slots
    }

    pub fn basis(&self) -> &OneParticleBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    /// Amplitude of the product basis state with the given per-slot modes.
    pub fn amplitude(&self, modes: &[usize]) -> Complex64 {
        self.amplitudes[flat_index(modes, self.dim())]
    }

    /// Same shape, new amplitudes; renormalizes.
    pub(crate) fn with_amplitudes(&self, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::normalized(self.n_slots, self.basis.clone(), amplitudes)
    }

    /// Same amplitudes over a relabeled basis of equal dimension.
    pub fn relabel(self, basis: OneParticleBasis) -> Result<Self> {
        if basis.dim() != self.basis.dim() {
            return Err(Error::DimensionMismatch(
                "relabel needs equal dimension".into(),
            ));
        }
        Ok(Self { basis, ..self })
    }

    /// Multiply by a global phase factor.
    pub fn scaled(&self, phase: Complex64) -> Result<Self> {
        self.with_amplitudes(self.amplitudes.iter().map(|a| a * phase).collect())
    }

    /// Largest entrywise deviation from `other` after removing the global
    /// phase that best aligns the two.
    pub fn distance_up_to_phase(&self, other: &LabeledState) -> f64 {
        let overlap = dot(&other.amplitudes, &self.amplitudes);
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b * phase).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_deviation(&self, other: &LabeledState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn same_space(&self, other: &LabeledState) -> Result<()> {
        if self.n_slots != other.n_slots || self.basis.dim() != other.basis.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} slots × {} modes vs {} slots × {} modes",
                self.n_slots,
                self.dim(),
                other.n_slots,
                other.dim()
            )));
        }
        if self.basis.labels != other.basis.labels {
            return Err(Error::DimensionMismatch(format!(
                "bases {:?} and {:?} differ",
                self.basis.labels, other.basis.labels
            )));
        }
        Ok(())
    }
}

impl fmt::Display for LabeledState {
    /// Nonzero terms as `(re,im)|m₀;m₁;…⟩`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dim();
        let mut first = true;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.norm() <= 1e-14 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let labels: Vec<&str> = digits(i, d, self.n_slots)
                .into_iter()
                .map(|k| self.basis.labels[k].as_str())
                .collect();
            write!(f, "({:.6},{:.6})|{}⟩", a.re, a.im, labels.join(";"))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Bijection on `{0, …, N−1}` with its sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    mapping: Vec<usize>,
    parity: i8,
}

impl Permutation {
    /// `mapping[k]` is the slot that slot `k` is sent to.
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &m in &mapping {
            if m >= n || seen[m] {
                return Err(Error::InvalidArgument(format!(
                    "{mapping:?} is not a bijection"
                )));
            }
            seen[m] = true;
        }
        let parity = parity_of(&mapping);
        Ok(Self { mapping, parity })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mapping: (0..n).collect(),
            parity: 1,
        }
    }

    /// Transposition of slots `a` and `b`.
    pub fn swap(n: usize, a: usize, b: usize) -> Result<Self> {
        let mut mapping: Vec<usize> = (0..n).collect();
        if a >= n || b >= n {
            return Err(Error::InvalidArgument(format!(
                "swap({a},{b}) outside {n} slots"
            )));
        }
        mapping.swap(a, b);
        Self::new(mapping)
    }

    /// All `N!` permutations in lexicographic order of their mappings.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Self {
                parity: parity_of(&current),
                mapping: current.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    /// +1 or −1.
    pub fn parity(&self) -> i8 {
        self.parity
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Permutation) -> Result<Self> {
        if self.len() != first.len() {
            return Err(Error::DimensionMismatch("permutation sizes differ".into()));
        }
        Self::new(first.mapping.iter().map(|&k| self.mapping[k]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (k, &m) in self.mapping.iter().enumerate() {
            inv[m] = k;
        }
        Self {
            mapping: inv,
            parity: self.parity,
        }
    }
}

fn parity_of(mapping: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..mapping.len() {
        for j in i + 1..mapping.len() {
            if mapping[i] > mapping[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `|f₀⟩ ⊗ |f₁⟩ ⊗ …` over a shared one-particle basis.
pub fn tensor_product(
    basis: &OneParticleBasis,
    factors: &[Vec<Complex64>],
) -> Result<LabeledState> {
    if factors.is_empty() {
        return Err(Error::InvalidArgument(
            "tensor product of zero factors".into(),
        ));
    }
    let d = basis.dim();
    for (k, f) in factors.iter().enumerate() {
        if f.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "factor {k} has length {}, basis has {d} modes",
                f.len()
            )));
        }
        let n = norm(f);
        if n <= tol::NORM {
            return Err(Error::ZeroNorm(format!("factor {k}")));
        }
        if (n - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized(n));
        }
    }
    checked_dimension(d, factors.len())?;
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for f in factors {
        amps = amps
            .iter()
            .flat_map(|a| f.iter().map(move |c| a * c))
            .collect();
    }
    LabeledState::new(factors.len(), basis.clone(), amps)
}

/// `⟨a|b⟩`.
pub fn inner_product(a: &LabeledState, b: &LabeledState) -> Result<Complex64> {
    a.same_space(b)?;
    Ok(dot(&a.amplitudes, &b.amplitudes))
}

/// Raw permuted amplitudes; `out[π(i)] = amps[i]` where π moves the digit of
/// slot `k` to slot `mapping[k]`.
pub(crate) fn permute_amplitudes(
    amps: &[Complex64],
    d: usize,
    n: usize,
    p: &Permutation,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); amps.len()];
    let mut target = vec![0; n];
    for (i, a) in amps.iter().enumerate() {
        let src = digits(i, d, n);
        for (k, &m) in p.mapping.iter().enumerate() {
            target[m] = src[k];
        }
        out[flat_index(&target, d)] = *a;
    }
    out
}

pub fn apply_permutation(state: &LabeledState, p: &Permutation) -> Result<LabeledState> {
    if p.len() != state.n_slots {
        return Err(Error::DimensionMismatch(format!(
            "permutation on {} slots applied to {}-slot state",
            p.len(),
            state.n_slots
        )));
    }
    let amps = permute_amplitudes(&state.amplitudes, state.dim(), state.n_slots, p);
    Ok(LabeledState {
        amplitudes: amps,
        ..state.clone()
    })
}

/// Max entry of `|u†u − I|`.
pub fn unitarity_defect(u: &Matrix) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    let prod = u.adjoint() * u;
    let mut worst: f64 = 0.0;
    for i in 0..u.nrows() {
        for j in 0..u.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

pub fn check_unitary(u: &Matrix) -> Result<()> {
    let defect = unitarity_defect(u);
    if defect > tol::UNITARY {
        return Err(Error::NotUnitary(defect));
    }
    Ok(())
}

/// Applies the d×d matrix `op` to the factor in `slot`.
pub(crate) fn apply_to_slot(
    amps: &[Complex64],
    d: usize,
    n: usize,
    slot: usize,
    op: &Matrix,
) -> Vec<Complex64> {
    // the slot digit has stride d^(n-1-slot)
    let stride = d.pow((n - 1 - slot) as u32);
    let block = stride * d;
    let mut out = vec![Complex64::zero(); amps.len()];
    for base in (0..amps.len()).step_by(block) {
        for offset in 0..stride {
            for row in 0..d {
                let mut acc = Complex64::zero();
                for col in 0..d {
                    acc += op[(row, col)] * amps[base + col * stride + offset];
                }
                out[base + row * stride + offset] = acc;
            }
        }
    }
    out
}

/// `(Σ_slots op) |ψ⟩`, no normalization.
pub(crate) fn apply_one_body_sum(state: &LabeledState, op: &Matrix) -> Vec<Complex64> {
    let (d, n) = (state.dim(), state.n_slots);
    let mut out = vec![Complex64::zero(); state.amplitudes.len()];
    for slot in 0..n {
        let part = apply_to_slot(&state.amplitudes, d, n, slot, op);
        out.iter_mut().zip(part).for_each(|(o, p)| *o += p);
    }
    out
}

/// `u ⊗ u ⊗ … ⊗ u |ψ⟩`.
pub fn apply_one_particle_unitary(state: &LabeledState, u: &Matrix) -> Result<LabeledState> {
    let d = state.dim();
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "{}×{} unitary on {d}-mode basis",
            u.nrows(),
            u.ncols()
        )));
    }
    check_unitary(u)?;
    let mut amps = state.amplitudes.clone();
    for slot in 0..state.n_slots {
        amps = apply_to_slot(&amps, d, state.n_slots, slot, u);
    }
    LabeledState::new(state.n_slots, state.basis.clone(), amps)
}

/// One-particle reduced density matrix averaged over the N slots,
/// `ρ_ab = (1/N) Σ_k Σ_rest ψ(…a at k…) ψ*(…b at k…)`.
pub fn reduce_one_particle(state: &LabeledState) -> Matrix {
    let (d, n) = (state.dim(), state.n_slots);
    let mut rdm = Matrix::zeros(d, d);
    for slot in 0..n {
        let stride = d.pow((n - 1 - slot) as u32);
        let block = stride * d;
        for base in (0..state.amplitudes.len()).step_by(block) {
            for offset in 0..stride {
                for a in 0..d {
                    let psi_a = state.amplitudes[base + a * stride + offset];
                    if psi_a.is_zero() {
                        continue;
                    }
                    for b in 0..d {
                        rdm[(a, b)] += psi_a * state.amplitudes[base + b * stride + offset].conj();
                    }
                }
            }
        }
    }
    rdm / Complex64::new(n as f64, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ab() -> OneParticleBasis {
        OneParticleBasis::new(["A", "B"]).unwrap()
    }

    #[test]
    fn product_of_basis_kets_lands_on_expected_index() {
        let basis = ab();
        let (a, b) = (basis.ket(0), basis.ket(1));
        let aaa = tensor_product(&basis, &[a.clone(), a.clone(), a.clone()]).unwrap();
        assert_eq!(aaa.amplitudes()[0], c(1.0));
        let aba = tensor_product(&basis, &[a.clone(), b, a]).unwrap();
        assert_eq!(aba.amplitudes()[2], c(1.0));
        assert_eq!(aba.amplitudes().iter().filter(|x| !x.is_zero()).count(), 1);
    }

    #[test]
    fn product_of_splitter_outputs() {
        let basis = OneParticleBasis::new(["L'", "R'"]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = vec![c(s), c(s)];
        let minus = vec![c(s), c(-s)];
        let st = tensor_product(&basis, &[plus, minus]).unwrap();
        let expected = [0.5, -0.5, 0.5, -0.5];
        for (got, want) in st.amplitudes().iter().zip(expected) {
            assert!((got - c(want)).norm() < 1e-15);
        }
    }

    #[test]
    fn tensor_product_rejects_bad_factors() {
        let basis = ab();
        assert!(matches!(
            tensor_product(&basis, &[vec![c(1.0)]]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            tensor_product(&basis, &[vec![c(0.0), c(0.0)]]),
            Err(Error::ZeroNorm(_))
        ));
    }

    #[test]
    fn dimension_cap() {
        assert!(checked_dimension(2, 24).is_ok());
        assert!(matches!(
            checked_dimension(2, 25),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            checked_dimension(1 << 13, 2),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn swap_moves_modes_between_slots() {
        let basis = ab();
        let ab_state = LabeledState::basis_state(basis.clone(), &[0, 1]).unwrap();
        let ba_state = LabeledState::basis_state(basis, &[1, 0]).unwrap();
        let swapped = apply_permutation(&ab_state, &Permutation::swap(2, 0, 1).unwrap()).unwrap();
        assert_eq!(swapped, ba_state);
    }

    #[test]
    fn permutations_fix_condensate_and_flip_antisymmetric_pair() {
        let aaa = LabeledState::basis_state(ab(), &[0, 0, 0]).unwrap();
        for p in Permutation::all(3) {
            assert_eq!(apply_permutation(&aaa, &p).unwrap(), aaa);
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let pair = LabeledState::new(2, ab(), vec![c(0.0), c(s), c(-s), c(0.0)]).unwrap();
        let swapped = apply_permutation(&pair, &Permutation::swap(2, 0, 1).unwrap()).unwrap();
        let negated = pair.scaled(c(-1.0)).unwrap();
        assert!(swapped.max_deviation(&negated) < 1e-15);
    }

    #[test]
    fn three_boson_inner_products() {
        let t = 1.0 / 3f64.sqrt();
        let aaa = LabeledState::basis_state(ab(), &[0, 0, 0]).unwrap();
        let mut two_a = vec![c(0.0); 8];
        let mut two_b = vec![c(0.0); 8];
        for i in [1, 2, 4] {
            two_a[i] = c(t);
        }
        for i in [3, 5, 6] {
            two_b[i] = c(t);
        }
        let two_a = LabeledState::new(3, ab(), two_a).unwrap();
        let two_b = LabeledState::new(3, ab(), two_b).unwrap();
        assert!((inner_product(&aaa, &aaa).unwrap() - c(1.0)).norm() < 1e-15);
        assert!(inner_product(&two_a, &two_b).unwrap().norm() < 1e-15);
        assert!(inner_product(&aaa, &two_a).unwrap().norm() < 1e-15);
        let other =
            LabeledState::basis_state(OneParticleBasis::indexed(2).unwrap(), &[0, 0, 0]).unwrap();
        assert!(inner_product(&aaa, &other).is_err());
    }

    #[test]
    fn permutation_size_must_match() {
        let st = LabeledState::basis_state(ab(), &[0, 1]).unwrap();
        assert!(apply_permutation(&st, &Permutation::identity(3)).is_err());
    }

    #[test]
    fn permutations_enumerate_with_parity() {
        let all = Permutation::all(3);
        assert_eq!(all.len(), 6);
        assert_eq!(all.iter().filter(|p| p.parity() == 1).count(), 3);
        assert_eq!(all[0], Permutation::identity(3));
        assert_eq!(Permutation::swap(3, 0, 2).unwrap().parity(), -1);
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn identity_unitary_is_noop_and_non_unitary_is_rejected() {
        let st = LabeledState::basis_state(ab(), &[0, 1, 1]).unwrap();
        let id = Matrix::identity(2, 2);
        assert_eq!(apply_one_particle_unitary(&st, &id).unwrap(), st);
        let bad = Matrix::from_element(2, 2, c(1.0));
        assert!(matches!(
            apply_one_particle_unitary(&st, &bad),
            Err(Error::NotUnitary(_))
        ));
        assert!(matches!(
            apply_one_particle_unitary(&st, &Matrix::identity(3, 3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn splitter_on_single_slot() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bs = Matrix::from_row_slice(2, 2, &[c(s), c(s), c(s), c(-s)]);
        let l = LabeledState::basis_state(ab(), &[0]).unwrap();
        let out = apply_one_particle_unitary(&l, &bs).unwrap();
        assert!((out.amplitudes()[0] - c(s)).norm() < 1e-15);
        assert!((out.amplitudes()[1] - c(s)).norm() < 1e-15);
    }

    #[test]
    fn rdm_of_condensate() {
        let st = LabeledState::basis_state(ab(), &[0, 0, 0]).unwrap();
        let rdm = reduce_one_particle(&st);
        assert_eq!(rdm[(0, 0)], c(1.0));
        assert_eq!(rdm[(1, 1)], c(0.0));
        assert_eq!(rdm[(0, 1)], c(0.0));
    }

    #[test]
    fn rdm_of_two_a_one_b_symmetric_state() {
        let r3 = 1.0 / 3f64.sqrt();
        let mut amps = vec![c(0.0); 8];
        // BAA, ABA, AAB
        amps[4] = c(r3);
        amps[2] = c(r3);
        amps[1] = c(r3);
        let st = LabeledState::new(3, ab(), amps).unwrap();
        let rdm = reduce_one_particle(&st);
        assert!((rdm[(0, 0)] - c(2.0 / 3.0)).norm() < 1e-15);
        assert!((rdm[(1, 1)] - c(1.0 / 3.0)).norm() < 1e-15);
        assert!(rdm[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn new_rejects_unnormalized_and_nonfinite() {
        assert!(matches!(
            LabeledState::new(1, ab(), vec![c(1.0), c(1.0)]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            LabeledState::new(1, ab(), vec![c(f64::NAN), c(1.0)]),
            Err(Error::NonFinite(0))
        ));
        assert!(OneParticleBasis::new(["A", "A"]).is_err());
    }

    #[test]
    fn composite_labels_are_space_major() {
        let space = OneParticleBasis::new(["L", "R"]).unwrap();
        let spin = OneParticleBasis::new(["up", "down"]).unwrap();
        let both = OneParticleBasis::composite(&space, &spin).unwrap();
        assert_eq!(both.labels(), ["L×up", "L×down", "R×up", "R×down"]);
    }
}
