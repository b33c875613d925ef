//! The label-free formalism: occupation numbers and their superpositions.
//!
//! A symbol such as `f_{e1e1e1e1e2e2e4}` lists a mode token once per unit
//! of occupation, so it reads as the occupation vector `(4, 2, 0, 1)`. The
//! maps here carry occupation states into the (anti)symmetric sector of the
//! labeled space and back.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::exchange::{
    is_in_sector, multinomial, occupation_vector_state, occupations_of, sorting_sign,
    ExchangeSector,
};
use crate::hilbert::{checked_dimension, digits, LabeledState, OneParticleBasis};
use crate::{tol, Error, Result};

/// Occupation numbers of each mode in a fixed exchange sector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OccupationState {
    occupations: Vec<u32>,
    sector: ExchangeSector,
}

impl OccupationState {
    pub fn new(occupations: Vec<u32>, sector: ExchangeSector) -> Result<Self> {
        if occupations.is_empty() {
            return Err(Error::InvalidArgument("need at least one mode".into()));
        }
        if sector == ExchangeSector::Antisymmetric {
            if let Some(i) = occupations.iter().position(|&k| k > 1) {
                return Err(Error::PauliViolation(format!(
                    "mode {} has occupation {} in the antisymmetric sector",
                    i + 1,
                    occupations[i]
                )));
            }
        }
        Ok(Self {
            occupations,
            sector,
        })
    }

    pub fn occupations(&self) -> &[u32] {
        &self.occupations
    }

    pub fn sector(&self) -> ExchangeSector {
        self.sector
    }

    pub fn dim(&self) -> usize {
        self.occupations.len()
    }

    pub fn total(&self) -> u32 {
        self.occupations.iter().sum()
    }
}

impl fmt::Display for OccupationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_symbol(self))
    }
}

/// Descending lexicographic order on occupations, the order in which the
/// statistics module enumerates them.
#[derive(Debug, Clone, PartialEq, Eq)]
struct EnumerationKey(Vec<u32>);

impl Ord for EnumerationKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for EnumerationKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Normalized superposition of occupation states with a common sector and
/// particle number.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    terms: BTreeMap<EnumerationKey, Complex64>,
    sector: ExchangeSector,
    n_modes: usize,
    total_number: u32,
}

impl FockVector {
    /// Builds from `(occupations, amplitude)` pairs and renormalizes.
    /// Repeated occupations are summed.
    pub fn from_terms(
        terms: impl IntoIterator<Item = (OccupationState, Complex64)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<EnumerationKey, Complex64> = BTreeMap::new();
        let mut shape: Option<(ExchangeSector, usize, u32)> = None;
        for (occ, amp) in terms {
            let key_shape = (occ.sector, occ.dim(), occ.total());
            match shape {
                None => shape = Some(key_shape),
                Some(s) if s != key_shape => {
                    return Err(Error::DimensionMismatch(format!(
                        "term {occ} does not share sector, mode count and particle number"
                    )))
                }
                _ => {}
            }
            if !amp.is_finite() {
                return Err(Error::InvalidArgument("non-finite Fock amplitude".into()));
            }
            *map.entry(EnumerationKey(occ.occupations)).or_default() += amp;
        }
        let (sector, n_modes, total_number) =
            shape.ok_or_else(|| Error::InvalidArgument("empty Fock superposition".into()))?;
        let nrm = map.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if nrm <= tol::NORM {
            return Err(Error::ZeroNorm("Fock superposition".into()));
        }
        map.values_mut().for_each(|a| *a /= nrm);
        map.retain(|_, a| !a.is_zero());
        Ok(Self {
            terms: map,
            sector,
            n_modes,
            total_number,
        })
    }

    pub fn sector(&self) -> ExchangeSector {
        self.sector
    }

    pub fn total_number(&self) -> u32 {
        self.total_number
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in enumeration order.
    pub fn terms(&self) -> impl Iterator<Item = (OccupationState, Complex64)> + '_ {
        self.terms.iter().map(|(k, a)| {
            (
                OccupationState {
                    occupations: k.0.clone(),
                    sector: self.sector,
                },
                *a,
            )
        })
    }

    pub fn amplitude(&self, occupations: &[u32]) -> Complex64 {
        self.terms
            .get(&EnumerationKey(occupations.to_vec()))
            .copied()
            .unwrap_or_default()
    }

    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.terms
            .iter()
            .filter_map(|(k, a)| other.terms.get(k).map(|b| a.conj() * b))
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.terms
            .values()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Parses `f_{e1e1e2}`; also accepts `ε` for `e` and subscript digits.
pub fn parse_symbol(text: &str, d: usize, sector: ExchangeSector) -> Result<OccupationState> {
    let bad = |reason: &str| Error::InvalidSymbol {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    if d == 0 {
        return Err(Error::InvalidArgument("need at least one mode".into()));
    }
    let body = text
        .strip_prefix("f_{")
        .and_then(|rest| rest.strip_suffix('}'))
        .ok_or_else(|| bad("expected f_{…}"))?;
    let mut occupations = vec![0u32; d];
    let mut chars = body.chars().peekable();
    while let Some(ch) = chars.next() {
        if ch != 'e' && ch != 'ε' {
            return Err(bad(&format!("unexpected character {ch:?}")));
        }
        let mut digits = String::new();
        while let Some(&next) = chars.peek() {
            match ascii_digit(next) {
                Some(dg) => {
                    digits.push(dg);
                    chars.next();
                }
                None => break,
            }
        }
        if digits.is_empty() {
            return Err(bad("mode token without index"));
        }
        let index: usize = digits.parse().map_err(|_| bad("mode index too large"))?;
        if index == 0 || index > d {
            return Err(bad(&format!("mode index {index} outside 1..={d}")));
        }
        occupations[index - 1] += 1;
        if sector == ExchangeSector::Antisymmetric && occupations[index - 1] > 1 {
            return Err(bad(&format!(
                "mode e{index} repeated in the antisymmetric sector"
            )));
        }
    }
    OccupationState::new(occupations, sector)
}

fn ascii_digit(c: char) -> Option<char> {
    match c {
        '0'..='9' => Some(c),
        '₀'..='₉' => char::from_digit(c as u32 - '₀' as u32, 10),
        _ => None,
    }
}

/// Canonical symbol: tokens ascending, each mode repeated by its occupation.
pub fn format_symbol(occ: &OccupationState) -> String {
    let mut out = String::from("f_{");
    for (i, &k) in occ.occupations.iter().enumerate() {
        for _ in 0..k {
            out.push('e');
            out.push_str(&(i + 1).to_string());
        }
    }
    out.push('}');
    out
}

/// The sector basis vector with these occupations.
pub fn occupation_to_labeled(
    occ: &OccupationState,
    basis: &OneParticleBasis,
) -> Result<LabeledState> {
    occupation_vector_state(basis, &occ.occupations, occ.sector)
}

/// Superposition of sector basis vectors.
pub fn fock_to_labeled(fock: &FockVector, basis: &OneParticleBasis) -> Result<LabeledState> {
    let d = basis.dim();
    if d != fock.n_modes {
        return Err(Error::DimensionMismatch(format!(
            "Fock vector over {} modes, basis has {d}",
            fock.n_modes
        )));
    }
    let n = fock.total_number as usize;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "vacuum has no labeled representation".into(),
        ));
    }
    let dim = checked_dimension(d, n)?;
    let mut amps = vec![Complex64::zero(); dim];
    for (i, a) in amps.iter_mut().enumerate() {
        let modes = digits(i, d, n);
        let occ = occupations_of(&modes, d);
        let coeff = fock.amplitude(&occ);
        if coeff.is_zero() {
            continue;
        }
        let sign = match fock.sector {
            ExchangeSector::Symmetric => 1.0,
            ExchangeSector::Antisymmetric => f64::from(sorting_sign(&modes)),
        };
        *a = coeff * (sign / multinomial(&occ).sqrt());
    }
    LabeledState::normalized(n, basis.clone(), amps)
}

/// Coefficients of a sector state against the sector basis.
pub fn labeled_to_fock(state: &LabeledState, sector: ExchangeSector) -> Result<FockVector> {
    if !is_in_sector(state, sector) {
        return Err(Error::NotInSector(sector));
    }
    let (d, n) = (state.dim(), state.n_slots());
    let mut coeffs: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
    for (i, a) in state.amplitudes().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let modes = digits(i, d, n);
        let sign = match sector {
            ExchangeSector::Symmetric => 1.0,
            ExchangeSector::Antisymmetric => f64::from(sorting_sign(&modes)),
        };
        if sign == 0.0 {
            continue;
        }
        let occ = occupations_of(&modes, d);
        let weight = sign / multinomial(&occ).sqrt();
        *coeffs.entry(occ).or_default() += a * weight;
    }
    let terms = coeffs
        .into_iter()
        .filter(|(_, c)| c.norm() > 1e-14)
        .map(|(occ, c)| Ok((OccupationState::new(occ, sector)?, c)))
        .collect::<Result<Vec<_>>>()?;
    FockVector::from_terms(terms)
}

/// Takes one unit out of `mode` (1-based), then puts an indistinguishable
/// unit back. The result cannot differ from the input.
pub fn replace_indistinguishable(occ: &OccupationState, mode: usize) -> Result<OccupationState> {
    if mode == 0 || mode > occ.dim() {
        return Err(Error::InvalidArgument(format!(
            "mode {mode} outside 1..={}",
            occ.dim()
        )));
    }
    let slot = mode - 1;
    if occ.occupations[slot] == 0 {
        return Err(Error::EmptyMode(mode));
    }
    let mut removed = occ.occupations.clone();
    removed[slot] -= 1;
    let mut restored = removed;
    restored[slot] += 1;
    OccupationState::new(restored, occ.sector)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exchange::symmetrized_product;
    use proptest::prelude::*;

    const SYM: ExchangeSector = ExchangeSector::Symmetric;
    const ANTI: ExchangeSector = ExchangeSector::Antisymmetric;

    #[test]
    fn parse_long_symbol() {
        let occ = parse_symbol("f_{e1e1e1e1e2e2e4}", 4, SYM).unwrap();
        assert_eq!(occ.occupations(), [4, 2, 0, 1]);
        let uni = parse_symbol("f_{ε₁ε₁ε₁ε₁ε₂ε₂ε₄}", 4, SYM).unwrap();
        assert_eq!(uni, occ);
        assert_eq!(
            parse_symbol("f_{}", 3, SYM).unwrap().occupations(),
            [0, 0, 0]
        );
    }

    #[test]
    fn parse_errors() {
        for bad in [
            "f{e1}",
            "f_{e1",
            "f_{e1 e2}",
            "f_{x1}",
            "f_{e}",
            "f_{e0}",
            "f_{e5}",
        ] {
            assert!(
                matches!(parse_symbol(bad, 4, SYM), Err(Error::InvalidSymbol { .. })),
                "{bad}"
            );
        }
        assert!(parse_symbol("f_{e1e1}", 2, ANTI).is_err());
    }

    #[test]
    fn format_examples() {
        let occ = OccupationState::new(vec![4, 2, 0, 1], SYM).unwrap();
        assert_eq!(format_symbol(&occ), "f_{e1e1e1e1e2e2e4}");
        assert_eq!(
            format_symbol(&OccupationState::new(vec![0, 0], SYM).unwrap()),
            "f_{}"
        );
        assert_eq!(
            format_symbol(&OccupationState::new(vec![1, 1], ANTI).unwrap()),
            "f_{e1e2}"
        );
        assert!(OccupationState::new(vec![2, 0], ANTI).is_err());
    }

    #[test]
    fn parse_accepts_unsorted_tokens() {
        let occ = parse_symbol("f_{e4e1e2e1}", 4, SYM).unwrap();
        assert_eq!(format_symbol(&occ), "f_{e1e1e2e4}");
    }

    proptest! {
        #[test]
        fn symbol_round_trip(tokens in prop::collection::vec(1usize..=6, 0..12), d in 6usize..9) {
            let text: String = std::iter::once("f_{".to_string())
                .chain(tokens.iter().map(|t| format!("e{t}")))
                .chain(std::iter::once("}".to_string()))
                .collect();
            let occ = parse_symbol(&text, d, SYM).unwrap();
            let mut sorted = tokens.clone();
            sorted.sort_unstable();
            let canonical: String = std::iter::once("f_{".to_string())
                .chain(sorted.iter().map(|t| format!("e{t}")))
                .chain(std::iter::once("}".to_string()))
                .collect();
            prop_assert_eq!(format_symbol(&occ), canonical.clone());
            prop_assert_eq!(parse_symbol(&canonical, d, SYM).unwrap(), occ);
        }
    }

    #[test]
    fn occupation_to_labeled_examples() {
        let basis = OneParticleBasis::new(["A", "B"]).unwrap();
        let r3 = 1.0 / 3f64.sqrt();
        let six =
            occupation_to_labeled(&OccupationState::new(vec![2, 1], SYM).unwrap(), &basis).unwrap();
        for (i, want) in [(1, r3), (2, r3), (4, r3)] {
            assert!((six.amplitudes()[i].re - want).abs() < 1e-15);
        }
        let four =
            occupation_to_labeled(&OccupationState::new(vec![3, 0], SYM).unwrap(), &basis).unwrap();
        assert_eq!(four.amplitudes()[0], Complex64::new(1.0, 0.0));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet =
            occupation_to_labeled(&OccupationState::new(vec![1, 1], ANTI).unwrap(), &basis)
                .unwrap();
        assert!((singlet.amplitudes()[1].re - s).abs() < 1e-15);
        assert!((singlet.amplitudes()[2].re + s).abs() < 1e-15);
    }

    #[test]
    fn state_seven_is_single_term() {
        let basis = OneParticleBasis::new(["A", "B"]).unwrap();
        let (a, b) = (basis.ket(0), basis.ket(1));
        let seven = symmetrized_product(&basis, &[a, b.clone(), b], SYM).unwrap();
        let fock = labeled_to_fock(&seven, SYM).unwrap();
        assert_eq!(fock.len(), 1);
        assert!((fock.amplitude(&[1, 2]) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(matches!(
            labeled_to_fock(&seven, ANTI),
            Err(Error::NotInSector(_))
        ));
    }

    #[test]
    fn fock_terms_in_enumeration_order() {
        let terms = [vec![0, 2], vec![2, 0], vec![1, 1]].into_iter().map(|o| {
            (
                OccupationState::new(o, SYM).unwrap(),
                Complex64::new(1.0, 0.0),
            )
        });
        let fv = FockVector::from_terms(terms).unwrap();
        let order: Vec<Vec<u32>> = fv.terms().map(|(o, _)| o.occupations().to_vec()).collect();
        assert_eq!(order, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert!((fv.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mixed_terms_rejected() {
        let terms = vec![
            (
                OccupationState::new(vec![1, 1], SYM).unwrap(),
                Complex64::new(1.0, 0.0),
            ),
            (
                OccupationState::new(vec![1, 0], SYM).unwrap(),
                Complex64::new(1.0, 0.0),
            ),
        ];
        assert!(FockVector::from_terms(terms).is_err());
    }

    #[test]
    fn replacement_examples() {
        let occ = OccupationState::new(vec![4, 2, 0, 1], SYM).unwrap();
        assert_eq!(replace_indistinguishable(&occ, 1).unwrap(), occ);
        let single = OccupationState::new(vec![1, 0], SYM).unwrap();
        assert_eq!(replace_indistinguishable(&single, 1).unwrap(), single);
        let other = OccupationState::new(vec![0, 1], SYM).unwrap();
        assert!(matches!(
            replace_indistinguishable(&other, 1),
            Err(Error::EmptyMode(1))
        ));
        assert!(replace_indistinguishable(&other, 3).is_err());
    }
}
