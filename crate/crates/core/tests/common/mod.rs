#![allow(dead_code)]

use num_complex::Complex64;
use qparticles::exchange::{project_amplitudes, symmetrized_product, ExchangeSector};
use qparticles::hilbert::{LabeledState, OneParticleBasis};
use qparticles::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_vector(rng: &mut impl Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

pub fn random_unitary(rng: &mut impl Rng, d: usize) -> Matrix {
    let m = Matrix::from_vec(d, d, random_vector(rng, d * d));
    m.qr().q()
}

/// First `k` columns of a random unitary.
pub fn random_orthonormal(rng: &mut impl Rng, d: usize, k: usize) -> Vec<Vec<Complex64>> {
    let u = random_unitary(rng, d);
    (0..k)
        .map(|j| u.column(j).iter().copied().collect())
        .collect()
}

pub fn random_state(rng: &mut impl Rng, d: usize, n: usize) -> LabeledState {
    let basis = OneParticleBasis::indexed(d).unwrap();
    LabeledState::normalized(n, basis, random_vector(rng, d.pow(n as u32))).unwrap()
}

/// Random normalized state inside `sector`. The sector must be nonempty.
pub fn random_sector_state(
    rng: &mut impl Rng,
    d: usize,
    n: usize,
    sector: ExchangeSector,
) -> LabeledState {
    assert!(
        sector == ExchangeSector::Symmetric || n <= d,
        "empty sector"
    );
    loop {
        let raw = random_vector(rng, d.pow(n as u32));
        let projected = project_amplitudes(&raw, d, n, sector);
        let basis = OneParticleBasis::indexed(d).unwrap();
        if let Ok(s) = LabeledState::normalized(n, basis, projected) {
            return s;
        }
    }
}

/// Random single (anti)symmetrized product of orthonormal orbitals with the
/// given occupations.
pub fn random_product(
    rng: &mut impl Rng,
    d: usize,
    occupations: &[usize],
    sector: ExchangeSector,
) -> (LabeledState, Vec<Vec<Complex64>>) {
    let orbitals = random_orthonormal(rng, d, occupations.len());
    let factors: Vec<Vec<Complex64>> = orbitals
        .iter()
        .zip(occupations)
        .flat_map(|(o, &k)| std::iter::repeat_n(o.clone(), k))
        .collect();
    let basis = OneParticleBasis::indexed(d).unwrap();
    (
        symmetrized_product(&basis, &factors, sector).unwrap(),
        orbitals,
    )
}

pub fn overlap_sq(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        .norm_sqr()
}

/// Projector onto the span of orthonormal vectors.
pub fn projector(vectors: &[Vec<Complex64>], d: usize) -> Matrix {
    let mut p = Matrix::zeros(d, d);
    for v in vectors {
        for i in 0..d {
            for j in 0..d {
                p[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    p
}

pub fn sectors() -> [ExchangeSector; 2] {
    [ExchangeSector::Symmetric, ExchangeSector::Antisymmetric]
}

pub mod golden;
