mod common;

use common::*;
use num_complex::Complex64;
use qparticles::emergence::{
    detect_emergent_particles, slater_rank_two_fermions, EmergenceReport, Verdict,
};
use qparticles::exchange::{symmetrized_product, ExchangeSector};
use qparticles::hilbert::{apply_one_particle_unitary, LabeledState, OneParticleBasis};
use rand::Rng;

fn assert_recovers(
    report: &EmergenceReport,
    orbitals: &[Vec<Complex64>],
    occupations: &[usize],
    sector: ExchangeSector,
) {
    let expected = if occupations.iter().any(|&k| k >= 2) {
        Verdict::CondensedObject
    } else {
        Verdict::ParticleDecomposition
    };
    assert_eq!(report.verdict, expected);
    assert!(
        report.fidelity >= 1.0 - 1e-8,
        "fidelity {}",
        report.fidelity
    );
    assert_eq!(report.defining_states.len(), orbitals.len());
    let total: usize = report.defining_states.iter().map(|s| s.occupation).sum();
    assert_eq!(total, occupations.iter().sum::<usize>());
    match sector {
        // a Slater determinant fixes only its occupied subspace
        ExchangeSector::Antisymmetric => {
            let d = orbitals[0].len();
            let found: Vec<_> = report
                .defining_states
                .iter()
                .map(|s| s.state.clone())
                .collect();
            assert!((projector(orbitals, d) - projector(&found, d)).norm() <= 1e-8);
        }
        ExchangeSector::Symmetric => {
            for (orbital, &k) in orbitals.iter().zip(occupations) {
                let hit = report
                    .defining_states
                    .iter()
                    .any(|s| s.occupation == k && overlap_sq(&s.state, orbital) >= 1.0 - 1e-8);
                assert!(hit, "orbital with occupation {k} not recovered");
            }
        }
    }
}

fn random_factor_set(r: &mut impl Rng) -> (usize, Vec<usize>, ExchangeSector) {
    let d = r.random_range(2..=4);
    let sector = sectors()[r.random_range(0..2)];
    match sector {
        ExchangeSector::Antisymmetric => {
            let n = r.random_range(1..=d.min(3));
            (d, vec![1; n], sector)
        }
        ExchangeSector::Symmetric => loop {
            let k = r.random_range(1..=d.min(3));
            let occ: Vec<usize> = (0..k).map(|_| r.random_range(1..=3)).collect();
            if occ.iter().sum::<usize>() <= 4 {
                return (d, occ, sector);
            }
        },
    }
}

#[test]
fn random_products_are_recovered() {
    let mut r = rng(21);
    for _ in 0..100 {
        let (d, occ, sector) = random_factor_set(&mut r);
        let (state, orbitals) = random_product(&mut r, d, &occ, sector);
        let report = detect_emergent_particles(&state, sector).unwrap();
        assert_recovers(&report, &orbitals, &occ, sector);
    }
}

#[test]
fn verdict_is_invariant_under_phase_and_equivariant_under_unitaries() {
    let mut r = rng(22);
    for _ in 0..50 {
        let (d, occ, sector) = random_factor_set(&mut r);
        let (state, orbitals) = random_product(&mut r, d, &occ, sector);
        let base = detect_emergent_particles(&state, sector).unwrap();

        let phased = state
            .scaled(Complex64::from_polar(
                1.0,
                r.random_range(0.0..std::f64::consts::TAU),
            ))
            .unwrap();
        let report = detect_emergent_particles(&phased, sector).unwrap();
        assert_eq!(report.verdict, base.verdict);
        for (a, b) in report.natural_spectrum.iter().zip(&base.natural_spectrum) {
            assert!((a - b).abs() <= 1e-10);
        }

        let u = random_unitary(&mut r, d);
        let moved = apply_one_particle_unitary(&state, &u).unwrap();
        let report = detect_emergent_particles(&moved, sector).unwrap();
        assert_eq!(report.verdict, base.verdict);
        for (a, b) in report.natural_spectrum.iter().zip(&base.natural_spectrum) {
            assert!((a - b).abs() <= 1e-10);
        }
        let moved_orbitals: Vec<Vec<Complex64>> = orbitals
            .iter()
            .map(|o| {
                (&u * nalgebra::DVector::from_vec(o.clone()))
                    .iter()
                    .copied()
                    .collect()
            })
            .collect();
        assert_recovers(&report, &moved_orbitals, &occ, sector);
    }
}

#[test]
fn single_slater_spectrum_is_flat() {
    let mut r = rng(23);
    for n in 1..=3 {
        let (state, _) = random_product(&mut r, 4, &vec![1; n], ExchangeSector::Antisymmetric);
        let report = detect_emergent_particles(&state, ExchangeSector::Antisymmetric).unwrap();
        let spectrum = &report.natural_spectrum;
        for w in &spectrum[..n] {
            assert!((w - 1.0 / n as f64).abs() <= 1e-10);
        }
        for w in &spectrum[n..] {
            assert!(w.abs() <= 1e-10);
        }
    }
}

fn two_fermion_state(r: &mut impl Rng) -> LabeledState {
    let d = r.random_range(2..=6);
    let sector = ExchangeSector::Antisymmetric;
    match r.random_range(0..3) {
        0 => random_product(r, d, &[1, 1], sector).0,
        1 if d >= 4 => {
            let o = random_orthonormal(r, d, 4);
            let basis = OneParticleBasis::indexed(d).unwrap();
            let a = symmetrized_product(&basis, &o[..2], sector).unwrap();
            let b = symmetrized_product(&basis, &o[2..], sector).unwrap();
            let t: f64 = r.random_range(0.05..0.95);
            let amps = a
                .amplitudes()
                .iter()
                .zip(b.amplitudes())
                .map(|(x, y)| x * t.sqrt() + y * (1.0 - t).sqrt())
                .collect();
            LabeledState::normalized(2, basis, amps).unwrap()
        }
        _ => random_sector_state(r, d, 2, sector),
    }
}

#[test]
fn slater_rank_agrees_with_emergence() {
    let mut r = rng(24);
    let mut seen = [0usize; 2];
    for _ in 0..100 {
        let state = two_fermion_state(&mut r);
        let rank = slater_rank_two_fermions(&state).unwrap();
        let report = detect_emergent_particles(&state, ExchangeSector::Antisymmetric).unwrap();
        let particles = report.verdict == Verdict::ParticleDecomposition;
        assert_eq!(rank == 1, particles, "rank {rank} vs {:?}", report.verdict);
        seen[usize::from(particles)] += 1;
    }
    assert!(seen[0] > 10 && seen[1] > 10, "{seen:?}");
}

#[test]
fn reference_fixtures() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let basis = OneParticleBasis::new(["S", "N"]).unwrap();
    let pair = LabeledState::new(
        2,
        basis,
        vec![c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)],
    )
    .unwrap();
    let report = detect_emergent_particles(&pair, ExchangeSector::Antisymmetric).unwrap();
    assert_eq!(report.verdict, Verdict::ParticleDecomposition);
    assert!((report.fidelity - 1.0).abs() <= 1e-12);
    assert_eq!(slater_rank_two_fermions(&pair).unwrap(), 1);
    assert_recovers(
        &report,
        &[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ],
        &[1, 1],
        ExchangeSector::Antisymmetric,
    );

    let basis = OneParticleBasis::new(["A", "B"]).unwrap();
    let aaa = LabeledState::basis_state(basis, &[0, 0, 0]).unwrap();
    let report = detect_emergent_particles(&aaa, ExchangeSector::Symmetric).unwrap();
    assert_eq!(report.verdict, Verdict::CondensedObject);
    assert_eq!(report.defining_states.len(), 1);
    assert_eq!(report.defining_states[0].occupation, 3);
    assert!(
        overlap_sq(
            &report.defining_states[0].state,
            &[c(1.0, 0.0), c(0.0, 0.0)]
        ) >= 1.0 - 1e-12
    );

    let basis = OneParticleBasis::indexed(4).unwrap();
    let e = |i| basis.ket(i);
    let a = symmetrized_product(&basis, &[e(0), e(1)], ExchangeSector::Antisymmetric).unwrap();
    let b = symmetrized_product(&basis, &[e(2), e(3)], ExchangeSector::Antisymmetric).unwrap();
    let amps = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x + y) * h)
        .collect();
    let entangled = LabeledState::new(2, basis.clone(), amps).unwrap();
    let report = detect_emergent_particles(&entangled, ExchangeSector::Antisymmetric).unwrap();
    assert_eq!(report.verdict, Verdict::NoParticleDecomposition);
    assert!(report.defining_states.is_empty());
    for w in &report.natural_spectrum {
        assert!((w - 0.25).abs() <= 1e-12);
    }
    assert_eq!(slater_rank_two_fermions(&entangled).unwrap(), 2);
}

#[test]
fn sector_violation_is_reported() {
    let basis = OneParticleBasis::indexed(2).unwrap();
    let ab = LabeledState::basis_state(basis, &[0, 1]).unwrap();
    for sector in sectors() {
        assert!(detect_emergent_particles(&ab, sector).is_err());
    }
}
