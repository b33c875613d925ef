//! Two-electron beam-splitter experiment and the two-packet joint density.
//!
//! The one-particle space of the splitter scenario is `space ⊗ spin`,
//! flattened space-major into the four modes `(L×up, L×down, R×up, R×down)`
//! before the splitter and `(L'×up, …)` after it.

use std::collections::BTreeMap;
use std::io::Write;

use num_complex::Complex64;
use num_traits::Zero;

use crate::exchange::{is_in_sector, symmetrized_product, ExchangeSector};
use crate::hilbert::{apply_one_particle_unitary, check_unitary, LabeledState, OneParticleBasis};
use crate::{tol, Error, Matrix, Result};

pub const SPIN_UP: usize = 0;
pub const SPIN_DOWN: usize = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct BeamSplitterScenario {
    pub spatial_in: [String; 2],
    pub spatial_out: [String; 2],
    pub spins: [String; 2],
    /// Column `j` is the image of input port `j` over the output ports.
    pub splitter: Matrix,
}

impl Default for BeamSplitterScenario {
    fn default() -> Self {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            spatial_in: ["L".into(), "R".into()],
            spatial_out: ["L'".into(), "R'".into()],
            spins: ["up".into(), "down".into()],
            splitter: Matrix::from_row_slice(2, 2, &[s, s, s, -s]),
        }
    }
}

impl BeamSplitterScenario {
    pub fn with_splitter(splitter: Matrix) -> Result<Self> {
        if splitter.nrows() != 2 || splitter.ncols() != 2 {
            return Err(Error::DimensionMismatch("splitter must be 2×2".into()));
        }
        check_unitary(&splitter)?;
        Ok(Self {
            splitter,
            ..Self::default()
        })
    }

    fn basis(&self, ports: &[String; 2]) -> OneParticleBasis {
        let space = OneParticleBasis::new(ports.iter().cloned()).expect("distinct ports");
        let spin = OneParticleBasis::new(self.spins.iter().cloned()).expect("distinct spins");
        OneParticleBasis::composite(&space, &spin).expect("distinct composite labels")
    }

    pub fn input_basis(&self) -> OneParticleBasis {
        self.basis(&self.spatial_in)
    }

    pub fn output_basis(&self) -> OneParticleBasis {
        self.basis(&self.spatial_out)
    }

    /// `splitter ⊗ 1_spin` on the flattened four-mode space.
    pub fn one_particle_unitary(&self) -> Matrix {
        Matrix::from_fn(4, 4, |r, c| {
            if r % 2 == c % 2 {
                self.splitter[(r / 2, c / 2)]
            } else {
                Complex64::zero()
            }
        })
    }

    /// Port names for a state over either the input or the output basis.
    fn ports_of(&self, state: &LabeledState) -> Result<[String; 2]> {
        if *state.basis() == self.output_basis() {
            Ok(self.spatial_out.clone())
        } else if *state.basis() == self.input_basis() {
            Ok(self.spatial_in.clone())
        } else {
            Err(Error::DimensionMismatch(format!(
                "state basis {:?} is not the scenario's four-mode basis",
                state.basis().labels()
            )))
        }
    }
}

/// `(1/√2)(|L↑⟩₁|R↓⟩₂ − |R↓⟩₁|L↑⟩₂)`.
pub fn build_initial_state(scenario: &BeamSplitterScenario) -> LabeledState {
    let basis = scenario.input_basis();
    let l_up = basis.ket(0);
    let r_down = basis.ket(3);
    symmetrized_product(&basis, &[l_up, r_down], ExchangeSector::Antisymmetric)
        .expect("orthogonal input modes")
}

/// Applies the splitter to every slot; the result lives on the output basis.
pub fn evolve_through_splitter(
    state: &LabeledState,
    scenario: &BeamSplitterScenario,
) -> Result<LabeledState> {
    if *state.basis() != scenario.input_basis() {
        return Err(Error::DimensionMismatch(format!(
            "expected input basis {:?}, got {:?}",
            scenario.input_basis().labels(),
            state.basis().labels()
        )));
    }
    apply_one_particle_unitary(state, &scenario.one_particle_unitary())?
        .relabel(scenario.output_basis())
}

/// Port and spin of one detected particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Detection {
    pub port: usize,
    pub spin: usize,
}

impl Detection {
    fn of_mode(mode: usize) -> Self {
        Self {
            port: mode / 2,
            spin: mode % 2,
        }
    }
}

/// Unordered pair of detections, stored sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome(pub Detection, pub Detection);

impl Outcome {
    pub fn new(a: Detection, b: Detection) -> Self {
        if a <= b {
            Self(a, b)
        } else {
            Self(b, a)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub ports: [String; 2],
    pub spins: [String; 2],
    /// Born probability of every unordered two-particle outcome.
    pub joint_probabilities: BTreeMap<Outcome, f64>,
    pub p_both_left: f64,
    pub p_both_right: f64,
    pub p_coincidence: f64,
    /// Spin state over `(↑↑, ↑↓, ↓↑, ↓↓)`, first spin at the left port,
    /// given one particle per port. First significant component real positive.
    pub conditional_coincidence_spin_state: [Complex64; 4],
    /// `zz`, `xx`, `yy`: two-point spin correlators on the conditional state.
    pub correlators: BTreeMap<String, f64>,
}

impl ExperimentResult {
    pub fn outcome_name(&self, outcome: &Outcome) -> String {
        let name = |d: &Detection| format!("{}{}", self.ports[d.port], self.spins[d.spin]);
        format!("{}+{}", name(&outcome.0), name(&outcome.1))
    }
}

fn pauli(axis: char) -> [[Complex64; 2]; 2] {
    let o = Complex64::zero();
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match axis {
        'x' => [[o, one], [one, o]],
        'y' => [[o, -i], [i, o]],
        _ => [[one, o], [o, -one]],
    }
}

/// `⟨ψ| σ_a ⊗ σ_b |ψ⟩` for a two-spin state over `(↑↑, ↑↓, ↓↑, ↓↓)`.
pub fn spin_correlator(spin_state: &[Complex64; 4], a: char, b: char) -> f64 {
    let (sa, sb) = (pauli(a), pauli(b));
    let mut acc = Complex64::zero();
    for r in 0..4 {
        for c in 0..4 {
            let m = sa[r / 2][c / 2] * sb[r % 2][c % 2];
            acc += spin_state[r].conj() * m * spin_state[c];
        }
    }
    acc.re
}

/// Born statistics of local port-and-spin detection on a two-particle state.
pub fn measure_ports_and_spins(
    state: &LabeledState,
    scenario: &BeamSplitterScenario,
) -> Result<ExperimentResult> {
    let ports = scenario.ports_of(state)?;
    if state.n_slots() != 2 {
        return Err(Error::InvalidArgument(format!(
            "two-particle state required, got {} slots",
            state.n_slots()
        )));
    }
    let exchange_sign = if is_in_sector(state, ExchangeSector::Antisymmetric) {
        -1.0
    } else if is_in_sector(state, ExchangeSector::Symmetric) {
        1.0
    } else {
        return Err(Error::NotInSector(ExchangeSector::Antisymmetric));
    };

    let mut joint: BTreeMap<Outcome, f64> = BTreeMap::new();
    for a in 0..4 {
        for b in 0..4 {
            joint.insert(
                Outcome::new(Detection::of_mode(a), Detection::of_mode(b)),
                0.0,
            );
        }
    }
    for a in 0..4 {
        for b in 0..4 {
            let p = state.amplitude(&[a, b]).norm_sqr();
            *joint
                .get_mut(&Outcome::new(Detection::of_mode(a), Detection::of_mode(b)))
                .unwrap() += p;
        }
    }
    let total = |pred: &dyn Fn(&Outcome) -> bool| -> f64 {
        joint.iter().filter(|(o, _)| pred(o)).map(|(_, p)| p).sum()
    };
    let p_both_left = total(&|o| o.0.port == 0 && o.1.port == 0);
    let p_both_right = total(&|o| o.0.port == 1 && o.1.port == 1);
    let p_coincidence = total(&|o| o.0.port != o.1.port);

    if p_coincidence < tol::COINCIDENCE {
        return Err(Error::NoCoincidence(p_coincidence));
    }
    // slot 0 at the left port carries the left spin; the other slot order
    // differs only by the exchange sign
    let mut cond = [Complex64::zero(); 4];
    for (k, c) in cond.iter_mut().enumerate() {
        let (left_spin, right_spin) = (k / 2, k % 2);
        let direct = state.amplitude(&[left_spin, 2 + right_spin]);
        let crossed = state.amplitude(&[2 + right_spin, left_spin]);
        *c = (direct + crossed * exchange_sign) * 0.5;
    }
    let nrm = cond.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    cond.iter_mut().for_each(|c| *c /= nrm);
    crate::linalg::fix_phase(&mut cond, 1e-12);

    let correlators = ['z', 'x', 'y']
        .into_iter()
        .map(|axis| (format!("{axis}{axis}"), spin_correlator(&cond, axis, axis)))
        .collect();

    Ok(ExperimentResult {
        ports,
        spins: scenario.spins.clone(),
        joint_probabilities: joint,
        p_both_left,
        p_both_right,
        p_coincidence,
        conditional_coincidence_spin_state: cond,
        correlators,
    })
}

/// Normalized Gaussian `ψ(x) ∝ exp(−(x−c)²/(4σ²) + i k x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    pub center: f64,
    pub width: f64,
    pub phase_velocity: f64,
}

impl GaussianPacket {
    pub fn new(center: f64, width: f64) -> Result<Self> {
        Self::with_phase_velocity(center, width, 0.0)
    }

    pub fn with_phase_velocity(center: f64, width: f64, phase_velocity: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) || !center.is_finite() || !phase_velocity.is_finite()
        {
            return Err(Error::InvalidArgument(format!(
                "packet needs finite center/phase and positive width, got width {width}"
            )));
        }
        Ok(Self {
            center,
            width,
            phase_velocity,
        })
    }

    pub fn amplitude(&self, x: f64) -> Complex64 {
        let norm = (2.0 * std::f64::consts::PI * self.width * self.width).powf(-0.25);
        let dx = x - self.center;
        let envelope = norm * (-dx * dx / (4.0 * self.width * self.width)).exp();
        Complex64::from_polar(envelope, self.phase_velocity * x)
    }

    /// `⟨self|other⟩` in closed form.
    pub fn overlap(&self, other: &GaussianPacket) -> Complex64 {
        let (s1, s2) = (self.width, other.width);
        let a = 1.0 / (4.0 * s1 * s1) + 1.0 / (4.0 * s2 * s2);
        let b = Complex64::new(
            self.center / (2.0 * s1 * s1) + other.center / (2.0 * s2 * s2),
            other.phase_velocity - self.phase_velocity,
        );
        let c0 = self.center * self.center / (4.0 * s1 * s1)
            + other.center * other.center / (4.0 * s2 * s2);
        let norms = (2.0 * std::f64::consts::PI * s1 * s1).powf(-0.25)
            * (2.0 * std::f64::consts::PI * s2 * s2).powf(-0.25);
        let exponent = b * b / (4.0 * a) - c0;
        exponent.exp() * norms * (std::f64::consts::PI / a).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl GridSpec {
    /// Spans six widths beyond both packets.
    pub fn covering(a: &GaussianPacket, b: &GaussianPacket, n_points: usize) -> Self {
        Self {
            x_min: (a.center - 6.0 * a.width).min(b.center - 6.0 * b.width),
            x_max: (a.center + 6.0 * a.width).max(b.center + 6.0 * b.width),
            n_points,
        }
    }

    pub fn step(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.step()
        }
    }
}

/// Joint density `ρ(x₁, x₂)` sampled on a square grid, row-major over `x₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    /// `max |interference term| / max ρ`.
    pub cross_term_max: f64,
    /// `⟨ψ_S|ψ_N⟩`.
    pub overlap: Complex64,
}

impl DensityGrid {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.n_points + j]
    }

    /// Trapezoidal double integral.
    pub fn integral(&self) -> f64 {
        let n = self.grid.n_points;
        let w = |i: usize| if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
        let h = self.grid.step();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += w(i) * w(j) * self.at(i, j);
            }
        }
        acc * h * h
    }

    /// `x1,x2,rho` rows at 12 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x1,x2,rho")?;
        let n = self.grid.n_points;
        for i in 0..n {
            let x1 = crate::cli::format::sig12(self.grid.point(i));
            for j in 0..n {
                writeln!(
                    out,
                    "{x1},{},{}",
                    crate::cli::format::sig12(self.grid.point(j)),
                    crate::cli::format::sig12(self.at(i, j))
                )?;
            }
        }
        Ok(())
    }
}

/// Evaluates
/// `|ψ_S(x₁)ψ_N(x₂)|² + |ψ_S(x₂)ψ_N(x₁)|² − 2 Re(ψ_S(x₁)ψ_N(x₂) ψ_S(x₂)* ψ_N(x₁)*)`
/// on the grid, normalized by `1/(2(1 − |⟨ψ_S|ψ_N⟩|²))`.
pub fn joint_spatial_density(
    packet_s: &GaussianPacket,
    packet_n: &GaussianPacket,
    grid: &GridSpec,
) -> Result<DensityGrid> {
    if grid.n_points < 2 || grid.x_max.partial_cmp(&grid.x_min) != Some(std::cmp::Ordering::Greater)
    {
        return Err(Error::InvalidArgument(format!(
            "grid needs x_max > x_min and at least 2 points, got {grid:?}"
        )));
    }
    let overlap = packet_s.overlap(packet_n);
    let gram = 1.0 - overlap.norm_sqr();
    // ‖ψ_S − ψ_N‖ ≈ √gram for nearby packets
    if gram < 1e-12 {
        return Err(Error::IdenticalPackets);
    }
    let n = grid.n_points;
    let xs: Vec<f64> = (0..n).map(|i| grid.point(i)).collect();
    let s: Vec<Complex64> = xs.iter().map(|&x| packet_s.amplitude(x)).collect();
    let nn: Vec<Complex64> = xs.iter().map(|&x| packet_n.amplitude(x)).collect();
    let scale = 1.0 / (2.0 * gram);

    let mut values = vec![0.0; n * n];
    let mut cross_max: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let direct = s[i] * nn[j];
            let exchanged = s[j] * nn[i];
            let cross = 2.0 * (direct * exchanged.conj()).re;
            let rho = (direct.norm_sqr() + exchanged.norm_sqr() - cross) * scale;
            values[i * n + j] = rho.max(0.0);
            cross_max = cross_max.max((cross * scale).abs());
        }
    }
    let rho_max = values.iter().copied().fold(0.0, f64::max);
    let density = DensityGrid {
        grid: *grid,
        values,
        cross_term_max: if rho_max > 0.0 {
            cross_max / rho_max
        } else {
            f64::INFINITY
        },
        overlap,
    };
    let integral = density.integral();
    if (integral - 1.0).abs() > tol::GRID {
        return Err(Error::UnderResolved(integral));
    }
    Ok(density)
}
