//! Cyclic Jacobi eigensolver for small Hermitian matrices.

use num_complex::Complex64;
use num_traits::Zero;

use crate::Matrix;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (unsorted) and eigenvectors (columns) of a Hermitian matrix.
/// Only the upper triangle and the real diagonal are trusted.
pub(crate) fn hermitian_eigen(input: &Matrix) -> (Vec<f64>, Matrix) {
    let n = input.nrows();
    let mut a = input.clone();
    // symmetrize from the upper triangle
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in i + 1..n {
            a[(j, i)] = a[(i, j)].conj();
        }
    }
    let mut v = Matrix::identity(n, n);
    let scale = a
        .iter()
        .map(|x| x.norm_sqr())
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-18 * scale {
                    continue;
                }
                let phase = apq / mag;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J = diag(1, e^{-iθ}) · [[c, s], [-s, c]] restricted to (p, q)
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;
                rotate(&mut a, &mut v, p, q, [jpp, jpq, jqp, jqq]);
            }
        }
    }
    let values = (0..n).map(|i| a[(i, i)].re).collect();
    (values, v)
}

/// `A ← J†AJ`, `V ← VJ` for the 2×2 block `j = [jpp, jpq, jqp, jqq]`.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize, j: [Complex64; 4]) {
    let [jpp, jpq, jqp, jqq] = j;
    let n = a.nrows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::zero();
    a[(q, p)] = Complex64::zero();
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Rotates `v` by a global phase so that its first component with modulus
/// above `threshold` is real and positive. Returns that component's index.
pub(crate) fn fix_phase(v: &mut [Complex64], threshold: f64) -> Option<usize> {
    let lead = v.iter().position(|c| c.norm() > threshold)?;
    let phase = v[lead].conj() / v[lead].norm();
    v.iter_mut().for_each(|c| *c *= phase);
    v[lead] = Complex64::new(v[lead].re, 0.0);
    Some(lead)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigen_equation_holds_for_complex_hermitian() {
        let m = Matrix::from_row_slice(
            3,
            3,
            &[
                c(2.0, 0.0),
                c(1.0, -1.0),
                c(0.0, 0.5),
                c(1.0, 1.0),
                c(-1.0, 0.0),
                c(0.3, 0.0),
                c(0.0, -0.5),
                c(0.3, 0.0),
                c(0.5, 0.0),
            ],
        );
        let (vals, vecs) = hermitian_eigen(&m);
        for (k, &val) in vals.iter().enumerate() {
            let col = vecs.column(k).into_owned();
            let lhs = &m * &col;
            let rhs = &col * c(val, 0.0);
            assert!((lhs - rhs).norm() < 1e-13);
        }
        let gram = vecs.adjoint() * &vecs;
        assert!((gram - Matrix::identity(3, 3)).norm() < 1e-13);
        let trace: f64 = vals.iter().sum();
        assert!((trace - 1.5).abs() < 1e-13);
    }

    #[test]
    fn diagonal_input_is_untouched() {
        let m = Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.5, 0.0), c(0.5, 0.0)]));
        let (vals, vecs) = hermitian_eigen(&m);
        assert_eq!(vals, vec![0.5, 0.5]);
        assert_eq!(vecs, Matrix::identity(2, 2));
    }

    #[test]
    fn phase_fixing() {
        let mut v = vec![c(0.0, 1e-20), c(0.0, -0.6), c(0.8, 0.0)];
        assert_eq!(fix_phase(&mut v, 1e-12), Some(1));
        assert!((v[1] - c(0.6, 0.0)).norm() < 1e-15);
        assert!((v[2] - c(0.0, 0.8)).norm() < 1e-15);
    }
}
