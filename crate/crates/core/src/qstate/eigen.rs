//! Eigenvalues of dense complex Hermitian matrices by cyclic Jacobi rotations.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// All eigenvalues of a Hermitian matrix in ascending order.
///
/// Rejects inputs whose Hermitian deviation exceeds `1e-10`. The input is
/// symmetrised before iterating, so small round-off asymmetry is harmless.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigenvalues of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let dev = m.hermitian_deviation();
    if !(dev <= HERMITIAN_TOL) {
        return Err(Error::NotHermitian(dev));
    }
    let n = m.rows();
    let mut a: Vec<Complex64> = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            a.push(if r == c {
                Complex64::new(m[(r, r)].re, 0.0)
            } else {
                (m[(r, c)] + m[(c, r)].conj()) * 0.5
            });
        }
    }
    jacobi(&mut a, n);
    let mut values: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    values.sort_by(|x, y| x.total_cmp(y));
    Ok(values)
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[r * n + c].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(a: &mut [Complex64], n: usize) {
    if n < 2 {
        return;
    }
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return;
    }
    let eps = f64::EPSILON * scale;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(a, n) <= eps {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(a, n, p, q, eps / n as f64);
            }
        }
    }
}

/// Annihilate `a[p][q]` with the unitary `J` having
/// `J[p][p] = c, J[p][q] = s, J[q][p] = -s e^{-iφ}, J[q][q] = c e^{-iφ}`,
/// where `φ = arg a[p][q]`; the update is `A ← J† A J`.
fn rotate(a: &mut [Complex64], n: usize, p: usize, q: usize, tiny: f64) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag <= tiny {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let phase = apq / mag; // e^{iφ}
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let e_neg = phase.conj();

    // columns: A ← A J
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c - akq * e_neg * s;
        a[k * n + q] = akp * s + akq * e_neg * c;
    }
    // rows: A ← J† A
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c - aqk * phase * s;
        a[q * n + k] = apk * s + aqk * phase * c;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal() {
        assert_eq!(
            hermitian_eigenvalues(&ComplexMatrix::identity(4)).unwrap(),
            vec![1.0; 4]
        );
        let d = ComplexMatrix::diagonal(&[0.4, 0.1, 0.3, 0.2]);
        let ev = hermitian_eigenvalues(&d).unwrap();
        for (got, want) in ev.iter().zip([0.1, 0.2, 0.3, 0.4]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn two_by_two_closed_form() {
        // [[a, b], [b*, d]] has eigenvalues (a+d)/2 ± sqrt(((a-d)/2)^2 + |b|^2)
        let b = Complex64::new(0.3, -0.7);
        let m = ComplexMatrix::from_vec(
            2,
            2,
            vec![Complex64::new(1.5, 0.0), b, b.conj(), Complex64::new(-0.25, 0.0)],
        )
        .unwrap();
        let mid = (1.5 - 0.25) / 2.0;
        let rad = (((1.5 + 0.25) / 2.0f64).powi(2) + b.norm_sqr()).sqrt();
        let ev = hermitian_eigenvalues(&m).unwrap();
        assert!((ev[0] - (mid - rad)).abs() < 1e-14);
        assert!((ev[1] - (mid + rad)).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(3);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn rejects_non_square() {
        assert!(hermitian_eigenvalues(&ComplexMatrix::zeros(2, 3)).is_err());
    }
}
