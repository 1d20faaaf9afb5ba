//! Random matrices: complex Ginibre draws, Haar unitaries and induced states.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::density::DensityMatrix;
use super::matrix::ComplexMatrix;
use crate::{Error, Result};

/// Entry with independent standard-normal real and imaginary parts.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |_, _| complex_normal(rng))
}

/// ρ = G G† / tr(G G†) with G = N₁ + iN₂ complex Ginibre.
pub fn random_ginibre_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DensityMatrix> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!("state dimension {dim}")));
    }
    loop {
        let g = ginibre(dim, rng);
        let h = g.matmul(&g.adjoint())?;
        if h.trace().re < 1e-30 {
            continue;
        }
        return DensityMatrix::from_unnormalized(h);
    }
}

/// Haar-random unitary.
///
/// Orthonormalises the columns of a complex Ginibre matrix by Gram–Schmidt
/// (run twice for numerical orthogonality). Gram–Schmidt fixes the diagonal of
/// R to be real positive, which is the phase convention that makes Q Haar
/// distributed.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!("unitary dimension {dim}")));
    }
    'draw: loop {
        let g = ginibre(dim, rng);
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|c| (0..dim).map(|r| g[(r, c)]).collect())
            .collect();
        for j in 0..dim {
            let (done, rest) = cols.split_at_mut(j);
            let v = &mut rest[0];
            for _ in 0..2 {
                for q in done.iter() {
                    let proj: Complex64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= proj * qi;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-10 {
                continue 'draw;
            }
            for vi in v.iter_mut() {
                *vi /= norm;
            }
        }
        return Ok(ComplexMatrix::from_fn(dim, dim, |r, c| cols[c][r]));
    }
}

/// Haar-random pure state vector of dimension `dim`.
pub fn random_pure_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(m: &ComplexMatrix) -> Result<Complex64> {
    if !m.is_square() {
        return Err(Error::Dimension("determinant of a non-square matrix".into()));
    }
    let n = m.rows();
    let mut a: Vec<Complex64> = m.as_slice().to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
            .expect("non-empty range");
        if a[pivot * n + col].norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        let d = a[col * n + col];
        det *= d;
        for r in col + 1..n {
            let f = a[r * n + col] / d;
            for k in col..n {
                let v = a[col * n + k];
                a[r * n + k] -= f * v;
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn ginibre_state_invariants() {
        let mut r = rng::from_seed(1);
        for _ in 0..50 {
            let rho = random_ginibre_density(4, &mut r).unwrap();
            rho.validate().unwrap();
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
            assert!(rho.min_eigenvalue() >= -1e-12);
        }
    }

    #[test]
    fn ginibre_state_is_deterministic() {
        let a = random_ginibre_density(4, &mut rng::from_seed(9)).unwrap();
        let b = random_ginibre_density(4, &mut rng::from_seed(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unitary_is_unitary() {
        let mut r = rng::from_seed(2);
        for dim in [2, 3, 4, 8] {
            let u = random_unitary(dim, &mut r).unwrap();
            let uu = u.matmul(&u.adjoint()).unwrap();
            assert!(uu.max_abs_diff(&ComplexMatrix::identity(dim)) <= 1e-12);
            let det = determinant(&u).unwrap();
            assert!((det.norm() - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn determinant_of_diagonal() {
        let d = ComplexMatrix::diagonal(&[2.0, 3.0, -1.0]);
        assert!((determinant(&d).unwrap() - Complex64::new(-6.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rejects_tiny_dims() {
        assert!(random_unitary(1, &mut rng::from_seed(0)).is_err());
        assert!(random_ginibre_density(1, &mut rng::from_seed(0)).is_err());
    }
}
