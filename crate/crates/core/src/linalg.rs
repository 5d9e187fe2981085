// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Matrix exponentials and eigendecompositions used by the propagator.

use nalgebra::{ComplexField, DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::{Error, Result};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

fn one_norm<T: ComplexField<RealField = f64>>(a: &DMatrix<T>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.clone().modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// e^A by scaling and squaring with the degree-13 Padé approximant.
pub fn expm<T: ComplexField<RealField = f64>>(a: &DMatrix<T>) -> DMatrix<T> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    let norm = one_norm(a);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let scale = T::from_real(0.5f64.powi(s));
    let a = a * scale;
    let id = DMatrix::<T>::identity(n, n);
    let c = |k: usize| T::from_real(PADE13[k]);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * c(13) + &a4 * c(11) + &a2 * c(9)) + &a6 * c(7) + &a4 * c(5) + &a2 * c(3) + &id * c(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * c(12) + &a4 * c(10) + &a2 * c(8)) + &a6 * c(6) + &a4 * c(4) + &a2 * c(2) + &id * c(0);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Padé denominator is nonsingular for scaled input");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Eigendecomposition A = B diag(q) B⁻¹ of a general real matrix.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    pub values: Vec<Complex64>,
    pub vectors: DMatrix<Complex64>,
    pub inverse: DMatrix<Complex64>,
    /// 2-norm condition number of the eigenvector matrix.
    pub condition: f64,
}

impl Eigendecomposition {
    /// Re(B e^{qt} B⁻¹).
    pub fn exp_real(&self, t: f64) -> DMatrix<f64> {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, q) in self.values.iter().enumerate() {
            let e = (q * t).exp();
            for i in 0..n {
                scaled[(i, j)] *= e;
            }
        }
        (scaled * &self.inverse).map(|z| z.re)
    }
}

/// Diagonalizes a real square matrix through its complex Schur form; fails
/// when the eigenvector basis is numerically singular (condition > `max_condition`).
pub fn eigendecompose(a: &DMatrix<f64>, max_condition: f64) -> Result<Eigendecomposition> {
    let n = a.nrows();
    let ac = a.map(|x| Complex64::new(x, 0.0));
    let schur = Schur::try_new(ac, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numeric("Schur decomposition did not converge".into()))?;
    let (q, t) = schur.unpack();
    let scale = one_norm(&t).max(f64::MIN_POSITIVE);
    let values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    // eigenvectors of upper-triangular T by back substitution
    let mut y = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        y[(k, k)] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for j in i + 1..=k {
                s += t[(i, j)] * y[(j, k)];
            }
            let mut d = t[(i, i)] - t[(k, k)];
            if d.norm() < f64::EPSILON * scale {
                d = Complex64::new(f64::EPSILON * scale, 0.0);
            }
            y[(i, k)] = -s / d;
        }
    }
    let mut b = q * y;
    for mut col in b.column_iter_mut() {
        let nrm = col.norm();
        col /= Complex64::new(nrm, 0.0);
    }
    let sv = b.clone().svd(false, false).singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= max_condition) {
        return Err(Error::Numeric(format!(
            "eigenvector matrix is ill-conditioned (cond = {condition:.2e} > {max_condition:.0e}); use the scaling-and-squaring exponential instead"
        )));
    }
    let inverse = b
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numeric("eigenvector matrix is singular".into()))?;
    Ok(Eigendecomposition {
        values,
        vectors: b,
        inverse,
        condition,
    })
}

/// exp(−i A t) for real symmetric A through its orthogonal eigenbasis.
pub fn unitary_from_symmetric(a: &DMatrix<f64>, t: f64) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(a.clone());
    let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let phases = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, -l * t)),
    );
    let mut vp = v.clone();
    for (j, ph) in phases.iter().enumerate() {
        for z in vp.column_mut(j).iter_mut() {
            *z *= ph;
        }
    }
    vp * v.transpose()
}
