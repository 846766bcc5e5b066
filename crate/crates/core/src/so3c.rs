//! The complex special orthogonal group SO(3,C) and its relation to
//! automorphisms of sl(2,C).
//!
//! A linear map on sl(2,C) is a Lie automorphism exactly when its matrix
//! (rows = images of the basis) lies in SO(3,C); equivalently `(T*)′ = T`.
//! Every invertible 2×2 matrix `P` induces such a map `X ↦ PXP⁻¹`.
//!
//! Under the row-vector convention composition reverses order:
//! `adjoint_rep(PQ) = adjoint_rep(Q) · adjoint_rep(P)`. For example
//! `P = [[0,1],[−1,0]] = 2e₁` commutes with `e₁` and negates `e₂, e₃`, so
//! `adjoint_rep(P) = diag(1, −1, −1)`.

use std::ops::{Add, Mul, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::json::{self, JsonScalar};
use crate::linalg::{Mat3, Vec3};
use crate::scalar::{Complex64, GaussianRational, Scalar};
use crate::sl2;

/// Tolerance at which sampled floating elements are certified.
pub const SAMPLE_TOL: f64 = 1e-10;
const MAX_RESAMPLES: usize = 100;

/// A 2×2 matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2<S> {
    pub m: [[S; 2]; 2],
}

impl<S: Scalar> Mat2<S> {
    pub fn new(m: [[S; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn zero() -> Self {
        Self::new([[S::zero(), S::zero()], [S::zero(), S::zero()]])
    }

    pub fn identity() -> Self {
        Self::new([[S::one(), S::zero()], [S::zero(), S::one()]])
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.m[i][j].clone() * c.clone())
        }))
    }

    pub fn trace(&self) -> S {
        self.m[0][0].clone() + self.m[1][1].clone()
    }

    pub fn det(&self) -> S {
        self.m[0][0].clone() * self.m[1][1].clone() - self.m[0][1].clone() * self.m[1][0].clone()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|x| x.modulus().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// `None` when the determinant is zero (exact) or has modulus at most
    /// `tol · ‖P‖²` (floating).
    pub fn inverse(&self, tol: f64) -> Option<Self> {
        let d = self.det();
        if d.is_negligible(tol * self.frobenius_norm().powi(2)) {
            return None;
        }
        let [[a, b], [c, dd]] = self.m.clone();
        let inv = S::one() / d;
        Some(Self::new([[dd, -b], [-c, a]]).scale(&inv))
    }

    pub fn to_c64(&self) -> Mat2<Complex64> {
        Mat2::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.m[i][j].to_c64())
        }))
    }
}

impl<S: JsonScalar> Mat2<S> {
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.m
                .iter()
                .map(|row| Value::Array(row.iter().map(JsonScalar::to_json).collect()))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let shape = || Error::Parse("2×2 matrix must be a 2×2 nested array".into());
        let rows = v.as_array().filter(|a| a.len() == 2).ok_or_else(shape)?;
        let mut out = Self::zero();
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().filter(|a| a.len() == 2).ok_or_else(shape)?;
            for (j, x) in row.iter().enumerate() {
                out.m[i][j] = S::from_json(x)?;
            }
        }
        Ok(out)
    }
}

/// Whether a 2×2 matrix document uses exact scalars.
pub fn mat2_is_exact(v: &Value) -> Result<bool> {
    json::depth_kind(v, 2)
}

impl<S: Scalar> Add for &Mat2<S> {
    type Output = Mat2<S>;
    fn add(self, rhs: Self) -> Mat2<S> {
        Mat2::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.m[i][j].clone() + rhs.m[i][j].clone())
        }))
    }
}

impl<S: Scalar> Sub for &Mat2<S> {
    type Output = Mat2<S>;
    fn sub(self, rhs: Self) -> Mat2<S> {
        Mat2::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.m[i][j].clone() - rhs.m[i][j].clone())
        }))
    }
}

impl<S: Scalar> Mul for &Mat2<S> {
    type Output = Mat2<S>;
    fn mul(self, rhs: Self) -> Mat2<S> {
        Mat2::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                self.m[i][0].clone() * rhs.m[0][j].clone()
                    + self.m[i][1].clone() * rhs.m[1][j].clone()
            })
        }))
    }
}

/// An element of SO(3,C) together with the tolerance it was verified at.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalMatrix<S> {
    pub t: Mat3<S>,
    pub tol: f64,
}

impl<S: Scalar> OrthogonalMatrix<S> {
    pub fn new(t: Mat3<S>, tol: f64) -> Result<Self> {
        if is_special_orthogonal(&t, tol) {
            Ok(Self { t, tol })
        } else {
            Err(Error::NotOrthogonal { tol })
        }
    }
}

/// `‖T′T − I‖_F` and `|det T − 1|`.
pub fn membership_residuals<S: Scalar>(t: &Mat3<S>) -> (f64, f64) {
    let gram = &(&t.transpose() * t) - &Mat3::identity();
    (gram.frobenius_norm(), (t.det() - S::one()).modulus())
}

/// `TT′ = T′T = I₃` and `det T = 1`, exactly or to `tol`.
pub fn is_special_orthogonal<S: Scalar>(t: &Mat3<S>, tol: f64) -> bool {
    let id = Mat3::identity();
    let tt = t.transpose();
    (&(&tt * t) - &id).is_negligible(tol)
        && (&(t * &tt) - &id).is_negligible(tol)
        && (t.det() - S::one()).is_negligible(tol)
}

/// The antisymmetric matrix `[[0,a,b],[−a,0,c],[−b,−c,0]]`.
pub fn antisymmetric<S: Scalar>(a: S, b: S, c: S) -> Mat3<S> {
    let z = S::zero;
    Mat3::from_rows([
        [z(), a.clone(), b.clone()],
        [-a, z(), c.clone()],
        [-b, -c, z()],
    ])
}

/// Cayley transform `(I − K)⁻¹(I + K)` of an antisymmetric `K`; `None` when
/// `I − K` is singular.
pub fn cayley_exact(k: &Mat3<GaussianRational>) -> Option<Mat3<GaussianRational>> {
    let id = Mat3::identity();
    let inv = (&id - k).inverse_exact()?;
    Some(&inv * &(&id + k))
}

/// Floating Cayley transform; `None` when `|det(I − K)| < 1e−6`.
pub fn cayley(k: &Mat3<Complex64>) -> Option<Mat3<Complex64>> {
    let id = Mat3::identity();
    let inv = (&id - k).inverse(1e-6)?;
    Some(&inv * &(&id + k))
}

fn unit_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
}

/// A floating SO(3,C) sample drawn from an existing generator.
pub fn random_so3_from<R: Rng>(rng: &mut R) -> OrthogonalMatrix<Complex64> {
    for _ in 0..MAX_RESAMPLES {
        let k = antisymmetric(unit_complex(rng), unit_complex(rng), unit_complex(rng));
        if let Some(t) = cayley(&k) {
            if let Ok(o) = OrthogonalMatrix::new(t, SAMPLE_TOL) {
                return o;
            }
        }
    }
    panic!("random_so3: {MAX_RESAMPLES} consecutive degenerate Cayley samples");
}

/// Deterministic floating SO(3,C) sample via the Cayley transform of an
/// antisymmetric matrix with entries uniform in the unit complex square.
pub fn random_so3(seed: u64) -> OrthogonalMatrix<Complex64> {
    random_so3_from(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn small_gaussian_rational<R: Rng>(rng: &mut R) -> GaussianRational {
    GaussianRational::from_fracs(
        rng.random_range(-4..=4),
        rng.random_range(1..=4),
        rng.random_range(-4..=4),
        rng.random_range(1..=4),
    )
}

/// An exact SO(3,C) sample with Gaussian-rational entries.
pub fn random_so3_exact_from<R: Rng>(rng: &mut R) -> Mat3<GaussianRational> {
    for _ in 0..MAX_RESAMPLES {
        let k = antisymmetric(
            small_gaussian_rational(rng),
            small_gaussian_rational(rng),
            small_gaussian_rational(rng),
        );
        if let Some(t) = cayley_exact(&k) {
            return t;
        }
    }
    panic!("random_so3_exact: {MAX_RESAMPLES} consecutive singular Cayley samples");
}

pub fn random_so3_exact(seed: u64) -> Mat3<GaussianRational> {
    random_so3_exact_from(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// The matrix of `X ↦ PXP⁻¹` on sl(2,C): row `i` holds the coordinates of
/// `P eᵢ P⁻¹`.
pub fn adjoint_rep<S: Scalar>(p: &Mat2<S>) -> Result<Mat3<S>> {
    let inv = p.inverse(1e-14).ok_or(Error::Singular)?;
    let mut out = Mat3::zero();
    for i in 0..3 {
        let img = &(p * &sl2::basis_2x2::<S>(i)) * &inv;
        out.m[i] = sl2::from_2x2(&img).0;
    }
    Ok(out)
}

/// Whether the map with `φ(eᵢ)` = row `i` of `T` preserves the bracket on
/// all basis pairs: `[φ(eᵢ), φ(eⱼ)] = φ([eᵢ, eⱼ])`.
pub fn automorphism_check<S: Scalar>(t: &Mat3<S>, tol: f64) -> bool {
    for i in 0..3 {
        for j in (i + 1)..3 {
            let lhs = sl2::bracket(&t.row(i), &t.row(j));
            let rhs = sl2::bracket(&Vec3::basis(i), &Vec3::basis(j)).mul_mat(t);
            if !(lhs - rhs).is_negligible(tol) {
                return false;
            }
        }
    }
    true
}

/// `(T*)′ − T`, zero exactly for automorphisms.
pub fn appendix_residual<S: Scalar>(t: &Mat3<S>) -> Mat3<S> {
    &t.adjugate().transpose() - t
}
