//! Fixed-size 3×3 matrix algebra over exact or floating complex scalars.
//!
//! Coordinates are row vectors: a linear map `f` with `f(eᵢ) = Σⱼ aᵢⱼ eⱼ`
//! acts on a coordinate row `x` as `x·A`, so row `i` of `A` is `f(eᵢ)`.

mod eigen;

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::scalar::{Complex64, Scalar};

pub use eigen::{
    eigenvalues, jordan_signature, jordan_signature_exact, EigenBlock, JordanSignature,
};

/// Relative singular-value threshold for floating rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;
/// Eigenvalue clustering tolerance for Jordan signatures.
pub const DEFAULT_JORDAN_TOL: f64 = 1e-6;

/// A coordinate row vector in the basis {e₁, e₂, e₃}.
#[derive(Clone, Debug, PartialEq)]
pub struct Vec3<S>(pub [S; 3]);

impl<S: Scalar> Vec3<S> {
    pub fn zero() -> Self {
        Self(std::array::from_fn(|_| S::zero()))
    }

    /// The basis vector e_{i+1}.
    pub fn basis(i: usize) -> Self {
        Self(std::array::from_fn(|j| {
            if i == j {
                S::one()
            } else {
                S::zero()
            }
        }))
    }

    pub fn cross(&self, other: &Self) -> Self {
        let [a0, a1, a2] = &self.0;
        let [b0, b1, b2] = &other.0;
        Self([
            a1.clone() * b2.clone() - a2.clone() * b1.clone(),
            a2.clone() * b0.clone() - a0.clone() * b2.clone(),
            a0.clone() * b1.clone() - a1.clone() * b0.clone(),
        ])
    }

    /// Bilinear pairing `Σ xᵢyᵢ` (no conjugation).
    pub fn dot(&self, other: &Self) -> S {
        (0..3).fold(S::zero(), |acc, i| {
            acc + self.0[i].clone() * other.0[i].clone()
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        Self(std::array::from_fn(|i| self.0[i].clone() * c.clone()))
    }

    /// Row vector times matrix.
    pub fn mul_mat(&self, a: &Mat3<S>) -> Self {
        Self(std::array::from_fn(|j| {
            (0..3).fold(S::zero(), |acc, k| {
                acc + self.0[k].clone() * a[(k, j)].clone()
            })
        }))
    }

    pub fn norm(&self) -> f64 {
        self.0
            .iter()
            .map(|x| x.modulus().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        if S::EXACT {
            self.0.iter().all(Scalar::is_zero)
        } else {
            self.norm() <= tol
        }
    }

    pub fn to_c64(&self) -> Vec3<Complex64> {
        Vec3(std::array::from_fn(|i| self.0[i].to_c64()))
    }
}

impl<S: Scalar> Add for Vec3<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = rhs.0;
        Self([a0 + b0, a1 + b1, a2 + b2])
    }
}

impl<S: Scalar> Sub for Vec3<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = rhs.0;
        Self([a0 - b0, a1 - b1, a2 - b2])
    }
}

impl<S: Scalar> Neg for Vec3<S> {
    type Output = Self;
    fn neg(self) -> Self {
        let [a0, a1, a2] = self.0;
        Self([-a0, -a1, -a2])
    }
}

/// A 3×3 matrix with homogeneous scalar kind.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat3<S> {
    pub m: [[S; 3]; 3],
}

impl<S> Index<(usize, usize)> for Mat3<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.m[i][j]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat3<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.m[i][j]
    }
}

impl<S: Scalar> Mat3<S> {
    pub fn from_rows(m: [[S; 3]; 3]) -> Self {
        Self { m }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> S) -> Self {
        Self {
            m: std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))),
        }
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| S::zero())
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn diag(a: S, b: S, c: S) -> Self {
        let d = [a, b, c];
        Self::from_fn(|i, j| if i == j { d[i].clone() } else { S::zero() })
    }

    /// Column `α` times row `β`.
    pub fn outer(alpha: &Vec3<S>, beta: &Vec3<S>) -> Self {
        Self::from_fn(|i, j| alpha.0[i].clone() * beta.0[j].clone())
    }

    pub fn row(&self, i: usize) -> Vec3<S> {
        Vec3(self.m[i].clone())
    }

    pub fn map<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> Mat3<T> {
        Mat3::from_fn(|i, j| f(&self.m[i][j]))
    }

    pub fn to_c64(&self) -> Mat3<Complex64> {
        self.map(Scalar::to_c64)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.m[j][i].clone())
    }

    /// Cofactor `C_{ij}` using the cyclic 3×3 formula.
    fn cofactor(&self, i: usize, j: usize) -> S {
        let (i1, i2) = ((i + 1) % 3, (i + 2) % 3);
        let (j1, j2) = ((j + 1) % 3, (j + 2) % 3);
        self.m[i1][j1].clone() * self.m[i2][j2].clone()
            - self.m[i1][j2].clone() * self.m[i2][j1].clone()
    }

    /// Transposed cofactor matrix; `A · adj(A) = det(A) · I`.
    pub fn adjugate(&self) -> Self {
        Self::from_fn(|i, j| self.cofactor(j, i))
    }

    pub fn det(&self) -> S {
        (0..3).fold(S::zero(), |acc, j| {
            acc + self.m[0][j].clone() * self.cofactor(0, j)
        })
    }

    pub fn trace(&self) -> S {
        self.m[0][0].clone() + self.m[1][1].clone() + self.m[2][2].clone()
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn pow(&self, p: u32) -> Self {
        (0..p).fold(Self::identity(), |acc, _| &acc * self)
    }

    /// `(c2, c1, c0)` with `det(λI − A) = λ³ + c2λ² + c1λ + c0`.
    pub fn char_poly(&self) -> (S, S, S) {
        (-self.trace(), self.adjugate().trace(), -self.det())
    }

    pub fn sym_part(&self) -> Self {
        let half = S::from_ratio(1, 2);
        Self::from_fn(|i, j| (self.m[i][j].clone() + self.m[j][i].clone()) * half.clone())
    }

    pub fn antisym_part(&self) -> Self {
        let half = S::from_ratio(1, 2);
        Self::from_fn(|i, j| (self.m[i][j].clone() - self.m[j][i].clone()) * half.clone())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|x| x.modulus().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().flatten().all(Scalar::is_zero)
    }

    /// Exactly zero, or Frobenius norm at most `tol` for floating scalars.
    pub fn is_negligible(&self, tol: f64) -> bool {
        if S::EXACT {
            self.is_zero()
        } else {
            self.frobenius_norm() <= tol
        }
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.antisym_part().is_negligible(tol / 2.0)
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(Scalar::is_finite)
    }

    /// Fails with [`Error::NonFinite`] on NaN or infinite entries.
    pub fn checked(self) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Row-reduction rank over the field for exact scalars; for floating
    /// scalars the number of singular values above `tol · σ_max`.
    pub fn rank(&self, tol: f64) -> usize {
        if S::EXACT {
            exact_rank(self)
        } else {
            let sv = singular_values(&self.to_c64());
            let smax = sv[0];
            if smax == 0.0 {
                return 0;
            }
            sv.iter().filter(|&&s| s > tol * smax).count()
        }
    }

    /// Row-reduction rank for exact scalars; for floating scalars the
    /// number of singular values above `tol · scale`. Use this when the
    /// matrix may be numerically zero and `σ_max` is meaningless.
    pub fn rank_scaled(&self, tol: f64, scale: f64) -> usize {
        if S::EXACT {
            exact_rank(self)
        } else {
            singular_values(&self.to_c64())
                .iter()
                .filter(|&&s| s > tol * scale)
                .count()
        }
    }

    /// Returns `(α, β)` with `A = α′·β` and the first nonzero entry of `α`
    /// equal to one.
    pub fn rank1_factorization(&self) -> Result<(Vec3<S>, Vec3<S>)> {
        let r = self.rank(DEFAULT_RANK_TOL);
        if r != 1 {
            return Err(Error::RankMismatch {
                expected: 1,
                found: r,
            });
        }
        let scale = self.frobenius_norm();
        let row_is_zero = |i: usize| self.row(i).is_negligible(DEFAULT_RANK_TOL * scale);
        let lead = (0..3).find(|&i| !row_is_zero(i)).ok_or(Error::Singular)?;
        let beta = self.row(lead);
        // Divide by the largest entry of β for numerical stability.
        let pivot = (0..3)
            .max_by(|&a, &b| beta.0[a].modulus().total_cmp(&beta.0[b].modulus()))
            .expect("three entries");
        let alpha = Vec3(std::array::from_fn(|i| {
            if i < lead {
                S::zero()
            } else if i == lead {
                S::one()
            } else {
                self.m[i][pivot].clone() / beta.0[pivot].clone()
            }
        }));
        Ok((alpha, beta))
    }
}

impl Mat3<Complex64> {
    /// Singular values in descending order.
    pub fn singular_values(&self) -> [f64; 3] {
        singular_values(self)
    }

    /// Number of singular values strictly above an absolute threshold.
    pub fn rank_abs(&self, threshold: f64) -> usize {
        singular_values(self)
            .iter()
            .filter(|&&s| s > threshold)
            .count()
    }

    /// Inverse via the adjugate; `None` when `|det| <= tol`.
    pub fn inverse(&self, tol: f64) -> Option<Self> {
        let d = self.det();
        if d.norm() <= tol {
            return None;
        }
        Some(self.adjugate().scale(&(Complex64::new(1.0, 0.0) / d)))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).frobenius_norm() <= tol
    }
}

impl Mat3<crate::scalar::GaussianRational> {
    /// Exact inverse via the adjugate; `None` for singular matrices.
    pub fn inverse_exact(&self) -> Option<Self> {
        let d = self.det().inv()?;
        Some(self.adjugate().scale(&d))
    }
}

fn to_nalgebra(a: &Mat3<Complex64>) -> Matrix3<Complex64> {
    Matrix3::from_fn(|i, j| a.m[i][j])
}

fn singular_values(a: &Mat3<Complex64>) -> [f64; 3] {
    let sv = to_nalgebra(a).singular_values();
    let mut out = [sv[0], sv[1], sv[2]];
    out.sort_by(|x, y| y.total_cmp(x));
    out
}

fn exact_rank<S: Scalar>(a: &Mat3<S>) -> usize {
    let mut rows: Vec<[S; 3]> = a.m.to_vec();
    let mut rank = 0;
    for col in 0..3 {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in (rank + 1)..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone() / pivot.clone();
            for c in col..3 {
                let v = rows[rank][c].clone() * factor.clone();
                rows[r][c] = rows[r][c].clone() - v;
            }
        }
        rank += 1;
    }
    rank
}

impl<S: Scalar> Add for &Mat3<S> {
    type Output = Mat3<S>;
    fn add(self, rhs: Self) -> Mat3<S> {
        Mat3::from_fn(|i, j| self.m[i][j].clone() + rhs.m[i][j].clone())
    }
}

impl<S: Scalar> Sub for &Mat3<S> {
    type Output = Mat3<S>;
    fn sub(self, rhs: Self) -> Mat3<S> {
        Mat3::from_fn(|i, j| self.m[i][j].clone() - rhs.m[i][j].clone())
    }
}

impl<S: Scalar> Mul for &Mat3<S> {
    type Output = Mat3<S>;
    fn mul(self, rhs: Self) -> Mat3<S> {
        Mat3::from_fn(|i, j| {
            (0..3).fold(S::zero(), |acc, k| {
                acc + self.m[i][k].clone() * rhs.m[k][j].clone()
            })
        })
    }
}

impl<S: Scalar> Neg for &Mat3<S> {
    type Output = Mat3<S>;
    fn neg(self) -> Mat3<S> {
        self.map(|x| -x.clone())
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl<S: Scalar> $tr for Mat3<S> {
            type Output = Mat3<S>;
            fn $f(self, rhs: Self) -> Mat3<S> {
                (&self).$f(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as G;

    fn gi(re: i64, im: i64) -> G {
        G::complex(re, im)
    }

    fn q(n: i64, d: i64) -> G {
        G::from_ratio(n, d)
    }

    fn int_mat(rows: [[i64; 3]; 3]) -> Mat3<G> {
        Mat3::from_fn(|i, j| G::from_i64(rows[i][j]))
    }

    #[test]
    fn transpose_cases() {
        let i3 = Mat3::<G>::identity();
        assert_eq!(i3.transpose(), i3);
        let e12 = int_mat([[0, 1, 0], [0, 0, 0], [0, 0, 0]]);
        assert_eq!(e12.transpose(), int_mat([[0, 0, 0], [1, 0, 0], [0, 0, 0]]));
    }

    #[test]
    fn adjugate_cases() {
        let i3 = Mat3::<G>::identity();
        assert_eq!(i3.adjugate(), i3);
        let minus = -&i3;
        assert_eq!(minus.adjugate(), i3);
        let d = Mat3::diag(gi(2, 0), gi(0, 3), q(1, 5));
        let expect = Mat3::diag(gi(0, 3) * q(1, 5), q(1, 5) * gi(2, 0), gi(2, 0) * gi(0, 3));
        assert_eq!(d.adjugate(), expect);
    }

    #[test]
    fn trace_det_char_poly() {
        let minus = -&Mat3::<G>::identity();
        assert_eq!(minus.trace(), G::from_i64(-3));
        assert_eq!(minus.det(), G::from_i64(-1));
        assert_eq!(
            minus.char_poly(),
            (G::from_i64(3), G::from_i64(3), G::from_i64(1))
        );
        assert_eq!(
            Mat3::<G>::zero().char_poly(),
            (G::zero(), G::zero(), G::zero())
        );
        let d = Mat3::diag(G::from_i64(1), G::from_i64(2), G::from_i64(3));
        assert_eq!(
            d.char_poly(),
            (G::from_i64(-6), G::from_i64(11), G::from_i64(-6))
        );
    }

    #[test]
    fn exact_and_floating_rank() {
        assert_eq!(Mat3::<G>::zero().rank(0.0), 0);
        assert_eq!(Mat3::<Complex64>::zero().rank(1e-8), 0);
        let r2 = int_mat([[1, 2, 3], [2, 4, 6], [0, 1, 1]]);
        assert_eq!(r2.rank(0.0), 2);
        assert_eq!(r2.to_c64().rank(1e-8), 2);
        assert_eq!(Mat3::<G>::identity().rank(0.0), 3);
    }

    #[test]
    fn rank1_factorization_cases() {
        let e11 = int_mat([[1, 0, 0], [0, 0, 0], [0, 0, 0]]);
        let (a, b) = e11.rank1_factorization().unwrap();
        assert_eq!(a, Vec3::basis(0));
        assert_eq!(b, Vec3::basis(0));
        assert_eq!(
            Mat3::<G>::identity().rank1_factorization(),
            Err(Error::RankMismatch {
                expected: 1,
                found: 3
            })
        );
    }

    #[test]
    fn sym_antisym_reconstruct() {
        let a = Mat3::from_fn(|i, j| gi(i as i64 - 2 * j as i64, (i * j) as i64 - 1));
        assert_eq!(&a.sym_part() + &a.antisym_part(), a);
        assert!(Mat3::<G>::identity().antisym_part().is_zero());
        let s = a.sym_part();
        assert_eq!(s.sym_part(), s);
    }

    #[test]
    fn inverse_exact() {
        let a = int_mat([[2, 1, 0], [0, 1, 0], [1, 0, 1]]);
        let inv = a.inverse_exact().unwrap();
        assert_eq!(&a * &inv, Mat3::identity());
        assert!(Mat3::<G>::zero().inverse_exact().is_none());
    }

    #[test]
    fn non_finite_rejected() {
        let mut a = Mat3::<Complex64>::identity();
        a[(1, 2)] = Complex64::new(f64::NAN, 0.0);
        assert_eq!(a.checked(), Err(Error::NonFinite));
    }
}
