//! The Lie algebra sl(2,C) in the basis {e₁, e₂, e₃} with
//! `[e₂,e₃] = e₁`, `[e₃,e₁] = e₂`, `[e₁,e₂] = e₃`, bilinear products as
//! structure constants, and checkers for the PostLie, Jacobi and
//! Rota–Baxter identities.
//!
//! In coordinates the bracket is the cross product. A product of the form
//! `x∘y = [f(x), y]` is stored through the matrix `A` of `f`, whose row `i`
//! holds the coordinates of `f(eᵢ)`.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::{self, JsonScalar};
use crate::linalg::{Mat3, Vec3};
use crate::scalar::Scalar;
use crate::so3c::Mat2;

/// Relative tolerance used when recovering `A` from floating structure
/// constants.
pub const ADJOINT_FORM_TOL: f64 = 1e-10;

/// `eᵢ∘eⱼ = Σₖ c[i][j][k] eₖ`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants<S> {
    pub c: [[[S; 3]; 3]; 3],
}

impl<S: Scalar> StructureConstants<S> {
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Vec3<S>) -> Self {
        Self {
            c: std::array::from_fn(|i| std::array::from_fn(|j| f(i, j).0)),
        }
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| Vec3::zero())
    }

    /// The structure constants of the sl(2,C) bracket itself.
    pub fn lie_bracket() -> Self {
        #[cfg(debug_assertions)]
        {
            static CHECKED: std::sync::Once = std::sync::Once::new();
            CHECKED.call_once(|| {
                let b = Self::from_fn(|i, j| bracket(&Vec3::basis(i), &Vec3::basis(j)));
                assert!(
                    check_jacobi(&b, 0.0).is_empty(),
                    "sl(2) bracket fails Jacobi"
                );
            });
        }
        Self::from_fn(|i, j| bracket(&Vec3::basis(i), &Vec3::basis(j)))
    }

    /// `eᵢ∘eⱼ` as coordinates.
    pub fn basis_product(&self, i: usize, j: usize) -> Vec3<S> {
        Vec3(self.c[i][j].clone())
    }

    /// Bilinear extension to arbitrary coordinate vectors.
    pub fn product(&self, x: &Vec3<S>, y: &Vec3<S>) -> Vec3<S> {
        let mut out = Vec3::zero();
        for i in 0..3 {
            if x.0[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                if y.0[j].is_zero() {
                    continue;
                }
                let coeff = x.0[i].clone() * y.0[j].clone();
                out = out + self.basis_product(i, j).scale(&coeff);
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.c
            .iter()
            .flatten()
            .flatten()
            .map(|x| x.modulus().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let diff = Self::from_fn(|i, j| self.basis_product(i, j) - other.basis_product(i, j));
        if S::EXACT {
            diff.c.iter().flatten().flatten().all(Scalar::is_zero)
        } else {
            diff.frobenius_norm() <= tol
        }
    }
}

impl<S: JsonScalar> StructureConstants<S> {
    /// `{"c": 3×3×3 nested array}`.
    pub fn to_json(&self) -> Value {
        let c: Vec<Value> = self
            .c
            .iter()
            .map(|plane| {
                Value::Array(
                    plane
                        .iter()
                        .map(|v| Value::Array(v.iter().map(JsonScalar::to_json).collect()))
                        .collect(),
                )
            })
            .collect();
        json!({ "c": c })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let c = v
            .get("c")
            .ok_or_else(|| Error::Parse("structure constants need field `c`".into()))?;
        let planes = c
            .as_array()
            .filter(|a| a.len() == 3)
            .ok_or_else(|| Error::Parse("`c` must be a 3×3×3 array".into()))?;
        let mut out = Self::zero();
        for (i, plane) in planes.iter().enumerate() {
            let rows = plane
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| Error::Parse("`c` must be a 3×3×3 array".into()))?;
            for (j, row) in rows.iter().enumerate() {
                out.c[i][j] = json::vec_from_json::<S>(row)?.0;
            }
        }
        if out.c.iter().flatten().flatten().all(Scalar::is_finite) {
            Ok(out)
        } else {
            Err(Error::NonFinite)
        }
    }
}

/// Whether a structure-constant document uses exact scalars.
pub fn structure_constants_are_exact(v: &Value) -> Result<bool> {
    let c = v
        .get("c")
        .ok_or_else(|| Error::Parse("structure constants need field `c`".into()))?;
    json::depth_kind(c, 3)
}

/// `[x, y]`: the cross product of coordinate triples.
pub fn bracket<S: Scalar>(x: &Vec3<S>, y: &Vec3<S>) -> Vec3<S> {
    x.cross(y)
}

/// The basis element `eᵢ` as a traceless 2×2 matrix:
/// `e₁ = ½[[0,1],[−1,0]]`, `e₂ = (1/2i)[[0,1],[1,0]]`, `e₃ = (1/2i)[[1,0],[0,−1]]`.
pub fn basis_2x2<S: Scalar>(i: usize) -> Mat2<S> {
    let half = S::from_ratio(1, 2);
    let over_2i = -S::imag_unit() * half.clone();
    let z = S::zero;
    match i {
        0 => Mat2::new([[z(), half.clone()], [-half, z()]]),
        1 => Mat2::new([[z(), over_2i.clone()], [over_2i, z()]]),
        2 => Mat2::new([[over_2i.clone(), z()], [z(), -over_2i]]),
        _ => panic!("basis index {i} out of range"),
    }
}

/// `Σ xᵢ eᵢ` as a 2×2 matrix.
pub fn to_2x2<S: Scalar>(x: &Vec3<S>) -> Mat2<S> {
    (0..3).fold(Mat2::zero(), |acc, i| {
        &acc + &basis_2x2::<S>(i).scale(&x.0[i])
    })
}

/// Coordinates of a traceless 2×2 matrix via the pairing
/// `⟨X, Y⟩ = −2·tr(XY)`, under which {e₁, e₂, e₃} is orthonormal.
pub fn from_2x2<S: Scalar>(x: &Mat2<S>) -> Vec3<S> {
    let minus_two = S::from_i64(-2);
    Vec3(std::array::from_fn(|i| {
        (x * &basis_2x2::<S>(i)).trace() * minus_two.clone()
    }))
}

/// `[x, y]` computed as a 2×2 commutator.
pub fn bracket_via_2x2<S: Scalar>(x: &Vec3<S>, y: &Vec3<S>) -> Vec3<S> {
    let (a, b) = (to_2x2(x), to_2x2(y));
    from_2x2(&(&(&a * &b) - &(&b * &a)))
}

/// `eᵢ∘eⱼ = [f(eᵢ), eⱼ]` with `f(eᵢ)` = row `i` of `A`.
pub fn circ_from_matrix<S: Scalar>(a: &Mat3<S>) -> StructureConstants<S> {
    StructureConstants::from_fn(|i, j| bracket(&a.row(i), &Vec3::basis(j)))
}

/// The unique `A` with `circ_from_matrix(A) = c`.
///
/// Row `i` solves `fᵢ × eⱼ = eᵢ∘eⱼ` for `j = 1, 2, 3`. The coefficient
/// columns are orthogonal, so the least-squares solution is
/// `fᵢ = ½ Σⱼ eⱼ × (eᵢ∘eⱼ)`; the system is consistent exactly when that
/// solution reproduces all three products.
pub fn matrix_from_circ<S: Scalar>(c: &StructureConstants<S>) -> Result<Mat3<S>> {
    let half = S::from_ratio(1, 2);
    let tol = ADJOINT_FORM_TOL * c.frobenius_norm().max(1.0);
    let mut a = Mat3::zero();
    for i in 0..3 {
        let f = (0..3)
            .fold(Vec3::zero(), |acc, j| {
                acc + Vec3::basis(j).cross(&c.basis_product(i, j))
            })
            .scale(&half);
        for j in 0..3 {
            let r = bracket(&f, &Vec3::basis(j)) - c.basis_product(i, j);
            if !r.is_negligible(tol) {
                return Err(Error::NotAdjointForm);
            }
        }
        a.m[i] = f.0;
    }
    Ok(a)
}

/// `{x, y} = x∘y − y∘x + [x, y]`.
pub fn derived_bracket<S: Scalar>(c: &StructureConstants<S>) -> StructureConstants<S> {
    StructureConstants::from_fn(|i, j| {
        c.basis_product(i, j) - c.basis_product(j, i) + bracket(&Vec3::basis(i), &Vec3::basis(j))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    PostLie3,
    PostLie4,
    Jacobi,
    Antisymmetry,
    RotaBaxter,
}

impl Identity {
    pub fn name(self) -> &'static str {
        match self {
            Self::PostLie3 => "postlie-3",
            Self::PostLie4 => "postlie-4",
            Self::Jacobi => "jacobi",
            Self::Antisymmetry => "antisymmetry",
            Self::RotaBaxter => "rota-baxter",
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A failed identity on a tuple of basis indices (0-based).
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityViolation<S> {
    pub identity: Identity,
    pub indices: Vec<usize>,
    pub residual: Vec3<S>,
}

impl<S: JsonScalar> IdentityViolation<S> {
    /// `{identity, indices, residual}` with 1-based basis indices.
    pub fn to_json(&self) -> Value {
        json!({
            "identity": self.identity.name(),
            "indices": self.indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "residual": json::vec_to_json(&self.residual),
        })
    }
}

pub fn violations_to_json<S: JsonScalar>(v: &[IdentityViolation<S>]) -> Value {
    Value::Array(v.iter().map(IdentityViolation::to_json).collect())
}

fn record<S: Scalar>(
    out: &mut Vec<IdentityViolation<S>>,
    identity: Identity,
    indices: &[usize],
    residual: Vec3<S>,
    tol: f64,
) {
    if !residual.is_negligible(tol) {
        out.push(IdentityViolation {
            identity,
            indices: indices.to_vec(),
            residual,
        });
    }
}

/// Evaluates the two PostLie axioms involving `∘` on all 27 basis triples
/// `(x, y, z) = (eᵢ, eⱼ, eₖ)`:
///
/// * `z∘(y∘x) − y∘(z∘x) + (y∘z)∘x − (z∘y)∘x + [y,z]∘x = 0`
/// * `z∘[x,y] − [z∘x, y] − [x, z∘y] = 0`
///
/// Antisymmetry and Jacobi of the fixed bracket are not re-checked here.
pub fn check_postlie<S: Scalar>(c: &StructureConstants<S>, tol: f64) -> Vec<IdentityViolation<S>> {
    let _ = StructureConstants::<S>::lie_bracket();
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let (x, y, z) = (Vec3::basis(i), Vec3::basis(j), Vec3::basis(k));
                let p = |a: &Vec3<S>, b: &Vec3<S>| c.product(a, b);
                let r3 = p(&z, &p(&y, &x)) - p(&y, &p(&z, &x)) + p(&p(&y, &z), &x)
                    - p(&p(&z, &y), &x)
                    + p(&bracket(&y, &z), &x);
                record(&mut out, Identity::PostLie3, &[i, j, k], r3, tol);
                let r4 =
                    p(&z, &bracket(&x, &y)) - bracket(&p(&z, &x), &y) - bracket(&x, &p(&z, &y));
                record(&mut out, Identity::PostLie4, &[i, j, k], r4, tol);
            }
        }
    }
    out
}

/// Antisymmetry on all pairs and the Jacobi identity
/// `[[x,y],z] + [[z,x],y] + [[y,z],x] = 0` on all basis triples.
pub fn check_jacobi<S: Scalar>(b: &StructureConstants<S>, tol: f64) -> Vec<IdentityViolation<S>> {
    let mut out = Vec::new();
    for i in 0..3 {
        for j in i..3 {
            let r = b.basis_product(i, j) + b.basis_product(j, i);
            record(&mut out, Identity::Antisymmetry, &[i, j], r, tol);
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let (x, y, z) = (Vec3::basis(i), Vec3::basis(j), Vec3::basis(k));
                let br = |a: &Vec3<S>, c: &Vec3<S>| b.product(a, c);
                let r = br(&br(&x, &y), &z) + br(&br(&z, &x), &y) + br(&br(&y, &z), &x);
                record(&mut out, Identity::Jacobi, &[i, j, k], r, tol);
            }
        }
    }
    out
}

/// `[f(x), f(y)] − f([f(x), y] + [x, f(y)] + [x, y])` on all 9 basis pairs,
/// with `f(x) = x·A`.
pub fn check_rota_baxter<S: Scalar>(a: &Mat3<S>, tol: f64) -> Vec<IdentityViolation<S>> {
    let f = |x: &Vec3<S>| x.mul_mat(a);
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let (x, y) = (Vec3::basis(i), Vec3::basis(j));
            let (fx, fy) = (f(&x), f(&y));
            let inner = bracket(&fx, &y) + bracket(&x, &fy) + bracket(&x, &y);
            let r = bracket(&fx, &fy) - f(&inner);
            record(&mut out, Identity::RotaBaxter, &[i, j], r, tol);
        }
    }
    out
}
