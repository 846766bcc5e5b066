//! Canonical forms of complex symmetric 3×3 matrices under SO(3,C)
//! similarity.
//!
//! Every symmetric matrix is orthogonally similar to exactly one of ten
//! normal forms built from diagonal entries and the symmetric nilpotent
//! blocks
//!
//! ```text
//! D2 = [[i, 1], [1, −i]]
//! D3 = [[0, 1+i, 0], [1+i, 0, 1−i], [0, 1−i, 0]]
//! ```
//!
//! The form is determined by the Jordan signature, so classification only
//! needs eigenvalues and ranks.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::complex_value_to_json;
use crate::linalg::{eigenvalues, jordan_signature, jordan_signature_exact, JordanSignature, Mat3};
use crate::mateq::{congruence_test_with, CongruenceOptions, CongruenceVerdict, DEFAULT_TOL};
use crate::scalar::{Complex64, ComplexValue, GaussianRational, Scalar};

/// Computed parameters within this distance of a small rational are
/// reported exactly.
const PARAM_SNAP_TOL: f64 = 1e-9;
const PARAM_SNAP_DEN: i64 = 16;
// Candidate eigenvalues for the exact path; each is verified exactly, so
// the loose tolerance only has to absorb the float error of defective roots.
const EIGEN_SNAP_TOL: f64 = 1e-4;
const EIGEN_SNAP_DEN: i64 = 1024;
const EXACT_FALLBACK_TOL: f64 = 1e-9;

/// A symmetric normal form; every parameter must be nonzero.
#[derive(Clone, Debug, PartialEq)]
pub enum SymCanonicalForm {
    /// `diag(λ₁, λ₂, λ₃)`
    Rank3Diag(ComplexValue, ComplexValue, ComplexValue),
    /// `(λ₁) ⊕ (λ₂I + D2)`
    Rank3OneBlock(ComplexValue, ComplexValue),
    /// `λI + D3`
    Rank3BigBlock(ComplexValue),
    /// `diag(λ₁, λ₂, 0)`
    Rank2Diag(ComplexValue, ComplexValue),
    /// `(λI + D2) ⊕ 0`
    Rank2Block(ComplexValue),
    /// `(λ) ⊕ D2`
    Rank2Nilp(ComplexValue),
    /// `D3`
    Rank2BigNilp,
    /// `diag(λ, 0, 0)`
    Rank1Diag(ComplexValue),
    /// `D2 ⊕ 0`
    Rank1Nilp,
    ZeroForm,
}

impl SymCanonicalForm {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Rank3Diag(..) => "Rank3Diag",
            Self::Rank3OneBlock(..) => "Rank3OneBlock",
            Self::Rank3BigBlock(_) => "Rank3BigBlock",
            Self::Rank2Diag(..) => "Rank2Diag",
            Self::Rank2Block(_) => "Rank2Block",
            Self::Rank2Nilp(_) => "Rank2Nilp",
            Self::Rank2BigNilp => "Rank2BigNilp",
            Self::Rank1Diag(_) => "Rank1Diag",
            Self::Rank1Nilp => "Rank1Nilp",
            Self::ZeroForm => "ZeroForm",
        }
    }

    pub fn params(&self) -> Vec<&ComplexValue> {
        match self {
            Self::Rank3Diag(a, b, c) => vec![a, b, c],
            Self::Rank3OneBlock(a, b) | Self::Rank2Diag(a, b) => vec![a, b],
            Self::Rank3BigBlock(a)
            | Self::Rank2Block(a)
            | Self::Rank2Nilp(a)
            | Self::Rank1Diag(a) => {
                vec![a]
            }
            Self::Rank2BigNilp | Self::Rank1Nilp | Self::ZeroForm => vec![],
        }
    }

    /// The rank of every matrix of this form.
    pub fn rank(&self) -> usize {
        match self {
            Self::Rank3Diag(..) | Self::Rank3OneBlock(..) | Self::Rank3BigBlock(_) => 3,
            Self::Rank2Diag(..) | Self::Rank2Block(_) | Self::Rank2Nilp(_) | Self::Rank2BigNilp => {
                2
            }
            Self::Rank1Diag(_) | Self::Rank1Nilp => 1,
            Self::ZeroForm => 0,
        }
    }

    /// Same form with parameters equal exactly (both exact) or to `tol`.
    pub fn same_as(&self, other: &Self, tol: f64) -> bool {
        let (p, q) = (self.params(), other.params());
        self.name() == other.name() && p.iter().zip(&q).all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "form": self.name(),
            "params": self.params().into_iter().map(complex_value_to_json).collect::<Vec<_>>(),
        })
    }
}

impl std::fmt::Display for SymCanonicalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let params: Vec<String> = self.params().iter().map(|p| p.to_string()).collect();
        if params.is_empty() {
            f.write_str(self.name())
        } else {
            write!(f, "{}({})", self.name(), params.join(", "))
        }
    }
}

/// The symmetric block `D_k` for `k ∈ {1, 2, 3}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DkBlock {
    pub size: usize,
    pub entries: Vec<Vec<GaussianRational>>,
}

impl DkBlock {
    /// The block in the top-left corner of an otherwise zero 3×3 matrix.
    pub fn embed(&self) -> Mat3<GaussianRational> {
        Mat3::from_fn(|i, j| {
            if i < self.size && j < self.size {
                self.entries[i][j].clone()
            } else {
                GaussianRational::zero()
            }
        })
    }
}

pub fn d_k_block(k: usize) -> Result<DkBlock> {
    type G = GaussianRational;
    let g = |re, im| G::complex(re, im);
    let entries = match k {
        1 => vec![vec![G::zero()]],
        2 => vec![vec![g(0, 1), g(1, 0)], vec![g(1, 0), g(0, -1)]],
        3 => vec![
            vec![g(0, 0), g(1, 1), g(0, 0)],
            vec![g(1, 1), g(0, 0), g(1, -1)],
            vec![g(0, 0), g(1, -1), g(0, 0)],
        ],
        _ => {
            return Err(Error::OutOfRange(format!(
                "D_k is defined here for k in 1..=3, got {k}"
            )))
        }
    };
    Ok(DkBlock { size: k, entries })
}

fn build<S: Scalar>(form: &SymCanonicalForm, p: &[S]) -> Mat3<S> {
    let z = S::zero;
    let i = S::imag_unit;
    let one = S::one;
    let d2 = |l: S, at: usize| {
        // λI + D2 in rows/cols (at, at+1)
        let mut m = Mat3::zero();
        m.m[at][at] = l.clone() + i();
        m.m[at][at + 1] = one();
        m.m[at + 1][at] = one();
        m.m[at + 1][at + 1] = l - i();
        m
    };
    let d3 = |l: S| {
        let a = one() + i();
        let b = one() - i();
        Mat3::from_rows([
            [l.clone(), a.clone(), z()],
            [a, l.clone(), b.clone()],
            [z(), b, l],
        ])
    };
    match form {
        SymCanonicalForm::Rank3Diag(..) => Mat3::diag(p[0].clone(), p[1].clone(), p[2].clone()),
        SymCanonicalForm::Rank3OneBlock(..) => {
            let mut m = d2(p[1].clone(), 1);
            m.m[0][0] = p[0].clone();
            m
        }
        SymCanonicalForm::Rank3BigBlock(_) => d3(p[0].clone()),
        SymCanonicalForm::Rank2Diag(..) => Mat3::diag(p[0].clone(), p[1].clone(), z()),
        SymCanonicalForm::Rank2Block(_) => d2(p[0].clone(), 0),
        SymCanonicalForm::Rank2Nilp(_) => {
            let mut m = d2(z(), 1);
            m.m[0][0] = p[0].clone();
            m
        }
        SymCanonicalForm::Rank2BigNilp => d3(z()),
        SymCanonicalForm::Rank1Diag(_) => Mat3::diag(p[0].clone(), z(), z()),
        SymCanonicalForm::Rank1Nilp => d2(z(), 0),
        SymCanonicalForm::ZeroForm => Mat3::zero(),
    }
}

fn check_nonzero(form: &SymCanonicalForm) -> Result<()> {
    if form
        .params()
        .iter()
        .any(|p| p.to_c64() == Complex64::zero())
    {
        return Err(Error::InvalidParameter(format!(
            "{form}: all constants must be nonzero"
        )));
    }
    Ok(())
}

/// The exact matrix of a form; parameters must be exact and nonzero.
pub fn canonical_matrix(form: &SymCanonicalForm) -> Result<Mat3<GaussianRational>> {
    check_nonzero(form)?;
    let params = form
        .params()
        .into_iter()
        .map(|p| match p {
            ComplexValue::Exact(g) => Ok(g.clone()),
            ComplexValue::Float(z) => Err(Error::InvalidParameter(format!(
                "exact canonical matrix needs exact parameters, got {z}"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(build(form, &params))
}

/// The matrix of a form in double precision.
pub fn canonical_matrix_c64(form: &SymCanonicalForm) -> Result<Mat3<Complex64>> {
    check_nonzero(form)?;
    let params: Vec<Complex64> = form
        .params()
        .into_iter()
        .map(ComplexValue::to_c64)
        .collect();
    Ok(build(form, &params))
}

fn snap(z: Complex64) -> ComplexValue {
    GaussianRational::approximate(z, PARAM_SNAP_DEN, PARAM_SNAP_TOL)
        .map_or(ComplexValue::Float(z), ComplexValue::Exact)
}

/// Sorts by real part, then imaginary part; parts within `tol` count as
/// equal.
fn sort_lex(values: &mut [Complex64], tol: f64) {
    values.sort_by(|a, b| {
        let by = |x: f64, y: f64| {
            if (x - y).abs() <= tol {
                std::cmp::Ordering::Equal
            } else {
                x.total_cmp(&y)
            }
        };
        by(a.re, b.re).then(by(a.im, b.im))
    });
}

fn form_from_signature(
    sig: &JordanSignature<Complex64>,
    zero_tol: f64,
) -> Option<SymCanonicalForm> {
    let mut zero: Option<Vec<usize>> = None;
    let mut rest: Vec<(Complex64, Vec<usize>)> = Vec::new();
    for b in &sig.blocks {
        if b.eigenvalue.norm() <= zero_tol {
            if zero.is_some() {
                return None;
            }
            zero = Some(b.sizes.clone());
        } else {
            rest.push((b.eigenvalue, b.sizes.clone()));
        }
    }
    let diagonal = rest.iter().all(|(_, s)| s.iter().all(|&n| n == 1));
    let mut simple: Vec<Complex64> = rest
        .iter()
        .flat_map(|(l, s)| std::iter::repeat_n(*l, s.len()))
        .collect();
    sort_lex(&mut simple, zero_tol);
    let with_size = |n: usize| rest.iter().find(|(_, s)| s.contains(&n)).map(|(l, _)| *l);
    let sv = |z: Complex64| snap(z);
    use SymCanonicalForm as F;
    let form = match zero.as_deref() {
        None if diagonal => F::Rank3Diag(sv(simple[0]), sv(simple[1]), sv(simple[2])),
        None => match rest.as_slice() {
            [(l, s)] if s == &[3] => F::Rank3BigBlock(sv(*l)),
            [(l, s)] if s == &[2, 1] => F::Rank3OneBlock(sv(*l), sv(*l)),
            [_, _] => F::Rank3OneBlock(sv(with_size(1)?), sv(with_size(2)?)),
            _ => return None,
        },
        Some([1]) if diagonal => F::Rank2Diag(sv(simple[0]), sv(simple[1])),
        Some([1]) => F::Rank2Block(sv(with_size(2)?)),
        Some([2]) => F::Rank2Nilp(sv(with_size(1)?)),
        Some([3]) => F::Rank2BigNilp,
        Some([1, 1]) => F::Rank1Diag(sv(simple[0])),
        Some([2, 1]) => F::Rank1Nilp,
        Some([1, 1, 1]) => F::ZeroForm,
        Some(_) => return None,
    };
    Some(form)
}

fn require_symmetric<S: Scalar>(s: &Mat3<S>, tol: f64) -> Result<()> {
    let skew = s.antisym_part();
    let ok = if S::EXACT {
        skew.is_zero()
    } else {
        skew.frobenius_norm() * 2.0 <= tol * s.frobenius_norm().max(1.0)
    };
    if ok {
        Ok(())
    } else {
        Err(Error::NotSymmetric { tol })
    }
}

/// The normal form orthogonally similar to a symmetric matrix.
///
/// Works in double precision via [`jordan_signature`]; the rank is read off
/// the signature (number of nonzero eigenvalues plus nilpotent blocks of
/// size above one) rather than from singular values, which under a badly
/// conditioned similarity can fall below any fixed threshold. Eigenvalues within
/// `1e−9` of a rational with denominator at most 16 are reported exactly.
/// Diagonal parameters are sorted by real then imaginary part.
pub fn classify_symmetric<S: Scalar>(s: &Mat3<S>, tol: f64) -> Result<SymCanonicalForm> {
    require_symmetric(s, tol)?;
    let a = s.to_c64().checked()?;
    if S::EXACT {
        if let Some(sig) = exact_signature(s, &a) {
            return form_from_signature(&sig, 0.0).ok_or(Error::IllConditioned { tol });
        }
    }
    let tol = if S::EXACT {
        tol.max(EXACT_FALLBACK_TOL)
    } else {
        tol
    };
    let scale = a.frobenius_norm().max(1.0);
    let sig = jordan_signature(&a, tol)?;
    form_from_signature(&sig, tol * scale).ok_or(Error::IllConditioned { tol })
}

/// Exact signature of an exact matrix whose eigenvalues are all Gaussian
/// rationals of moderate height; `None` otherwise.
fn exact_signature<S: Scalar>(
    s: &Mat3<S>,
    a: &Mat3<Complex64>,
) -> Option<JordanSignature<Complex64>> {
    let exact = Mat3::from_fn(|i, j| match s.m[i][j].to_value() {
        ComplexValue::Exact(g) => g,
        ComplexValue::Float(_) => unreachable!("exact scalar"),
    });
    let eigs: Option<Vec<GaussianRational>> = eigenvalues(a)
        .iter()
        .map(|&z| GaussianRational::approximate(z, EIGEN_SNAP_DEN, EIGEN_SNAP_TOL))
        .collect();
    jordan_signature_exact(&exact, &eigs?)
        .ok()
        .map(|sig| sig.to_c64())
}

/// An SO(3,C) matrix `T` with `T′·S1·T = S2`, searched like
/// [`crate::mateq::congruence_test`].
pub fn find_orthogonal_similarity<S: Scalar>(
    s1: &Mat3<S>,
    s2: &Mat3<S>,
    budget: usize,
    seed: u64,
) -> Result<CongruenceVerdict> {
    require_symmetric(s1, DEFAULT_TOL)?;
    require_symmetric(s2, DEFAULT_TOL)?;
    let opts = CongruenceOptions {
        budget,
        seed,
        ..CongruenceOptions::default()
    };
    Ok(congruence_test_with(s1, s2, &opts))
}

/// One instance of each form with parameters 1, (1, 2) or (1, 2, 3).
pub fn sample_forms() -> Vec<SymCanonicalForm> {
    let e = |n: i64| ComplexValue::Exact(GaussianRational::from_i64(n));
    use SymCanonicalForm as F;
    vec![
        F::Rank3Diag(e(1), e(2), e(3)),
        F::Rank3OneBlock(e(1), e(2)),
        F::Rank3BigBlock(e(1)),
        F::Rank2Diag(e(1), e(2)),
        F::Rank2Block(e(1)),
        F::Rank2Nilp(e(1)),
        F::Rank2BigNilp,
        F::Rank1Diag(e(1)),
        F::Rank1Nilp,
        F::ZeroForm,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::jordan_signature_exact;
    use crate::mateq::congruate;
    use crate::so3c::{is_special_orthogonal, random_so3};

    type G = GaussianRational;

    fn e(n: i64) -> ComplexValue {
        ComplexValue::Exact(G::from_i64(n))
    }

    #[test]
    fn dk_blocks() {
        assert_eq!(d_k_block(1).unwrap().entries, vec![vec![G::zero()]]);
        let d2 = d_k_block(2).unwrap().embed();
        let d3 = d_k_block(3).unwrap().embed();
        for (d, k) in [(&d2, 2), (&d3, 3)] {
            assert_eq!(d.transpose(), *d);
            assert!(!d.pow(k - 1).is_zero());
            assert!(d.pow(k).is_zero());
        }
        assert!(matches!(d_k_block(4), Err(Error::OutOfRange(_))));
        assert!(matches!(d_k_block(0), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(
            canonical_matrix(&SymCanonicalForm::ZeroForm).unwrap(),
            Mat3::zero()
        );
        let g = |re, im| G::complex(re, im);
        assert_eq!(
            canonical_matrix(&SymCanonicalForm::Rank1Nilp).unwrap(),
            Mat3::from_rows([
                [g(0, 1), g(1, 0), g(0, 0)],
                [g(1, 0), g(0, -1), g(0, 0)],
                [g(0, 0), g(0, 0), g(0, 0)],
            ])
        );
        assert_eq!(
            canonical_matrix(&SymCanonicalForm::Rank2BigNilp).unwrap(),
            d_k_block(3).unwrap().embed()
        );
        assert!(matches!(
            canonical_matrix(&SymCanonicalForm::Rank1Diag(e(0))),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn canonical_matrices_symmetric_with_stratum_rank() {
        for f in sample_forms() {
            let m = canonical_matrix(&f).unwrap();
            assert_eq!(m.transpose(), m, "{f}");
            assert_eq!(m.rank(0.0), f.rank(), "{f}");
        }
    }

    #[test]
    fn exact_signatures_pairwise_distinct() {
        let eigs: Vec<G> = [0, 1, 2, 3].into_iter().map(G::from_i64).collect();
        let sigs: Vec<_> = sample_forms()
            .iter()
            .map(|f| {
                let m = canonical_matrix(f).unwrap();
                let present: Vec<G> = eigs
                    .iter()
                    .filter(|l| (&m - &Mat3::identity().scale(l)).det().is_zero())
                    .cloned()
                    .collect();
                jordan_signature_exact(&m, &present).unwrap()
            })
            .collect();
        for i in 0..sigs.len() {
            for j in (i + 1)..sigs.len() {
                assert_ne!(sigs[i], sigs[j], "forms {i} and {j}");
            }
        }
    }

    #[test]
    fn round_trip_exact() {
        for f in sample_forms() {
            let m = canonical_matrix(&f).unwrap();
            assert_eq!(classify_symmetric(&m, 1e-6).unwrap(), f);
        }
        let diag = Mat3::diag(G::from_i64(3), G::from_i64(1), G::from_i64(2));
        assert_eq!(
            classify_symmetric(&diag, 1e-6).unwrap(),
            SymCanonicalForm::Rank3Diag(e(1), e(2), e(3))
        );
    }

    #[test]
    fn equal_parameters() {
        use SymCanonicalForm as F;
        let forms = [
            F::Rank3Diag(e(2), e(2), e(5)),
            F::Rank3OneBlock(e(2), e(2)),
            F::Rank2Diag(e(-1), e(-1)),
        ];
        for f in forms {
            let m = canonical_matrix(&f).unwrap();
            assert_eq!(classify_symmetric(&m, 1e-6).unwrap(), f);
        }
    }

    #[test]
    fn stable_under_orthogonal_similarity() {
        for (n, f) in sample_forms().into_iter().enumerate() {
            let m = canonical_matrix_c64(&f).unwrap();
            for seed in 0..5 {
                let t = random_so3(1000 * n as u64 + seed).t;
                let b = congruate(&m, &t, 1e-9).unwrap();
                let got = classify_symmetric(&b, 1e-6).unwrap();
                assert!(got.same_as(&f, 1e-6), "{f} -> {got}");
            }
        }
    }

    #[test]
    fn family_five_symmetrizer_shape() {
        let g = |a: i64, b: i64, c: i64, d: i64| G::from_fracs(a, b, c, d);
        let m = Mat3::from_rows([
            [g(-1, 2, 1, 1), g(1, 1, 0, 1), G::zero()],
            [g(1, 1, 0, 1), g(-1, 2, -1, 1), G::zero()],
            [G::zero(), G::zero(), G::zero()],
        ]);
        assert_eq!(
            classify_symmetric(&m, 1e-6).unwrap(),
            SymCanonicalForm::Rank2Block(ComplexValue::Exact(g(-1, 2, 0, 1)))
        );
    }

    #[test]
    fn rejects_non_symmetric() {
        let mut m = Mat3::<G>::identity();
        m.m[0][1] = G::one();
        assert_eq!(
            classify_symmetric(&m, 1e-6),
            Err(Error::NotSymmetric { tol: 1e-6 })
        );
    }

    #[test]
    fn signed_permutations_reorder_diagonals() {
        let z = G::zero;
        let p = Mat3::from_rows([
            [z(), G::one(), z()],
            [G::one(), z(), z()],
            [z(), z(), G::from_i64(-1)],
        ]);
        assert!(is_special_orthogonal(&p, 0.0));
        let d = Mat3::diag(G::from_i64(1), G::from_i64(2), G::from_i64(3));
        let swapped = congruate(&d, &p, 0.0).unwrap();
        assert_eq!(
            swapped,
            Mat3::diag(G::from_i64(2), G::from_i64(1), G::from_i64(3))
        );
    }

    #[test]
    fn orthogonal_similarity_search() {
        let a = canonical_matrix(&SymCanonicalForm::Rank1Diag(e(2))).unwrap();
        assert_eq!(
            find_orthogonal_similarity(&a, &a, 4, 0).unwrap(),
            CongruenceVerdict::Congruent(Mat3::identity())
        );
        let ac = a.to_c64();
        let b = congruate(&ac, &random_so3(17).t, 1e-9).unwrap();
        let v = find_orthogonal_similarity(&ac, &b, 64, 0).unwrap();
        assert!(v.witness().is_some(), "{v:?}");

        let one = canonical_matrix(&SymCanonicalForm::Rank1Diag(e(1))).unwrap();
        let nil = canonical_matrix(&SymCanonicalForm::Rank1Nilp).unwrap();
        assert!(matches!(
            find_orthogonal_similarity(&one, &nil, 4, 0).unwrap(),
            CongruenceVerdict::NotCongruent(_)
        ));
        let mut skew = Mat3::<G>::zero();
        skew.m[0][1] = G::one();
        assert!(find_orthogonal_similarity(&skew, &skew, 4, 0).is_err());
    }

    #[test]
    fn json_shape() {
        let v = SymCanonicalForm::Rank2Diag(e(1), e(2)).to_json();
        assert_eq!(v["form"], "Rank2Diag");
        assert_eq!(v["params"].as_array().unwrap().len(), 2);
    }
}
