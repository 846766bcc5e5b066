//! The matrix equation `A′((tr A + 1)I₃ − A) = A*`, its five solution
//! families, the SO(3,C) congruence action and a classifier.
//!
//! Classification uses congruence invariants only:
//!
//! | rank(A) | further test                   | family          |
//! |---------|--------------------------------|-----------------|
//! | 0       |                                | `Zero`          |
//! | 3       |                                | `MinusIdentity` |
//! | 1       | rank(sym(A) + ½I) = 1 / 2      | `KFamily(0)` / `NonSymRank1` |
//! | 2       | tr A ≠ −2                      | `KFamily(tr A + 1)` |
//! | 2       | tr A = −2, rank(A′A) = 2 / 1   | `TraceMinus2` / `KFamily(−1)` |
//!
//! Congruence `A ↦ T′AT` with `T ∈ SO(3,C)` is an orthogonal similarity, so
//! characteristic polynomials and ranks of `A`, `A′A` and `sym(A)` are
//! invariant.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::{complex_value_to_json, mat_to_json};
use crate::linalg::{jordan_signature, Mat3};
use crate::scalar::{Complex64, ComplexValue, GaussianRational, Scalar};
use crate::so3c::is_special_orthogonal;

/// Starts tried by the witness search unless told otherwise.
pub const DEFAULT_BUDGET: usize = 64;
/// Tolerance for `T′T − I` and `T′AT − B` when accepting a witness.
pub const WITNESS_TOL: f64 = 1e-8;
/// Default tolerance for invariant comparisons and classification.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Floating KFamily parameters within this distance of a rational with
/// denominator at most [`K_SNAP_DEN`] are reported exactly.
pub const K_SNAP_TOL: f64 = 1e-9;
pub const K_SNAP_DEN: i64 = 16;

/// One of the five families of solutions.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyTag {
    Zero,
    MinusIdentity,
    TraceMinus2,
    KFamily(ComplexValue),
    NonSymRank1,
}

impl FamilyTag {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Zero => "Zero",
            Self::MinusIdentity => "MinusIdentity",
            Self::TraceMinus2 => "TraceMinus2",
            Self::KFamily(_) => "KFamily",
            Self::NonSymRank1 => "NonSymRank1",
        }
    }

    pub fn k(&self) -> Option<&ComplexValue> {
        match self {
            Self::KFamily(k) => Some(k),
            _ => None,
        }
    }

    /// Equal families, with KFamily parameters compared exactly when both
    /// are exact and to `tol` otherwise.
    pub fn same_as(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (Self::KFamily(a), Self::KFamily(b)) => a.approx_eq(b, tol),
            _ => self == other,
        }
    }

    pub fn kfamily_exact(k: GaussianRational) -> Self {
        Self::KFamily(ComplexValue::Exact(k))
    }
}

impl std::fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::KFamily(k) => write!(f, "KFamily({k})"),
            other => f.write_str(other.name()),
        }
    }
}

/// The representative matrix of a family over any scalar field; `k` is
/// ignored except for `KFamily`.
fn family_matrix<S: Scalar>(tag: &FamilyTag, k: S) -> Mat3<S> {
    let z = S::zero;
    let i = S::imag_unit;
    let half = || S::from_ratio(1, 2);
    match tag {
        FamilyTag::Zero => Mat3::zero(),
        FamilyTag::MinusIdentity => -&Mat3::identity(),
        FamilyTag::TraceMinus2 => {
            let a = -(S::one() + i()) * half();
            let b = (i() - S::one()) * half();
            Mat3::from_rows([
                [-S::one(), z(), z()],
                [z(), a.clone(), b.clone()],
                [z(), a, b],
            ])
        }
        FamilyTag::KFamily(_) => Mat3::from_rows([
            [k, z(), z()],
            [z(), -half(), i() * half()],
            [z(), -(i() * half()), -half()],
        ]),
        FamilyTag::NonSymRank1 => Mat3::from_rows([
            [-half() + i(), S::one() - i() * half(), z()],
            [S::one() + i() * half(), -half() - i(), z()],
            [z(), z(), z()],
        ]),
    }
}

/// The exact representative of a family. Fails for a floating KFamily
/// parameter.
pub fn representative(tag: &FamilyTag) -> Result<Mat3<GaussianRational>> {
    let k = match tag {
        FamilyTag::KFamily(ComplexValue::Exact(k)) => k.clone(),
        FamilyTag::KFamily(ComplexValue::Float(z)) => {
            return Err(Error::InvalidParameter(format!(
                "exact representative needs an exact k, got {z}"
            )))
        }
        _ => GaussianRational::zero(),
    };
    Ok(family_matrix(tag, k))
}

/// The representative in double precision; any KFamily parameter works.
pub fn representative_c64(tag: &FamilyTag) -> Mat3<Complex64> {
    let k = tag.k().map_or(Complex64::zero(), ComplexValue::to_c64);
    family_matrix(tag, k)
}

/// `A′((tr A + 1)I₃ − A) − A*`.
pub fn residual<S: Scalar>(a: &Mat3<S>) -> Mat3<S> {
    let shifted = &Mat3::identity().scale(&(a.trace() + S::one())) - a;
    &(&a.transpose() * &shifted) - &a.adjugate()
}

/// Exactly zero residual for exact scalars, Frobenius norm below `tol`
/// for floating ones.
pub fn is_solution<S: Scalar>(a: &Mat3<S>, tol: f64) -> bool {
    let r = residual(a);
    if S::EXACT {
        r.is_zero()
    } else {
        r.frobenius_norm() < tol
    }
}

/// `T′AT`, provided `T ∈ SO(3,C)` to `tol`.
pub fn congruate<S: Scalar>(a: &Mat3<S>, t: &Mat3<S>, tol: f64) -> Result<Mat3<S>> {
    if !is_special_orthogonal(t, tol) {
        return Err(Error::NotOrthogonal { tol });
    }
    Ok(&(&t.transpose() * a) * t)
}

/// `(tr A + 1)A′A − A′A·A`; vanishes on rank-2 solutions.
pub fn rank2_identity_residual<S: Scalar>(a: &Mat3<S>) -> Mat3<S> {
    let ata = &a.transpose() * a;
    &ata.scale(&(a.trace() + S::one())) - &(&ata * a)
}

/// `(tr A + 1)A′ − A′A`; vanishes on rank-1 solutions.
pub fn rank1_identity_residual<S: Scalar>(a: &Mat3<S>) -> Mat3<S> {
    let at = a.transpose();
    &at.scale(&(a.trace() + S::one())) - &(&at * a)
}

/// A named invariant value recorded by the classifier.
#[derive(Clone, Debug, PartialEq)]
pub enum InvariantValue {
    Rank(usize),
    Scalar(ComplexValue),
}

impl InvariantValue {
    fn to_json(&self) -> Value {
        match self {
            Self::Rank(r) => json!(r),
            Self::Scalar(c) => complex_value_to_json(c),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub tag: FamilyTag,
    pub residual_norm: f64,
    pub invariants_used: Vec<(String, InvariantValue)>,
    /// `T ∈ SO(3,C)` with `T′·representative·T` equal to the input.
    pub witness: Option<Mat3<Complex64>>,
}

impl ClassificationReport {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "tag": self.tag.name(),
            "residual_norm": self.residual_norm,
            "invariants": self
                .invariants_used
                .iter()
                .map(|(n, x)| json!([n, x.to_json()]))
                .collect::<Vec<_>>(),
        });
        if let Some(k) = self.tag.k() {
            v["k"] = complex_value_to_json(k);
        }
        if let Some(w) = &self.witness {
            v["witness"] = mat_to_json(w);
        }
        v
    }
}

fn snap_k(k: ComplexValue) -> ComplexValue {
    match k {
        ComplexValue::Float(z) => GaussianRational::approximate(z, K_SNAP_DEN, K_SNAP_TOL)
            .map_or(ComplexValue::Float(z), ComplexValue::Exact),
        exact => exact,
    }
}

/// Identifies the family of a solution.
///
/// For floating input, with `s = max(1, ‖A‖)`, the residual must be below
/// `tol · s²` and ranks count singular values above `tol · s` (`tol · s²`
/// for `A′A`); exact input is decided exactly.
pub fn classify<S: Scalar>(a: &Mat3<S>, tol: f64) -> Result<ClassificationReport> {
    let scale = a.frobenius_norm().max(1.0);
    let residual_norm = residual(a).frobenius_norm();
    let ok = if S::EXACT {
        residual(a).is_zero()
    } else {
        residual_norm <= tol * scale * scale
    };
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    if !ok {
        return Err(Error::NotASolution { residual_norm });
    }

    let mut used = Vec::new();
    let rank = a.rank_scaled(tol, scale);
    used.push(("rank(A)".to_string(), InvariantValue::Rank(rank)));
    let tr = a.trace();
    let inconclusive = |what: &str| Err(Error::Inconclusive(what.to_string()));

    let tag = match rank {
        0 => FamilyTag::Zero,
        3 => {
            let off = (a + &Mat3::identity()).is_negligible(tol * scale);
            if !off {
                return inconclusive("rank-3 solution differs from -I");
            }
            FamilyTag::MinusIdentity
        }
        1 => {
            let shifted = &a.sym_part() + &Mat3::identity().scale(&S::from_ratio(1, 2));
            let r = shifted.rank_scaled(tol, scale);
            used.push(("rank(sym(A)+½I)".to_string(), InvariantValue::Rank(r)));
            match r {
                1 => FamilyTag::kfamily_exact(GaussianRational::zero()),
                2 => FamilyTag::NonSymRank1,
                _ => {
                    return inconclusive("rank(sym(A)+½I) is neither 1 nor 2 on a rank-1 solution")
                }
            }
        }
        _ => {
            used.push(("tr(A)".to_string(), InvariantValue::Scalar(tr.to_value())));
            let plus_two = tr.clone() + S::from_i64(2);
            if plus_two.is_negligible(tol * scale) {
                let ata = &a.transpose() * a;
                let r = ata.rank_scaled(tol, scale);
                used.push(("rank(A′A)".to_string(), InvariantValue::Rank(r)));
                match r {
                    2 => FamilyTag::TraceMinus2,
                    1 => FamilyTag::kfamily_exact(GaussianRational::from_i64(-1)),
                    _ => return inconclusive("rank(A′A) is neither 1 nor 2 at trace -2"),
                }
            } else {
                let k = tr + S::one();
                if k.is_negligible(tol * scale) {
                    return inconclusive("rank-2 solution with k = 0");
                }
                FamilyTag::KFamily(snap_k(k.to_value()))
            }
        }
    };
    Ok(ClassificationReport {
        tag,
        residual_norm,
        invariants_used: used,
        witness: None,
    })
}

/// [`classify`] followed by a witness search against the representative.
/// The report carries a witness only when the search succeeds.
pub fn classify_with_witness<S: Scalar>(
    a: &Mat3<S>,
    tol: f64,
    budget: usize,
    seed: u64,
) -> Result<ClassificationReport> {
    let mut report = classify(a, tol)?;
    let rep = representative_c64(&report.tag);
    let opts = CongruenceOptions {
        budget,
        seed,
        tol,
        ..CongruenceOptions::default()
    };
    if let CongruenceVerdict::Congruent(t) = congruence_test_with(&rep, &a.to_c64(), &opts) {
        report.witness = Some(t);
    }
    Ok(report)
}

/// Outcome of a congruence test.
#[derive(Clone, Debug, PartialEq)]
pub enum CongruenceVerdict {
    /// `T ∈ SO(3,C)` with `T′AT = B`, verified.
    Congruent(Mat3<Complex64>),
    /// Name of an invariant that separates the inputs.
    NotCongruent(String),
    /// No witness found within the given number of starts.
    Unknown(usize),
}

impl CongruenceVerdict {
    pub fn to_json(&self) -> Value {
        match self {
            Self::Congruent(t) => json!({"verdict": "congruent", "witness": mat_to_json(t)}),
            Self::NotCongruent(name) => {
                json!({"verdict": "not_congruent", "separating_invariant": name})
            }
            Self::Unknown(n) => json!({"verdict": "unknown", "attempts": n}),
        }
    }

    pub fn witness(&self) -> Option<&Mat3<Complex64>> {
        match self {
            Self::Congruent(t) => Some(t),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CongruenceOptions {
    pub budget: usize,
    pub seed: u64,
    /// Invariant comparison tolerance; mismatches must exceed `10·tol`.
    pub tol: f64,
    pub witness_tol: f64,
}

impl Default for CongruenceOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            seed: 0,
            tol: DEFAULT_TOL,
            witness_tol: WITNESS_TOL,
        }
    }
}

pub fn congruence_test<S: Scalar>(
    a: &Mat3<S>,
    b: &Mat3<S>,
    budget: usize,
    seed: u64,
) -> CongruenceVerdict {
    congruence_test_with(
        a,
        b,
        &CongruenceOptions {
            budget,
            seed,
            ..CongruenceOptions::default()
        },
    )
}

/// Decides whether `B = T′AT` for some `T ∈ SO(3,C)`.
///
/// An invariant prefilter may prove the inputs inequivalent; otherwise a
/// seeded multistart Gauss–Newton search looks for `T` in the solution
/// space of `AT = TB`. Failure to find one yields `Unknown`.
pub fn congruence_test_with<S: Scalar>(
    a: &Mat3<S>,
    b: &Mat3<S>,
    opts: &CongruenceOptions,
) -> CongruenceVerdict {
    if let Some(name) = separating_invariant(a, b, opts.tol) {
        return CongruenceVerdict::NotCongruent(name);
    }
    let (a, b) = (a.to_c64(), b.to_c64());
    let id = Mat3::identity();
    if verify_witness(&a, &b, &id, opts.witness_tol) {
        return CongruenceVerdict::Congruent(id);
    }
    match search_witness(&a, &b, opts) {
        Some(t) => CongruenceVerdict::Congruent(t),
        None => CongruenceVerdict::Unknown(opts.budget),
    }
}

/// Whether `T′T = I`, `det T = 1` and `T′AT = B` hold to `tol`, the last
/// relative to `max(1, ‖A‖, ‖B‖)`.
pub fn verify_witness(
    a: &Mat3<Complex64>,
    b: &Mat3<Complex64>,
    t: &Mat3<Complex64>,
    tol: f64,
) -> bool {
    let scale = 1f64.max(a.frobenius_norm()).max(b.frobenius_norm());
    let gram = &(&t.transpose() * t) - &Mat3::identity();
    let image = &(&(&t.transpose() * a) * t) - b;
    gram.frobenius_norm() <= tol
        && (t.det() - Complex64::one()).norm() <= tol
        && image.frobenius_norm() <= tol * scale
}

fn separating_invariant<S: Scalar>(a: &Mat3<S>, b: &Mat3<S>, tol: f64) -> Option<String> {
    let s = 1f64.max(a.frobenius_norm()).max(b.frobenius_norm());
    let differ = |x: &S, y: &S, deg: i32| {
        if S::EXACT {
            x != y
        } else {
            (x.clone() - y.clone()).modulus() > 10.0 * tol * s.powi(deg)
        }
    };
    let poly_differs = |p: (S, S, S), q: (S, S, S), deg: i32| {
        differ(&p.0, &q.0, deg) || differ(&p.1, &q.1, 2 * deg) || differ(&p.2, &q.2, 3 * deg)
    };
    let rank_differs = |x: &Mat3<S>, y: &Mat3<S>, deg: i32| {
        let sc = s.powi(deg);
        x.rank_scaled(tol, sc) != y.rank_scaled(tol, sc)
            && (S::EXACT || x.rank_scaled(10.0 * tol, sc) != y.rank_scaled(10.0 * tol, sc))
    };
    let ata = &a.transpose() * a;
    let btb = &b.transpose() * b;

    if poly_differs(a.char_poly(), b.char_poly(), 1) {
        return Some("char_poly(A)".into());
    }
    if poly_differs(ata.char_poly(), btb.char_poly(), 2) {
        return Some("char_poly(A′A)".into());
    }
    if rank_differs(a, b, 1) {
        return Some("rank(A)".into());
    }
    if rank_differs(&ata, &btb, 2) {
        return Some("rank(A′A)".into());
    }
    if poly_differs(a.sym_part().char_poly(), b.sym_part().char_poly(), 1) {
        return Some("char_poly(sym(A))".into());
    }
    let jordan_differs = |x: &Mat3<Complex64>, y: &Mat3<Complex64>, t: f64| match (
        jordan_signature(x, t),
        jordan_signature(y, t),
    ) {
        (Ok(p), Ok(q)) => !p.same_type(&q, t.sqrt() * s),
        _ => false,
    };
    let (ac, bc) = (a.to_c64(), b.to_c64());
    if jordan_differs(&ac, &bc, tol) && jordan_differs(&ac, &bc, 10.0 * tol) {
        return Some("jordan(A)".into());
    }
    let (sa, sb) = (ac.sym_part(), bc.sym_part());
    if jordan_differs(&sa, &sb, tol) && jordan_differs(&sa, &sb, 10.0 * tol) {
        return Some("jordan(sym(A))".into());
    }
    None
}

/// Basis of `{T : AT = TB}` from the singular vectors of the 9×9 map.
fn commutant_basis(a: &Mat3<Complex64>, b: &Mat3<Complex64>) -> Vec<Mat3<Complex64>> {
    let idx = |i: usize, j: usize| 3 * i + j;
    let mut l = DMatrix::<Complex64>::zeros(9, 9);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                // (AT)_ij = Σ_k A_ik T_kj ; (TB)_ij = Σ_k T_ik B_kj
                l[(idx(i, j), idx(k, j))] += a.m[i][k];
                l[(idx(i, j), idx(i, k))] -= b.m[k][j];
            }
        }
    }
    let scale = 1f64.max(a.frobenius_norm()).max(b.frobenius_norm());
    let svd = l.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    (0..9)
        .filter(|&r| svd.singular_values[r] <= 1e-8 * scale)
        .map(|r| Mat3::from_fn(|i, j| v_t[(r, idx(i, j))].conj()))
        .collect()
}

const UPPER: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

fn combine(basis: &[Mat3<Complex64>], c: &DVector<Complex64>) -> Mat3<Complex64> {
    basis
        .iter()
        .zip(c.iter())
        .fold(Mat3::zero(), |acc, (n, ci)| &acc + &n.scale(ci))
}

/// Gauss–Newton on `T′T = I` with `T` restricted to the span of `basis`.
fn orthogonalize(basis: &[Mat3<Complex64>], mut c: DVector<Complex64>) -> Option<Mat3<Complex64>> {
    let id = Mat3::<Complex64>::identity();
    for _ in 0..80 {
        let t = combine(basis, &c);
        let gram = &(&t.transpose() * &t) - &id;
        let f = DVector::from_iterator(6, UPPER.iter().map(|&(i, j)| gram.m[i][j]));
        if f.norm() < 1e-14 {
            return Some(t);
        }
        let jac = DMatrix::from_fn(6, basis.len(), |r, m| {
            let (i, j) = UPPER[r];
            let d = &(&basis[m].transpose() * &t) + &(&t.transpose() * &basis[m]);
            d.m[i][j]
        });
        let svd = jac.svd(true, true);
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let step = svd.solve(&(-f), 1e-12 * smax.max(1e-300)).ok()?;
        c += step;
        if !c.iter().all(|z| z.is_finite()) || c.norm() > 1e8 {
            return None;
        }
    }
    let t = combine(basis, &c);
    ((&(&t.transpose() * &t) - &id).frobenius_norm() < 1e-12).then_some(t)
}

fn search_witness(
    a: &Mat3<Complex64>,
    b: &Mat3<Complex64>,
    opts: &CongruenceOptions,
) -> Option<Mat3<Complex64>> {
    let basis = commutant_basis(a, b);
    if basis.is_empty() {
        return None;
    }
    let attempt = |start: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(start as u64);
        let c0 = DVector::from_fn(basis.len(), |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let norm = combine(&basis, &c0).frobenius_norm();
        if norm == 0.0 {
            return None;
        }
        let c0 = c0 * Complex64::new(3f64.sqrt() / norm, 0.0);
        let mut t = orthogonalize(&basis, c0)?;
        if (t.det() + Complex64::one()).norm() < 0.5 {
            t = -&t;
        }
        verify_witness(a, b, &t, opts.witness_tol).then_some(t)
    };
    (0..opts.budget).into_par_iter().find_map_first(attempt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::so3c::{random_so3, random_so3_exact};

    type G = GaussianRational;

    fn all_tags() -> Vec<FamilyTag> {
        vec![
            FamilyTag::Zero,
            FamilyTag::MinusIdentity,
            FamilyTag::TraceMinus2,
            FamilyTag::kfamily_exact(G::zero()),
            FamilyTag::kfamily_exact(G::from_i64(-1)),
            FamilyTag::kfamily_exact(G::from_i64(5)),
            FamilyTag::kfamily_exact(G::i()),
            FamilyTag::NonSymRank1,
        ]
    }

    #[test]
    fn residual_examples() {
        assert!(residual(&Mat3::<G>::zero()).is_zero());
        assert!(residual(&-&Mat3::<G>::identity()).is_zero());
        assert_eq!(
            residual(&Mat3::<G>::identity()),
            Mat3::identity().scale(&G::from_i64(2))
        );
    }

    #[test]
    fn representatives_are_exact_solutions() {
        for tag in all_tags() {
            assert!(is_solution(&representative(&tag).unwrap(), 0.0), "{tag}");
        }
        let k = FamilyTag::kfamily_exact(G::complex(7, 1));
        assert!(is_solution(&representative(&k).unwrap(), 0.0));
        assert!(!is_solution(&Mat3::<G>::identity(), 0.0));
        assert!(
            representative(&FamilyTag::KFamily(ComplexValue::Float(Complex64::one()))).is_err()
        );
    }

    #[test]
    fn representative_values() {
        let k0 = representative(&FamilyTag::kfamily_exact(G::zero())).unwrap();
        let h = G::from_ratio(1, 2);
        let ih = G::from_fracs(0, 1, 1, 2);
        assert_eq!(
            k0,
            Mat3::from_rows([
                [G::zero(), G::zero(), G::zero()],
                [G::zero(), -h.clone(), ih.clone()],
                [G::zero(), -ih, -h],
            ])
        );
        assert_eq!(
            representative(&FamilyTag::MinusIdentity).unwrap(),
            -&Mat3::identity()
        );
    }

    #[test]
    fn reduction_identities() {
        let r = |t: FamilyTag| representative(&t).unwrap();
        assert!(rank2_identity_residual(&r(FamilyTag::TraceMinus2)).is_zero());
        assert!(rank2_identity_residual(&r(FamilyTag::kfamily_exact(G::from_i64(3)))).is_zero());
        assert_eq!(
            rank2_identity_residual(&Mat3::<G>::identity()),
            Mat3::identity().scale(&G::from_i64(3))
        );
        assert!(rank1_identity_residual(&r(FamilyTag::NonSymRank1)).is_zero());
        assert!(rank1_identity_residual(&r(FamilyTag::kfamily_exact(G::zero()))).is_zero());
        assert!(rank1_identity_residual(&Mat3::<G>::zero()).is_zero());
    }

    #[test]
    fn congruate_examples() {
        let a = representative(&FamilyTag::TraceMinus2).unwrap();
        assert_eq!(congruate(&a, &Mat3::identity(), 0.0).unwrap(), a);
        let t = random_so3_exact(11);
        let m = -&Mat3::<G>::identity();
        assert_eq!(congruate(&m, &t, 0.0).unwrap(), m);
        assert!(is_solution(&congruate(&a, &t, 0.0).unwrap(), 0.0));
        let bad = Mat3::identity().scale(&G::from_i64(2));
        assert_eq!(
            congruate(&a, &bad, 0.0),
            Err(Error::NotOrthogonal { tol: 0.0 })
        );
    }

    #[test]
    fn classify_representatives_exact() {
        for tag in all_tags() {
            let report = classify(&representative(&tag).unwrap(), 0.0).unwrap();
            assert_eq!(report.tag, tag);
        }
        assert!(matches!(
            classify(&Mat3::<G>::identity(), 0.0),
            Err(Error::NotASolution { .. })
        ));
    }

    #[test]
    fn classify_floating_congruates() {
        for (n, tag) in all_tags().into_iter().enumerate() {
            let t = random_so3(100 + n as u64).t;
            let a = congruate(&representative_c64(&tag), &t, 1e-9).unwrap();
            let report = classify(&a, 1e-6).unwrap();
            assert!(report.tag.same_as(&tag, 1e-9), "{tag} -> {}", report.tag);
        }
    }

    #[test]
    fn k_snapping() {
        let rep = representative_c64(&FamilyTag::kfamily_exact(G::from_fracs(1, 3, -2, 1)));
        let report = classify(&rep, 1e-6).unwrap();
        assert_eq!(
            report.tag,
            FamilyTag::kfamily_exact(G::from_fracs(1, 3, -2, 1))
        );
        let odd = FamilyTag::KFamily(ComplexValue::Float(Complex64::new(0.123456789, 0.0)));
        let report = classify(&representative_c64(&odd), 1e-6).unwrap();
        assert!(matches!(report.tag.k(), Some(ComplexValue::Float(_))));
    }

    #[test]
    fn congruence_examples() {
        let tm2 = representative(&FamilyTag::TraceMinus2).unwrap();
        let km1 = representative(&FamilyTag::kfamily_exact(G::from_i64(-1))).unwrap();
        assert_eq!(
            congruence_test(&tm2, &tm2, 8, 0),
            CongruenceVerdict::Congruent(Mat3::identity())
        );
        assert_eq!(
            congruence_test(&tm2, &km1, 8, 0),
            CongruenceVerdict::NotCongruent("rank(A′A)".into())
        );

        let a = representative_c64(&FamilyTag::NonSymRank1);
        let t = random_so3(5).t;
        let b = congruate(&a, &t, 1e-9).unwrap();
        let verdict = congruence_test(&a, &b, DEFAULT_BUDGET, 1);
        let w = verdict.witness().unwrap_or_else(|| panic!("{verdict:?}"));
        assert!(verify_witness(&a, &b, w, WITNESS_TOL));
    }

    #[test]
    fn congruence_is_deterministic() {
        let a = representative_c64(&FamilyTag::kfamily_exact(G::from_i64(2)));
        let b = congruate(&a, &random_so3(9).t, 1e-9).unwrap();
        assert_eq!(
            congruence_test(&a, &b, 16, 4),
            congruence_test(&a, &b, 16, 4)
        );
    }

    #[test]
    fn classify_with_witness_attaches_verified_t() {
        let a = congruate(
            &representative_c64(&FamilyTag::TraceMinus2),
            &random_so3(2).t,
            1e-9,
        )
        .unwrap();
        let report = classify_with_witness(&a, 1e-6, DEFAULT_BUDGET, 0).unwrap();
        let w = report.witness.expect("witness");
        assert!(verify_witness(
            &representative_c64(&FamilyTag::TraceMinus2),
            &a,
            &w,
            WITNESS_TOL
        ));
    }

    #[test]
    fn report_json() {
        let rep = representative(&FamilyTag::kfamily_exact(G::from_i64(5))).unwrap();
        let v = classify(&rep, 0.0).unwrap().to_json();
        assert_eq!(v["tag"], "KFamily");
        assert_eq!(v["k"], json!({"re": "5/1", "im": "0/1"}));
        assert_eq!(v["residual_norm"], 0.0);
        let u = CongruenceVerdict::Unknown(3).to_json();
        assert_eq!(u, json!({"verdict": "unknown", "attempts": 3}));
    }
}
