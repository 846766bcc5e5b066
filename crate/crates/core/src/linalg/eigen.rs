//! Eigenvalues and Jordan signatures of 3×3 matrices.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::linalg::Mat3;
use crate::scalar::{Complex64, GaussianRational, Scalar};

/// One eigenvalue with the sizes of its Jordan blocks, largest first.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenBlock<S> {
    pub eigenvalue: S,
    pub sizes: Vec<usize>,
}

impl<S> EigenBlock<S> {
    pub fn multiplicity(&self) -> usize {
        self.sizes.iter().sum()
    }
}

/// Eigenvalues with their Jordan block partitions; block sizes sum to 3.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanSignature<S> {
    pub blocks: Vec<EigenBlock<S>>,
}

impl<S: Scalar> JordanSignature<S> {
    fn new(mut blocks: Vec<EigenBlock<S>>) -> Self {
        for b in &mut blocks {
            b.sizes.sort_unstable_by(|a, b| b.cmp(a));
        }
        blocks.sort_by(|a, b| lex(&a.eigenvalue.to_c64(), &b.eigenvalue.to_c64()));
        Self { blocks }
    }

    pub fn to_c64(&self) -> JordanSignature<Complex64> {
        JordanSignature {
            blocks: self
                .blocks
                .iter()
                .map(|b| EigenBlock {
                    eigenvalue: b.eigenvalue.to_c64(),
                    sizes: b.sizes.clone(),
                })
                .collect(),
        }
    }

    /// Same Jordan type: eigenvalues match within `tol` and carry identical
    /// block partitions.
    pub fn same_type(&self, other: &Self, tol: f64) -> bool {
        if self.blocks.len() != other.blocks.len() {
            return false;
        }
        let mut used = vec![false; other.blocks.len()];
        self.blocks.iter().all(|b| {
            let lam = b.eigenvalue.to_c64();
            let hit = other.blocks.iter().enumerate().find(|(k, o)| {
                !used[*k] && o.sizes == b.sizes && (o.eigenvalue.to_c64() - lam).norm() <= tol
            });
            match hit {
                Some((k, _)) => {
                    used[k] = true;
                    true
                }
                None => false,
            }
        })
    }

    /// Block partition of the eigenvalue nearest to `lambda`, if any lies
    /// within `tol`.
    pub fn sizes_at(&self, lambda: Complex64, tol: f64) -> Option<&[usize]> {
        self.blocks
            .iter()
            .find(|b| (b.eigenvalue.to_c64() - lambda).norm() <= tol)
            .map(|b| b.sizes.as_slice())
    }
}

fn lex(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn cbrt(z: Complex64) -> Complex64 {
    if z.norm() == 0.0 {
        return z;
    }
    Complex64::from_polar(z.norm().cbrt(), z.arg() / 3.0)
}

/// Roots of `t³ + p t + q` by Cardano's formula.
fn depressed_roots(p: Complex64, q: Complex64) -> [Complex64; 3] {
    let zero = Complex64::new(0.0, 0.0);
    if p == zero && q == zero {
        return [zero; 3];
    }
    let s = ((q / 2.0).powi(2) + (p / 3.0).powi(3)).sqrt();
    let c1 = -q / 2.0 + s;
    let c2 = -q / 2.0 - s;
    let u3 = if c1.norm() >= c2.norm() { c1 } else { c2 };
    let u = cbrt(u3);
    let v = if u.norm() == 0.0 {
        zero
    } else {
        -p / (3.0 * u)
    };
    let w = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    let w2 = w * w;
    [u + v, w * u + w2 * v, w2 * u + w * v]
}

/// Eigenvalues with repetition: closed-form cubic roots followed by one
/// Newton polish step on the characteristic polynomial.
pub fn eigenvalues(a: &Mat3<Complex64>) -> [Complex64; 3] {
    let (c2, c1, c0) = a.char_poly();
    let mu = -c2 / 3.0;
    let b = a - &Mat3::identity().scale(&mu);
    let (_, p, q) = b.char_poly();
    let chi = |l: Complex64| ((l + c2) * l + c1) * l + c0;
    let dchi = |l: Complex64| (3.0 * l + 2.0 * c2) * l + c1;
    depressed_roots(p, q).map(|t| {
        let l = t + mu;
        let d = dchi(l);
        if d.norm() == 0.0 {
            return l;
        }
        let polished = l - chi(l) / d;
        if polished.is_finite() && chi(polished).norm() < chi(l).norm() {
            polished
        } else {
            l
        }
    })
}

/// Jordan signature of a floating matrix.
///
/// Eigenvalues are clustered by their spread relative to `s = ‖A‖_F`. A
/// pair closer than `2·tol·s` merges into a double root. A triple root
/// needs `max(√|p|, ∛|q|) <= 10·tol·s` for the depressed characteristic
/// polynomial `t³ + pt + q`; the wider allowance reflects that a rounded
/// triple root splits like `ε^{1/3}` rather than `ε^{1/2}`. A spread within a
/// factor 10 above either threshold is reported as
/// [`Error::IllConditioned`]. Block sizes for a cluster at `λ` come from
/// ranks of `(A − λI)^p` with singular-value threshold `tol·s^p`.
pub fn jordan_signature(a: &Mat3<Complex64>, tol: f64) -> Result<JordanSignature<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let s = a.frobenius_norm();
    if s == 0.0 {
        return Ok(JordanSignature::new(vec![EigenBlock {
            eigenvalue: zero,
            sizes: vec![1, 1, 1],
        }]));
    }
    let tr = a.trace();
    let mu = tr / 3.0;
    let b = a - &Mat3::identity().scale(&mu);
    let (_, p, q) = b.char_poly();
    let triple = p.norm().sqrt().max(q.norm().cbrt()) / s;
    let triple_tol = 10.0 * tol;

    let clusters: Vec<(Complex64, usize)> = if triple <= triple_tol {
        vec![(mu, 3)]
    } else if triple <= 10.0 * triple_tol {
        return Err(Error::IllConditioned { tol });
    } else {
        let r = eigenvalues(a);
        let pairs = [(0, 1), (0, 2), (1, 2)];
        let (i, j) = pairs
            .into_iter()
            .min_by(|&(a0, a1), &(b0, b1)| {
                (r[a0] - r[a1]).norm().total_cmp(&(r[b0] - r[b1]).norm())
            })
            .expect("three pairs");
        let double = (r[i] - r[j]).norm() / (2.0 * s);
        if double <= tol {
            let lam = (r[i] + r[j]) / 2.0;
            vec![(lam, 2), (tr - 2.0 * lam, 1)]
        } else if double <= 10.0 * tol {
            return Err(Error::IllConditioned { tol });
        } else {
            r.iter().map(|&l| (l, 1)).collect()
        }
    };

    let mut blocks = Vec::with_capacity(clusters.len());
    for (lam, mult) in clusters {
        let sizes = if mult == 1 {
            vec![1]
        } else {
            let n = a - &Mat3::identity().scale(&lam);
            let ranks: Vec<usize> = (0..=mult as u32)
                .map(|p| {
                    if p == 0 {
                        3
                    } else {
                        n.pow(p).rank_abs(tol * s.powi(p as i32))
                    }
                })
                .collect();
            block_sizes(&ranks, mult).ok_or(Error::IllConditioned { tol })?
        };
        blocks.push(EigenBlock {
            eigenvalue: lam,
            sizes,
        });
    }
    Ok(JordanSignature::new(blocks))
}

/// Exact Jordan signature when the eigenvalues are known Gaussian
/// rationals. Repeated entries in `eigs` are ignored.
pub fn jordan_signature_exact(
    a: &Mat3<GaussianRational>,
    eigs: &[GaussianRational],
) -> Result<JordanSignature<GaussianRational>> {
    let mut distinct: Vec<GaussianRational> = Vec::new();
    for e in eigs {
        if !distinct.contains(e) {
            distinct.push(e.clone());
        }
    }
    let mut blocks = Vec::new();
    let mut total = 0;
    for lam in distinct {
        let n = a - &Mat3::identity().scale(&lam);
        let ranks: Vec<usize> = (0..=3u32)
            .map(|p| if p == 0 { 3 } else { n.pow(p).rank(0.0) })
            .collect();
        let mult = 3 - ranks[3];
        if mult == 0 {
            return Err(Error::InvalidParameter(format!(
                "{lam} is not an eigenvalue"
            )));
        }
        let sizes = block_sizes(&ranks[..=mult], mult)
            .ok_or_else(|| Error::InvalidParameter("inconsistent ranks".into()))?;
        total += mult;
        blocks.push(EigenBlock {
            eigenvalue: lam,
            sizes,
        });
    }
    if total != 3 {
        return Err(Error::InvalidParameter(
            "supplied eigenvalues do not account for all of the spectrum".into(),
        ));
    }
    Ok(JordanSignature::new(blocks))
}

/// Block partition from `ranks[p] = rank((A − λI)^p)`, `p = 0..=mult`.
fn block_sizes(ranks: &[usize], mult: usize) -> Option<Vec<usize>> {
    if ranks[0] < ranks[mult] || ranks[0] - ranks[mult] != mult {
        return None;
    }
    // at_least[p-1] = number of blocks of size >= p
    let mut at_least = Vec::with_capacity(mult + 1);
    for p in 1..=mult {
        at_least.push(ranks[p - 1].checked_sub(ranks[p])?);
    }
    at_least.push(0);
    let mut sizes = Vec::new();
    for p in 1..=mult {
        let exact = at_least[p - 1].checked_sub(at_least[p])?;
        sizes.extend(std::iter::repeat_n(p, exact));
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    (sizes.iter().sum::<usize>() == mult).then_some(sizes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: [Complex64; 3]) -> [Complex64; 3] {
        v.sort_by(lex);
        v
    }

    #[test]
    fn eigenvalues_of_diagonal_and_scalar() {
        let d = Mat3::diag(c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0));
        let e = sorted(eigenvalues(&d));
        for (k, want) in [1.0, 2.0, 3.0].iter().enumerate() {
            assert!((e[k] - c(*want, 0.0)).norm() < 1e-12);
        }
        let m = Mat3::diag(c(-1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0));
        for l in eigenvalues(&m) {
            assert!((l + 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn eigenvalues_complex_spectrum() {
        // rotation-like block with eigenvalues ±i and 5
        let a = Mat3::from_rows([
            [c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)],
            [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(5.0, 0.0)],
        ]);
        let e = eigenvalues(&a);
        for want in [c(0.0, -1.0), c(0.0, 1.0), c(5.0, 0.0)] {
            assert!(e.iter().any(|l| (l - want).norm() < 1e-12), "{e:?}");
        }
    }

    #[test]
    fn jordan_minus_identity() {
        let m = Mat3::diag(c(-1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0));
        let s = jordan_signature(&m, 1e-6).unwrap();
        assert_eq!(s.blocks.len(), 1);
        assert_eq!(s.blocks[0].sizes, vec![1, 1, 1]);
        assert!((s.blocks[0].eigenvalue + 1.0).norm() < 1e-12);
    }

    #[test]
    fn jordan_nilpotent_symmetric_block() {
        let a = Mat3::from_rows([
            [c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0)],
            [c(1.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        ]);
        let s = jordan_signature(&a, 1e-6).unwrap();
        assert_eq!(s.blocks.len(), 1);
        assert_eq!(s.blocks[0].sizes, vec![2, 1]);
        assert!(s.blocks[0].eigenvalue.norm() < 1e-12);
    }

    #[test]
    fn jordan_distinct() {
        let d = Mat3::diag(c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0));
        let s = jordan_signature(&d, 1e-6).unwrap();
        let eig: Vec<f64> = s.blocks.iter().map(|b| b.eigenvalue.re).collect();
        assert_eq!(
            s.blocks.iter().map(|b| b.sizes.clone()).collect::<Vec<_>>(),
            vec![vec![1]; 3]
        );
        for (got, want) in eig.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn jordan_ambiguous_gap() {
        // eigenvalues 1 and 1 + δ where δ/(2s) lands inside (tol, 10 tol]
        let tol = 1e-6;
        let s = (1.0f64 + 1.0 + 9.0).sqrt();
        let delta = 2.0 * s * 5.0 * tol;
        let d = Mat3::diag(c(1.0, 0.0), c(1.0 + delta, 0.0), c(3.0, 0.0));
        assert_eq!(
            jordan_signature(&d, tol),
            Err(Error::IllConditioned { tol })
        );
    }

    #[test]
    fn block_partition_from_ranks() {
        assert_eq!(block_sizes(&[3, 1, 0], 2), None);
        assert_eq!(block_sizes(&[3, 1, 0, 0], 3), Some(vec![2, 1]));
        assert_eq!(block_sizes(&[3, 2, 1, 0], 3), Some(vec![3]));
        assert_eq!(block_sizes(&[3, 0, 0, 0], 3), Some(vec![1, 1, 1]));
        assert_eq!(block_sizes(&[3, 2, 1], 2), Some(vec![2]));
    }

    #[test]
    fn exact_signature() {
        let g = |re: i64, im: i64| GaussianRational::complex(re, im);
        let a = Mat3::from_rows([
            [g(0, 1), g(1, 0), g(0, 0)],
            [g(1, 0), g(0, -1), g(0, 0)],
            [g(0, 0), g(0, 0), g(2, 0)],
        ]);
        let s = jordan_signature_exact(&a, &[g(0, 0), g(2, 0)]).unwrap();
        assert_eq!(s.blocks.len(), 2);
        assert_eq!(s.blocks[0].eigenvalue, g(0, 0));
        assert_eq!(s.blocks[0].sizes, vec![2]);
        assert_eq!(s.blocks[1].sizes, vec![1]);
        assert!(jordan_signature_exact(&a, &[g(0, 0)]).is_err());
        assert!(jordan_signature_exact(&a, &[g(0, 0), g(2, 0), g(7, 0)]).is_err());
    }
}
