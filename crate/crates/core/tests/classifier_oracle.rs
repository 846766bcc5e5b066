//! Exact checks of the congruence invariants behind the classifier's
//! branches, on every representative and on exact SO(3,C)-congruates.

use postlie_core::mateq::{classify, congruate, representative, FamilyTag};
use postlie_core::so3c::random_so3_exact;
use postlie_core::{GaussianRational as G, Mat3, Scalar};

#[derive(Debug, PartialEq)]
struct Invariants {
    trace: G,
    rank: usize,
    rank_ata: usize,
    rank_sym_shift: usize,
}

fn invariants(a: &Mat3<G>) -> Invariants {
    let half = Mat3::identity().scale(&G::from_ratio(1, 2));
    Invariants {
        trace: a.trace(),
        rank: a.rank(0.0),
        rank_ata: (&a.transpose() * a).rank(0.0),
        rank_sym_shift: (&a.sym_part() + &half).rank(0.0),
    }
}

fn tags() -> Vec<FamilyTag> {
    let mut out = vec![
        FamilyTag::Zero,
        FamilyTag::MinusIdentity,
        FamilyTag::TraceMinus2,
    ];
    for k in [
        G::zero(),
        G::from_i64(-1),
        G::one(),
        G::i(),
        G::from_i64(5),
        G::from_ratio(-1, 2),
        G::from_fracs(2, 3, -1, 4),
    ] {
        out.push(FamilyTag::kfamily_exact(k));
    }
    out.push(FamilyTag::NonSymRank1);
    out
}

#[test]
fn branch_constants_on_representatives() {
    let inv = |t: FamilyTag| invariants(&representative(&t).unwrap());
    let k = |n: i64| FamilyTag::kfamily_exact(G::from_i64(n));

    assert_eq!(inv(FamilyTag::Zero).rank, 0);
    assert_eq!(inv(FamilyTag::MinusIdentity).rank, 3);

    // rank 2, trace −2: separated by rank(A′A)
    let t2 = inv(FamilyTag::TraceMinus2);
    let km1 = inv(k(-1));
    assert_eq!((t2.rank, t2.trace.clone()), (2, G::from_i64(-2)));
    assert_eq!((km1.rank, km1.trace.clone()), (2, G::from_i64(-2)));
    assert_eq!((t2.rank_ata, km1.rank_ata), (2, 1));

    // rank 1: separated by rank(sym(A) + ½I)
    let k0 = inv(k(0));
    let ns = inv(FamilyTag::NonSymRank1);
    assert_eq!((k0.rank, ns.rank), (1, 1));
    assert_eq!((k0.rank_sym_shift, ns.rank_sym_shift), (1, 2));
    assert_eq!(ns.trace, G::from_i64(-1));

    // rank 2 away from trace −2 recovers k = tr + 1
    for n in [1, 5, -3] {
        let v = inv(k(n));
        assert_eq!(v.rank, 2);
        assert_eq!(v.trace + G::one(), G::from_i64(n));
    }
}

#[test]
fn invariants_survive_exact_congruation() {
    let mut checked = 0;
    for (n, tag) in tags().into_iter().enumerate() {
        let a = representative(&tag).unwrap();
        let expected = invariants(&a);
        let expected_tag = classify(&a, 0.0).unwrap().tag;
        assert!(
            expected_tag.same_as(&tag, 0.0),
            "{tag} classified as {expected_tag}"
        );
        for s in 0..12u64 {
            let t = random_so3_exact(100 * n as u64 + s);
            let b = congruate(&a, &t, 0.0).unwrap();
            assert_eq!(invariants(&b), expected, "{tag}, seed {s}");
            let got = classify(&b, 0.0).unwrap().tag;
            assert!(got.same_as(&tag, 0.0), "{tag}, seed {s}: {got}");
            checked += 1;
        }
    }
    assert!(checked >= 100);
}
