//! Commands behind the `postlie` binary. Each returns a [`CommandReport`]
//! whose status determines the process exit code.

use std::path::Path;

use postlie_core::json::{mat_to_json, AnyMat3};
use postlie_core::mateq::{
    classify, classify_with_witness, congruence_test_with, representative, residual,
    CongruenceOptions, CongruenceVerdict, FamilyTag,
};
use postlie_core::sl2::{
    check_postlie, check_rota_baxter, circ_from_matrix, structure_constants_are_exact,
    violations_to_json, StructureConstants,
};
use postlie_core::so3c::{
    adjoint_rep, automorphism_check, is_special_orthogonal, mat2_is_exact, membership_residuals,
    random_so3, random_so3_exact, Mat2,
};
use postlie_core::solver::{multistart_with, SearchOptions};
use postlie_core::{Complex64, Error, GaussianRational, Mat3, Scalar};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violation,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Ok => 0,
            Self::Violation => 1,
            Self::Error => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ok => "ok",
            Self::Violation => "violation",
            Self::Error => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommandReport {
    pub command: String,
    pub status: Status,
    pub payload: Value,
}

impl CommandReport {
    fn new(command: &str, status: Status, payload: Value) -> Self {
        Self {
            command: command.to_string(),
            status,
            payload,
        }
    }

    pub fn error(command: &str, message: impl std::fmt::Display) -> Self {
        Self::new(
            command,
            Status::Error,
            json!({ "error": message.to_string() }),
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "status": self.status.as_str(),
            "payload": self.payload,
        })
    }
}

/// Reads and parses a JSON file.
pub fn read_json(path: &Path) -> Result<Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn exact_norm_string(m: &Mat3<GaussianRational>) -> String {
    if m.is_zero() {
        "0".to_string()
    } else {
        format!("{:e}", m.frobenius_norm())
    }
}

/// The representatives checked by `verify-canon`, with k ∈ {0, −1, 1, i, 5}.
pub fn canonical_representatives() -> Vec<(String, Mat3<GaussianRational>)> {
    let mut tags = vec![
        FamilyTag::Zero,
        FamilyTag::MinusIdentity,
        FamilyTag::TraceMinus2,
    ];
    for k in [
        GaussianRational::zero(),
        GaussianRational::from_i64(-1),
        GaussianRational::one(),
        GaussianRational::i(),
        GaussianRational::from_i64(5),
    ] {
        tags.push(FamilyTag::kfamily_exact(k));
    }
    tags.push(FamilyTag::NonSymRank1);
    tags.iter()
        .map(|t| (t.to_string(), representative(t).expect("exact parameters")))
        .collect()
}

pub fn cmd_verify_canon() -> CommandReport {
    verify_representatives(&canonical_representatives())
}

/// Exact checks on a list of named matrices: zero residual, PostLie and
/// Rota–Baxter axioms, and pairwise separation by congruence invariants.
pub fn verify_representatives(reps: &[(String, Mat3<GaussianRational>)]) -> CommandReport {
    let mut ok = true;
    let mut families = Vec::new();
    for (name, a) in reps {
        let r = residual(a);
        let postlie = check_postlie(&circ_from_matrix(a), 0.0);
        let rb = check_rota_baxter(a, 0.0);
        let mut failed = Vec::new();
        if !r.is_zero() {
            failed.push("residual".to_string());
        }
        for v in postlie.iter().chain(&rb) {
            let id = v.identity.name().to_string();
            if !failed.contains(&id) {
                failed.push(id);
            }
        }
        ok &= failed.is_empty();
        families.push(json!({
            "family": name,
            "residual_norm": exact_norm_string(&r),
            "postlie_violations": postlie.len(),
            "rota_baxter_violations": rb.len(),
            "failed": failed,
        }));
    }
    let opts = CongruenceOptions {
        budget: 0,
        ..CongruenceOptions::default()
    };
    let mut pairs = Vec::new();
    for i in 0..reps.len() {
        for j in (i + 1)..reps.len() {
            let verdict = congruence_test_with(&reps[i].1, &reps[j].1, &opts);
            let separated = matches!(verdict, CongruenceVerdict::NotCongruent(_));
            ok &= separated;
            let mut entry = json!({"a": reps[i].0, "b": reps[j].0, "separated": separated});
            if let CongruenceVerdict::NotCongruent(name) = verdict {
                entry["separating_invariant"] = json!(name);
            }
            pairs.push(entry);
        }
    }
    let status = if ok { Status::Ok } else { Status::Violation };
    CommandReport::new(
        "verify-canon",
        status,
        json!({ "families": families, "pairwise": pairs }),
    )
}

/// Classification of the matrix in `path`. A witness search runs when a
/// seed is supplied.
pub fn cmd_classify(path: &Path, tol: f64, witness: Option<(usize, u64)>) -> CommandReport {
    const CMD: &str = "classify";
    let a = match read_json(path).and_then(|v| AnyMat3::parse(&v).map_err(|e| e.to_string())) {
        Ok(a) => a,
        Err(e) => return CommandReport::error(CMD, e),
    };
    let result = match (&a, witness) {
        (AnyMat3::Exact(m), None) => classify(m, tol),
        (AnyMat3::Float(m), None) => classify(m, tol),
        (AnyMat3::Exact(m), Some((budget, seed))) => classify_with_witness(m, tol, budget, seed),
        (AnyMat3::Float(m), Some((budget, seed))) => classify_with_witness(m, tol, budget, seed),
    };
    match result {
        Ok(report) => CommandReport::new(CMD, Status::Ok, report.to_json()),
        Err(e @ (Error::NotASolution { .. } | Error::Inconclusive(_))) => CommandReport::new(
            CMD,
            Status::Violation,
            json!({ "error": e.to_string(), "kind": error_kind(&e) }),
        ),
        Err(e) => CommandReport::error(CMD, e),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NotASolution { .. } => "NotASolution",
        Error::Inconclusive(_) => "Inconclusive",
        _ => "Error",
    }
}

fn postlie_report<S: postlie_core::json::JsonScalar>(
    c: &StructureConstants<S>,
    tol: f64,
) -> CommandReport {
    let scaled = tol * c.frobenius_norm().max(1.0).powi(2);
    let v = check_postlie(c, scaled);
    let status = if v.is_empty() {
        Status::Ok
    } else {
        Status::Violation
    };
    CommandReport::new(
        "postlie-check",
        status,
        json!({ "violations": violations_to_json(&v), "count": v.len() }),
    )
}

/// PostLie axioms for a product given as `{"c": …}` structure constants or
/// as the 3×3 matrix `A` of `x∘y = [f(x), y]`.
pub fn cmd_postlie_check(path: &Path, tol: f64) -> CommandReport {
    const CMD: &str = "postlie-check";
    let v = match read_json(path) {
        Ok(v) => v,
        Err(e) => return CommandReport::error(CMD, e),
    };
    let parsed = if v.get("c").is_some() {
        structure_constants_are_exact(&v).and_then(|exact| {
            Ok(if exact {
                postlie_report(&StructureConstants::<GaussianRational>::from_json(&v)?, tol)
            } else {
                postlie_report(&StructureConstants::<Complex64>::from_json(&v)?, tol)
            })
        })
    } else {
        AnyMat3::parse(&v).map(|a| match a {
            AnyMat3::Exact(m) => postlie_report(&circ_from_matrix(&m), tol),
            AnyMat3::Float(m) => postlie_report(&circ_from_matrix(&m), tol),
        })
    };
    parsed.unwrap_or_else(|e| CommandReport::error(CMD, e))
}

/// Congruence test between the matrices in two files.
pub fn cmd_orbit_test(
    path_a: &Path,
    path_b: &Path,
    budget: usize,
    seed: u64,
    tol: f64,
) -> CommandReport {
    const CMD: &str = "orbit-test";
    let load = |p: &Path| read_json(p).and_then(|v| AnyMat3::parse(&v).map_err(|e| e.to_string()));
    let (a, b) = match (load(path_a), load(path_b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return CommandReport::error(CMD, e),
    };
    let opts = CongruenceOptions {
        budget,
        seed,
        tol,
        ..CongruenceOptions::default()
    };
    let verdict = match (&a, &b) {
        (AnyMat3::Exact(x), AnyMat3::Exact(y)) => congruence_test_with(x, y, &opts),
        _ => congruence_test_with(&a.to_c64(), &b.to_c64(), &opts),
    };
    CommandReport::new(CMD, Status::Ok, verdict.to_json())
}

/// Multistart survey. Violation when a converged point fails to classify.
pub fn cmd_search(opts: &SearchOptions) -> CommandReport {
    const CMD: &str = "search";
    let valid = opts.starts > 0 && opts.tol > 0.0 && opts.max_iter > 0 && opts.radius >= 0.0;
    if !valid {
        return CommandReport::error(CMD, "need starts >= 1, tol > 0, max-iter >= 1, radius >= 0");
    }
    let report = multistart_with(opts);
    let status = if report.unclassified == 0 {
        Status::Ok
    } else {
        Status::Violation
    };
    let mut payload = report.to_json();
    payload["seed"] = json!(opts.seed);
    payload["radius"] = json!(opts.radius);
    CommandReport::new(CMD, status, payload)
}

/// A seeded SO(3,C) sample with its membership residuals.
pub fn cmd_random_so3(seed: u64, exact: bool) -> CommandReport {
    let payload = if exact {
        let t = random_so3_exact(seed);
        json!({
            "matrix": mat_to_json(&t),
            "orthogonal": is_special_orthogonal(&t, 0.0),
            "gram_residual": exact_norm_string(&(&(&t.transpose() * &t) - &Mat3::identity())),
            "det_residual": (t.det() - GaussianRational::one()).to_string(),
        })
    } else {
        let o = random_so3(seed);
        let (gram, det) = membership_residuals(&o.t);
        json!({
            "matrix": mat_to_json(&o.t),
            "tol": o.tol,
            "gram_residual": gram,
            "det_residual": det,
        })
    };
    CommandReport::new("random-so3", Status::Ok, payload)
}

fn adjoint_payload<S: postlie_core::json::JsonScalar>(p: &Mat2<S>) -> Result<Value, Error> {
    let t = adjoint_rep(p)?;
    let tol = if S::EXACT { 0.0 } else { 1e-9 };
    let (gram, det) = membership_residuals(&t);
    Ok(json!({
        "matrix": mat_to_json(&t),
        "special_orthogonal": is_special_orthogonal(&t, tol),
        "automorphism": automorphism_check(&t, tol),
        "gram_residual": gram,
        "det_residual": det,
    }))
}

/// The SO(3,C) matrix of `X ↦ PXP⁻¹` for the 2×2 matrix in `path`.
pub fn cmd_adjoint_rep(path: &Path) -> CommandReport {
    const CMD: &str = "adjoint-rep";
    let v = match read_json(path) {
        Ok(v) => v,
        Err(e) => return CommandReport::error(CMD, e),
    };
    let result = mat2_is_exact(&v).and_then(|exact| {
        if exact {
            adjoint_payload(&Mat2::<GaussianRational>::from_json(&v)?)
        } else {
            adjoint_payload(&Mat2::<Complex64>::from_json(&v)?)
        }
    });
    match result {
        Ok(payload) => CommandReport::new(CMD, Status::Ok, payload),
        Err(e) => CommandReport::error(CMD, e),
    }
}
