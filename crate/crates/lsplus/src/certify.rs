//! Exact verification of UVW-certificates and LS+ certificate packages of
//! levels 1, 2 and 3, plus bundle storage as a manifest and CSV files.
//!
//! Tags: `e_i` is the `i`-th unit vector of the homogenized space and
//! `f_i = e_0 − e_i`, for `i ∈ 1..=n`. A matrix `M` applied to a tag means
//! the corresponding column combination of `M`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{graph6_decode, graph6_encode, Graph, GraphError};
use crate::numerics::{diag_dominance_violation, IntMatrix, NumericsError};
use crate::polytope::{cone_frac_violation, dominates, is_valid_for_stab, max_over_stab, Inequality};

/// Name of the manifest file inside a bundle directory.
pub const MANIFEST: &str = "manifest.json";

/// Errors for malformed inputs (as opposed to rejected certificates).
#[derive(Debug, Error)]
pub enum CertifyError {
    /// Matrix shapes do not fit together.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// The target of a UVW check is not symmetric.
    #[error("matrix {0} is not symmetric")]
    NotSymmetric(String),
    /// A tag or matrix id could not be parsed.
    #[error("malformed tag {0:?}")]
    MalformedTag(String),
    /// A package level outside 1..=3.
    #[error("unsupported level {0}")]
    Level(u8),
    /// The same tag appears twice in a bundle.
    #[error("duplicate entry {0}")]
    Duplicate(String),
    /// A file in the bundle directory that the layout does not allow.
    #[error("unexpected file {0:?} in bundle")]
    UnknownFile(String),
    /// Manifest missing or inconsistent.
    #[error("manifest: {0}")]
    Manifest(String),
    /// A CSV file failed to parse.
    #[error("{file}: {source}")]
    Csv { file: String, source: NumericsError },
    /// The embedded graph6 string failed to decode.
    #[error(transparent)]
    Graph(#[from] GraphError),
    /// Filesystem failure.
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// A column selector `e_i` or `f_i = e_0 − e_i` with `i ∈ 1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    E(usize),
    F(usize),
}

impl Tag {
    /// All `2n` tags: `e_1..e_n` then `f_1..f_n`.
    pub fn all(n: usize) -> Vec<Tag> {
        (1..=n).map(Tag::E).chain((1..=n).map(Tag::F)).collect()
    }

    /// The vertex index `i` (1-based).
    pub fn vertex(self) -> usize {
        match self {
            Tag::E(i) | Tag::F(i) => i,
        }
    }

    /// Integer tag index used in manifests: `i` for `e_i`, `n + i` for `f_i`.
    pub fn index(self, n: usize) -> usize {
        match self {
            Tag::E(i) => i,
            Tag::F(i) => n + i,
        }
    }

    /// `M·tag` as an integer vector.
    pub fn apply(self, m: &IntMatrix) -> Vec<BigInt> {
        match self {
            Tag::E(i) => m.col(i),
            Tag::F(i) => (0..m.rows()).map(|r| m.get(r, 0) - m.get(r, i)).collect(),
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::E(i) => write!(f, "e_{i}"),
            Tag::F(i) => write!(f, "f_{i}"),
        }
    }
}

impl FromStr for Tag {
    type Err = CertifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CertifyError::MalformedTag(s.to_string());
        let (kind, idx) = s.split_once('_').ok_or_else(bad)?;
        let i: usize = idx.parse().map_err(|_| bad())?;
        if i == 0 || idx.starts_with('0') || idx.starts_with('+') {
            return Err(bad());
        }
        match kind {
            "e" => Ok(Tag::E(i)),
            "f" => Ok(Tag::F(i)),
            _ => Err(bad()),
        }
    }
}

/// Identifies one matrix of a package.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatrixId {
    Y,
    M1(Tag),
    M2(Tag, Tag),
}

impl fmt::Display for MatrixId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixId::Y => write!(f, "Y"),
            MatrixId::M1(t) => write!(f, "M1_{t}"),
            MatrixId::M2(t, s) => write!(f, "M2_{t}_{s}"),
        }
    }
}

impl FromStr for MatrixId {
    type Err = CertifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CertifyError::MalformedTag(s.to_string());
        if s == "Y" {
            return Ok(MatrixId::Y);
        }
        if let Some(rest) = s.strip_prefix("M1_") {
            return Ok(MatrixId::M1(rest.parse()?));
        }
        if let Some(rest) = s.strip_prefix("M2_") {
            let parts: Vec<&str> = rest.split('_').collect();
            if parts.len() != 4 {
                return Err(bad());
            }
            let t: Tag = format!("{}_{}", parts[0], parts[1]).parse().map_err(|_| bad())?;
            let u: Tag = format!("{}_{}", parts[2], parts[3]).parse().map_err(|_| bad())?;
            return Ok(MatrixId::M2(t, u));
        }
        Err(bad())
    }
}

/// Integer triple with `V` symmetric diagonally dominant and
/// `Wᵀ(UᵀU + V)W = kY` for a positive integer `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UvwCertificate {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub w: IntMatrix,
}

/// A layered LS+ certificate package.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificatePackage {
    /// Number of LS+ layers certified, 1 to 3.
    pub level: u8,
    /// Vertex count; every matrix is `(n+1) × (n+1)`.
    pub n: usize,
    /// Graph the package refers to, as graph6 (informational for verification).
    pub graph6: Option<String>,
    /// Inequality the package is meant to violate.
    pub inequality: Option<Inequality>,
    /// The top matrix `Y`.
    pub y: IntMatrix,
    /// First layer `Y_t`, required for every tag at levels 2 and 3.
    pub m1: BTreeMap<Tag, IntMatrix>,
    /// Second layer `Y_{ts}` (level 3); absent entries are zero matrices.
    pub m2: BTreeMap<(Tag, Tag), IntMatrix>,
    /// UVW certificates by matrix id; zero matrices may omit theirs.
    pub uvw: BTreeMap<MatrixId, UvwCertificate>,
}

impl CertificatePackage {
    /// An empty package around `y`.
    pub fn new(level: u8, n: usize, y: IntMatrix) -> Self {
        Self {
            level,
            n,
            graph6: None,
            inequality: None,
            y,
            m1: BTreeMap::new(),
            m2: BTreeMap::new(),
            uvw: BTreeMap::new(),
        }
    }

    /// Looks up a stored matrix by id.
    pub fn matrix(&self, id: MatrixId) -> Option<&IntMatrix> {
        match id {
            MatrixId::Y => Some(&self.y),
            MatrixId::M1(t) => self.m1.get(&t),
            MatrixId::M2(t, s) => self.m2.get(&(t, s)),
        }
    }

    /// Ids of all stored matrices in canonical order.
    pub fn matrix_ids(&self) -> Vec<MatrixId> {
        std::iter::once(MatrixId::Y)
            .chain(self.m1.keys().map(|&t| MatrixId::M1(t)))
            .chain(self.m2.keys().map(|&(t, s)| MatrixId::M2(t, s)))
            .collect()
    }

    /// The top homogeneous point `Ye₀`.
    pub fn top_point(&self) -> Vec<BigInt> {
        self.y.col(0)
    }
}

/// Machine-readable failure categories, in check order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FailureCode {
    Dimension,
    MissingMatrix,
    NotSymmetric,
    DiagMismatch,
    ConeFrac,
    Dominance,
    MissingCertificate,
    NotDiagDominant,
    UvwMismatch,
    IneqNotValid,
    NoViolation,
}

impl FailureCode {
    /// The code as printed in reports.
    pub fn as_str(self) -> &'static str {
        match self {
            FailureCode::Dimension => "DIMENSION",
            FailureCode::MissingMatrix => "MISSING_MATRIX",
            FailureCode::NotSymmetric => "NOT_SYMMETRIC",
            FailureCode::DiagMismatch => "DIAG_MISMATCH",
            FailureCode::ConeFrac => "CONE_FRAC",
            FailureCode::Dominance => "DOMINANCE",
            FailureCode::MissingCertificate => "MISSING_CERTIFICATE",
            FailureCode::NotDiagDominant => "NOT_DIAG_DOMINANT",
            FailureCode::UvwMismatch => "UVW_MISMATCH",
            FailureCode::IneqNotValid => "INEQ_NOT_VALID",
            FailureCode::NoViolation => "NO_VIOLATION",
        }
    }
}

impl fmt::Display for FailureCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One failed condition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure {
    pub code: FailureCode,
    /// Matrix the condition refers to (`"-"` for package-level conditions).
    pub subject: String,
    pub message: String,
}

/// Outcome of a UVW check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UvwVerdict {
    Accept { k: BigInt },
    Reject { failures: Vec<(FailureCode, String)> },
}

impl UvwVerdict {
    /// True for `Accept`.
    pub fn is_accept(&self) -> bool {
        matches!(self, UvwVerdict::Accept { .. })
    }
}

/// Full result of verifying a package, optionally with an inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub accepted: bool,
    /// Sorted by code, then subject.
    pub failures: Vec<Failure>,
    /// `k` for every matrix whose UVW certificate was accepted.
    pub k_values: BTreeMap<String, BigInt>,
    /// Zero matrices accepted without a certificate.
    pub zero_exempt: Vec<String>,
    /// `x̄ = (Ye₀)_{1..n} / Y₀₀` when `Y₀₀ > 0`.
    pub witness: Option<Vec<BigRational>>,
    /// `aᵀx̄` for the inequality, if one was checked.
    pub inequality_value: Option<BigRational>,
    /// `β` of the checked inequality.
    pub beta: Option<i64>,
    /// `aᵀx̄ / max{aᵀx : x ∈ STAB(G)}`, a lower bound on the integrality ratio.
    pub ratio_bound: Option<BigRational>,
}

impl VerificationReport {
    fn finish(mut failures: Vec<Failure>) -> Self {
        failures.sort();
        Self {
            accepted: failures.is_empty(),
            failures,
            k_values: BTreeMap::new(),
            zero_exempt: Vec::new(),
            witness: None,
            inequality_value: None,
            beta: None,
            ratio_bound: None,
        }
    }

    /// True iff some failure carries `code`.
    pub fn has_code(&self, code: FailureCode) -> bool {
        self.failures.iter().any(|f| f.code == code)
    }

    /// Distinct failure codes, sorted.
    pub fn codes(&self) -> Vec<FailureCode> {
        self.failures.iter().map(|f| f.code).collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// JSON rendering with big numbers as strings.
    pub fn to_json(&self) -> serde_json::Value {
        let rat = |r: &BigRational| r.to_string();
        serde_json::json!({
            "verdict": if self.accepted { "accept" } else { "reject" },
            "failures": self.failures.iter().map(|f| serde_json::json!({
                "code": f.code.as_str(), "subject": f.subject, "message": f.message,
            })).collect::<Vec<_>>(),
            "k": self.k_values.iter().map(|(id, k)| (id.clone(), serde_json::Value::String(k.to_string())))
                .collect::<serde_json::Map<_, _>>(),
            "zero_exempt": self.zero_exempt,
            "witness": self.witness.as_ref().map(|w| w.iter().map(rat).collect::<Vec<_>>()),
            "inequality_value": self.inequality_value.as_ref().map(rat),
            "beta": self.beta,
            "ratio_bound": self.ratio_bound.as_ref().map(rat),
        })
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict: {}", if self.accepted { "accept" } else { "reject" })?;
        for fail in &self.failures {
            writeln!(f, "failure: {} {} {}", fail.code, fail.subject, fail.message)?;
        }
        for (id, k) in &self.k_values {
            writeln!(f, "k[{id}] = {k}")?;
        }
        for id in &self.zero_exempt {
            writeln!(f, "zero matrix without certificate: {id}")?;
        }
        // witness and value are printed over the common denominator of the witness
        let den = self.witness.as_ref().map(|w| crate::numerics::denominator_lcm(w.iter()));
        if let (Some(w), Some(d)) = (&self.witness, &den) {
            let parts: Vec<String> =
                w.iter().map(|r| (r * BigRational::from_integer(d.clone())).to_integer().to_string()).collect();
            writeln!(f, "witness: ({})/{d}", parts.join(", "))?;
        }
        if let (Some(v), Some(b)) = (&self.inequality_value, self.beta) {
            let rel = if *v > BigRational::from_integer(b.into()) { ">" } else { "<=" };
            let scaled = match &den {
                Some(d) if !v.is_integer() || !d.is_one() => {
                    format!(" (= {}/{d})", (v * BigRational::from_integer(d.clone())).to_integer())
                }
                _ => String::new(),
            };
            writeln!(f, "violation: a·x = {v}{scaled} {rel} {b}")?;
        }
        if let Some(r) = &self.ratio_bound {
            writeln!(f, "ratio bound: {r}")?;
        }
        Ok(())
    }
}

/// Checks `Wᵀ(UᵀU + V)W = kY` with `V` symmetric diagonally dominant.
/// `k` comes from the first nonzero entry of `Y` in row-major order; for
/// `Y = 0` the product must vanish and `k = 1`.
pub fn verify_uvw(y: &IntMatrix, cert: &UvwCertificate) -> Result<UvwVerdict, CertifyError> {
    if !y.is_square() {
        return Err(CertifyError::Dimension(format!("Y is {}x{}", y.rows(), y.cols())));
    }
    if !y.is_symmetric() {
        return Err(CertifyError::NotSymmetric("Y".into()));
    }
    let (u, v, w) = (&cert.u, &cert.v, &cert.w);
    if !v.is_square() || u.cols() != v.rows() || w.rows() != v.rows() || w.cols() != y.rows() {
        return Err(CertifyError::Dimension(format!(
            "U {}x{}, V {}x{}, W {}x{} against Y {}x{}",
            u.rows(),
            u.cols(),
            v.rows(),
            v.cols(),
            w.rows(),
            w.cols(),
            y.rows(),
            y.cols()
        )));
    }
    let mut failures = Vec::new();
    if let Some(why) = diag_dominance_violation(v) {
        failures.push((FailureCode::NotDiagDominant, why));
    }
    let inner = u.transpose().mul(u).and_then(|g| g.add(v)).map_err(|e| CertifyError::Dimension(e.to_string()))?;
    let product =
        w.transpose().mul(&inner).and_then(|p| p.mul(w)).map_err(|e| CertifyError::Dimension(e.to_string()))?;
    let first = y.entries().iter().zip(product.entries()).find(|(yv, _)| !yv.is_zero());
    let k = match first {
        None => BigInt::one(),
        Some((yv, pv)) => {
            if !(pv % yv).is_zero() {
                failures
                    .push((FailureCode::UvwMismatch, format!("first nonzero entry {pv} is not a multiple of {yv}")));
                return Ok(UvwVerdict::Reject { failures });
            }
            pv / yv
        }
    };
    if !k.is_positive() {
        failures.push((FailureCode::UvwMismatch, format!("scale factor {k} is not positive")));
    } else {
        for i in 0..y.rows() {
            for j in 0..y.cols() {
                let expected = &k * y.get(i, j);
                if product.get(i, j) != &expected {
                    failures.push((
                        FailureCode::UvwMismatch,
                        format!("entry ({i},{j}): product {} differs from {k}·Y = {expected}", product.get(i, j)),
                    ));
                    break;
                }
            }
            if failures.iter().any(|f| f.0 == FailureCode::UvwMismatch) {
                break;
            }
        }
    }
    Ok(if failures.is_empty() { UvwVerdict::Accept { k } } else { UvwVerdict::Reject { failures } })
}

/// Per-matrix structural result computed in parallel.
struct MatrixCheck {
    failures: Vec<Failure>,
    k: Option<BigInt>,
    exempt: bool,
}

fn check_matrix(g: &Graph, id: MatrixId, m: &IntMatrix, innermost: bool, cert: Option<&UvwCertificate>) -> MatrixCheck {
    let subject = id.to_string();
    let mut failures = Vec::new();
    let fail = |code, message: String| Failure { code, subject: subject.clone(), message };
    let dim = g.n() + 1;
    if m.rows() != dim || m.cols() != dim {
        failures.push(fail(FailureCode::Dimension, format!("{}x{} matrix, expected {dim}x{dim}", m.rows(), m.cols())));
        return MatrixCheck { failures, k: None, exempt: false };
    }
    let symmetric = m.is_symmetric();
    if !symmetric {
        let (i, j) = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .find(|&(i, j)| m.get(i, j) != m.get(j, i))
            .expect("asymmetric pair");
        failures.push(fail(
            FailureCode::NotSymmetric,
            format!("entry ({i},{j}) = {} but ({j},{i}) = {}", m.get(i, j), m.get(j, i)),
        ));
    }
    if let Some(i) = (0..dim).find(|&i| m.get(i, 0) != m.get(i, i)) {
        failures.push(fail(
            FailureCode::DiagMismatch,
            format!("Me0[{i}] = {} but M[{i}][{i}] = {}", m.get(i, 0), m.get(i, i)),
        ));
    }
    if innermost {
        for t in Tag::all(g.n()) {
            if let Some(why) = cone_frac_violation(g, &t.apply(m)) {
                failures.push(fail(FailureCode::ConeFrac, format!("column {t}: {why}")));
            }
        }
    }
    let mut k = None;
    let mut exempt = false;
    match cert {
        None if m.is_zero() => exempt = true,
        None => failures.push(fail(FailureCode::MissingCertificate, "nonzero matrix without UVW certificate".into())),
        Some(_) if !symmetric => {}
        Some(c) => match verify_uvw(m, c) {
            Ok(UvwVerdict::Accept { k: kk }) => k = Some(kk),
            Ok(UvwVerdict::Reject { failures: fs }) => {
                failures.extend(fs.into_iter().map(|(code, msg)| fail(code, msg)));
            }
            Err(e) => failures.push(fail(FailureCode::Dimension, e.to_string())),
        },
    }
    MatrixCheck { failures, k, exempt }
}

fn domination_failure(subject: String, dominating: &[BigInt], dominated: &[BigInt], what: String) -> Option<Failure> {
    (!dominates(dominating, dominated)).then(|| Failure {
        code: FailureCode::Dominance,
        subject,
        message: format!("{what}: column 0 does not dominate the required column"),
    })
}

/// Verifies every condition of a package against `g`. Conditions are
/// (a) symmetry and `Me₀ = diag(M)`, (b) cone(FRAC(G)) membership of the
/// innermost layer's tag columns, (c) domination between layers and
/// (d) UVW certificates. All failures are collected.
pub fn verify_package(g: &Graph, pkg: &CertificatePackage) -> Result<VerificationReport, CertifyError> {
    if !(1..=3).contains(&pkg.level) {
        return Err(CertifyError::Level(pkg.level));
    }
    let n = g.n();
    if pkg.n != n {
        return Err(CertifyError::Dimension(format!("package is for {} vertices, graph has {n}", pkg.n)));
    }
    let dim = n + 1;
    let level = pkg.level;
    let mut failures = Vec::new();
    let missing = |id: MatrixId| Failure {
        code: FailureCode::MissingMatrix,
        subject: id.to_string(),
        message: "required matrix not present".into(),
    };
    if level >= 2 {
        for t in Tag::all(n) {
            if !pkg.m1.contains_key(&t) {
                failures.push(missing(MatrixId::M1(t)));
            }
        }
    }
    for t in pkg.m1.keys() {
        if level < 2 || t.vertex() > n {
            failures.push(Failure {
                code: FailureCode::Dimension,
                subject: MatrixId::M1(*t).to_string(),
                message: "matrix not allowed for this level or vertex count".into(),
            });
        }
    }
    for (t, s) in pkg.m2.keys() {
        if level < 3 || t.vertex() > n || s.vertex() > n {
            failures.push(Failure {
                code: FailureCode::Dimension,
                subject: MatrixId::M2(*t, *s).to_string(),
                message: "matrix not allowed for this level or vertex count".into(),
            });
        }
    }
    // (a), (b), (d): per matrix, in parallel
    let ids = pkg.matrix_ids();
    let checks: Vec<(MatrixId, MatrixCheck)> = ids
        .par_iter()
        .map(|&id| {
            let innermost = match id {
                MatrixId::Y => level == 1,
                MatrixId::M1(_) => level == 2,
                MatrixId::M2(..) => level == 3,
            };
            let m = pkg.matrix(id).expect("listed id");
            (id, check_matrix(g, id, m, innermost, pkg.uvw.get(&id)))
        })
        .collect();
    // (c): domination between consecutive layers
    let shaped = |m: &IntMatrix| m.rows() == dim && m.cols() == dim;
    if level >= 2 && shaped(&pkg.y) {
        for t in Tag::all(n) {
            if let Some(yt) = pkg.m1.get(&t).filter(|m| shaped(m)) {
                let id = MatrixId::M1(t);
                failures.extend(domination_failure(
                    id.to_string(),
                    &yt.col(0),
                    &t.apply(&pkg.y),
                    format!("{id}e0 vs Y{t}"),
                ));
            }
        }
    }
    if level == 3 {
        for t in Tag::all(n) {
            let Some(yt) = pkg.m1.get(&t).filter(|m| shaped(m)) else { continue };
            for s in Tag::all(n) {
                let id = MatrixId::M2(t, s);
                let dominated = s.apply(yt);
                let yts = pkg.m2.get(&(t, s));
                if yts.is_none() && dominated.iter().any(|x| !x.is_zero()) {
                    failures.push(Failure {
                        code: FailureCode::MissingMatrix,
                        subject: id.to_string(),
                        message: format!("omitted although Y_{t}{s} is nonzero"),
                    });
                    continue;
                }
                if yts.is_some_and(|m| !shaped(m)) {
                    continue;
                }
                let top = yts.map_or_else(|| vec![BigInt::zero(); dim], |m| m.col(0));
                failures.extend(domination_failure(id.to_string(), &top, &dominated, format!("{id}e0 vs Y_{t}{s}")));
            }
        }
    }
    let mut k_values = BTreeMap::new();
    let mut zero_exempt = Vec::new();
    for (id, check) in checks {
        failures.extend(check.failures);
        if let Some(k) = check.k {
            k_values.insert(id.to_string(), k);
        }
        if check.exempt {
            zero_exempt.push(id.to_string());
        }
    }
    let mut report = VerificationReport::finish(failures);
    report.k_values = k_values;
    report.zero_exempt = zero_exempt;
    report.witness = witness(&pkg.y);
    Ok(report)
}

fn witness(y: &IntMatrix) -> Option<Vec<BigRational>> {
    if y.rows() == 0 || !y.get(0, 0).is_positive() {
        return None;
    }
    let y00 = y.get(0, 0).clone();
    Some((1..y.rows()).map(|i| BigRational::new(y.get(i, 0).clone(), y00.clone())).collect())
}

/// Verifies the package and that `ineq` is valid for STAB(G) and violated by
/// `Ye₀`, i.e. `(−β, aᵀ)·Ye₀ > 0`. Acceptance proves `r₊(G) ≥ level + 1`.
pub fn verify_rank_certificate(
    g: &Graph,
    ineq: &Inequality,
    pkg: &CertificatePackage,
) -> Result<VerificationReport, CertifyError> {
    if ineq.a.len() != g.n() {
        return Err(CertifyError::Dimension(format!(
            "inequality has {} coefficients for {} vertices",
            ineq.a.len(),
            g.n()
        )));
    }
    let report = verify_package(g, pkg)?;
    let mut failures = report.failures.clone();
    if !is_valid_for_stab(g, ineq) {
        failures.push(Failure {
            code: FailureCode::IneqNotValid,
            subject: "-".into(),
            message: format!("{ineq} is violated by a stable set (max {})", max_over_stab(g, &ineq.a)),
        });
    }
    let mut value = None;
    if pkg.y.rows() == g.n() + 1 && pkg.y.cols() == g.n() + 1 {
        let col = pkg.y.col(0);
        let lhs: BigInt = ineq.a.iter().zip(&col[1..]).map(|(&a, y)| BigInt::from(a) * y).sum();
        let rhs = BigInt::from(ineq.beta) * &col[0];
        if lhs <= rhs {
            failures.push(Failure {
                code: FailureCode::NoViolation,
                subject: "-".into(),
                message: format!("(-β, aᵀ)·Ye0 = {} is not positive", &lhs - &rhs),
            });
        }
        if col[0].is_positive() {
            value = Some(BigRational::new(lhs, col[0].clone()));
        }
    }
    let mut out = VerificationReport::finish(failures);
    out.k_values = report.k_values;
    out.zero_exempt = report.zero_exempt;
    out.witness = report.witness;
    out.beta = Some(ineq.beta);
    let stab_max = max_over_stab(g, &ineq.a);
    out.ratio_bound = value.as_ref().filter(|_| stab_max > 0).map(|v| v / BigRational::from_integer(stab_max.into()));
    out.inequality_value = value;
    Ok(out)
}

/// On-disk manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub level: u8,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph6: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inequality: Option<Inequality>,
    /// Tag name to integer index (`e_i ↦ i`, `f_i ↦ n + i`).
    #[serde(default)]
    pub tags: BTreeMap<String, usize>,
    /// Every CSV file in the bundle.
    pub matrices: Vec<String>,
}

fn read_matrix(dir: &Path, file: &str) -> Result<IntMatrix, CertifyError> {
    let path = dir.join(file);
    let text =
        fs::read_to_string(&path).map_err(|source| CertifyError::Io { path: path.display().to_string(), source })?;
    IntMatrix::parse_csv(&text).map_err(|source| CertifyError::Csv { file: file.to_string(), source })
}

/// What a bundle file name denotes.
enum FileRole {
    Matrix(MatrixId),
    Uvw(MatrixId, char),
}

fn classify_file(name: &str) -> Result<FileRole, CertifyError> {
    let unknown = || CertifyError::UnknownFile(name.to_string());
    let stem = name.strip_suffix(".csv").ok_or_else(unknown)?;
    if let Some(rest) = stem.strip_prefix("UVW_") {
        let (id, part) = rest.rsplit_once('_').ok_or_else(unknown)?;
        let part = match part {
            "U" => 'U',
            "V" => 'V',
            "W" => 'W',
            _ => return Err(unknown()),
        };
        return Ok(FileRole::Uvw(id.parse().map_err(|_| unknown())?, part));
    }
    Ok(FileRole::Matrix(stem.parse().map_err(|_| unknown())?))
}

/// Loads a bundle directory. Every file must be listed in the manifest and
/// every listed file must exist.
pub fn load_package(dir: &Path) -> Result<CertificatePackage, CertifyError> {
    let mpath = dir.join(MANIFEST);
    let text =
        fs::read_to_string(&mpath).map_err(|source| CertifyError::Io { path: mpath.display().to_string(), source })?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| CertifyError::Manifest(e.to_string()))?;
    if !(1..=3).contains(&manifest.level) {
        return Err(CertifyError::Level(manifest.level));
    }
    let listed: BTreeSet<&str> = manifest.matrices.iter().map(String::as_str).collect();
    if listed.len() != manifest.matrices.len() {
        return Err(CertifyError::Duplicate("file listed twice in manifest".into()));
    }
    let entries = fs::read_dir(dir).map_err(|source| CertifyError::Io { path: dir.display().to_string(), source })?;
    for entry in entries {
        let entry = entry.map_err(|source| CertifyError::Io { path: dir.display().to_string(), source })?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if name != MANIFEST && !listed.contains(name.as_str()) {
            return Err(CertifyError::UnknownFile(name));
        }
    }
    for (name, &idx) in &manifest.tags {
        let tag: Tag = name.parse()?;
        if tag.index(manifest.n) != idx {
            return Err(CertifyError::Manifest(format!(
                "tag {name} maps to {idx}, expected {}",
                tag.index(manifest.n)
            )));
        }
    }
    let mut y = None;
    let mut m1 = BTreeMap::new();
    let mut m2 = BTreeMap::new();
    let mut parts: BTreeMap<MatrixId, [Option<IntMatrix>; 3]> = BTreeMap::new();
    for file in &manifest.matrices {
        let m = read_matrix(dir, file)?;
        match classify_file(file)? {
            FileRole::Matrix(MatrixId::Y) => {
                if y.replace(m).is_some() {
                    return Err(CertifyError::Duplicate("Y".into()));
                }
            }
            FileRole::Matrix(MatrixId::M1(t)) => {
                if m1.insert(t, m).is_some() {
                    return Err(CertifyError::Duplicate(MatrixId::M1(t).to_string()));
                }
            }
            FileRole::Matrix(MatrixId::M2(t, s)) => {
                if m2.insert((t, s), m).is_some() {
                    return Err(CertifyError::Duplicate(MatrixId::M2(t, s).to_string()));
                }
            }
            FileRole::Uvw(id, part) => {
                let slot = &mut parts.entry(id).or_default()[match part {
                    'U' => 0,
                    'V' => 1,
                    _ => 2,
                }];
                if slot.replace(m).is_some() {
                    return Err(CertifyError::Duplicate(format!("UVW_{id}_{part}")));
                }
            }
        }
    }
    let y = y.ok_or_else(|| CertifyError::Manifest("bundle has no Y.csv".into()))?;
    let mut uvw = BTreeMap::new();
    for (id, [u, v, w]) in parts {
        match (u, v, w) {
            (Some(u), Some(v), Some(w)) => {
                uvw.insert(id, UvwCertificate { u, v, w });
            }
            _ => return Err(CertifyError::Manifest(format!("incomplete UVW triple for {id}"))),
        }
    }
    if let Some(g6) = &manifest.graph6 {
        let g = graph6_decode(g6)?;
        if g.n() != manifest.n {
            return Err(CertifyError::Manifest(format!("graph6 has {} vertices, manifest says {}", g.n(), manifest.n)));
        }
    }
    Ok(CertificatePackage {
        level: manifest.level,
        n: manifest.n,
        graph6: manifest.graph6,
        inequality: manifest.inequality,
        y,
        m1,
        m2,
        uvw,
    })
}

/// Writes a bundle directory (created if needed) with a manifest listing every file.
pub fn save_package(pkg: &CertificatePackage, dir: &Path) -> Result<(), CertifyError> {
    fs::create_dir_all(dir).map_err(|source| CertifyError::Io { path: dir.display().to_string(), source })?;
    let mut files: Vec<(String, &IntMatrix)> = Vec::new();
    for id in pkg.matrix_ids() {
        files.push((format!("{id}.csv"), pkg.matrix(id).expect("listed id")));
    }
    for (id, c) in &pkg.uvw {
        files.push((format!("UVW_{id}_U.csv"), &c.u));
        files.push((format!("UVW_{id}_V.csv"), &c.v));
        files.push((format!("UVW_{id}_W.csv"), &c.w));
    }
    for (name, m) in &files {
        let path = dir.join(name);
        fs::write(&path, m.to_csv()).map_err(|source| CertifyError::Io { path: path.display().to_string(), source })?;
    }
    let tags = if pkg.level >= 2 {
        Tag::all(pkg.n).into_iter().map(|t| (t.to_string(), t.index(pkg.n))).collect()
    } else {
        BTreeMap::new()
    };
    let manifest = Manifest {
        level: pkg.level,
        n: pkg.n,
        graph6: pkg.graph6.clone(),
        inequality: pkg.inequality.clone(),
        tags,
        matrices: files.into_iter().map(|(name, _)| name).collect(),
    };
    let path = dir.join(MANIFEST);
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, text + "\n").map_err(|source| CertifyError::Io { path: path.display().to_string(), source })
}

/// The graph a package names in its manifest.
pub fn package_graph(pkg: &CertificatePackage) -> Result<Option<Graph>, CertifyError> {
    pkg.graph6.as_deref().map(graph6_decode).transpose().map_err(CertifyError::from)
}

/// Sets the graph6 field from a graph.
pub fn attach_graph(pkg: &mut CertificatePackage, g: &Graph) {
    pkg.graph6 = Some(graph6_encode(g));
}
