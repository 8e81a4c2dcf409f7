//! Construction of integer UVW-certificates from exact PSD matrices and
//! assembly of complete certificate packages.
//!
//! For a symmetric integer `Y` the synthesizer picks a nonsingular principal
//! block `Y'` of full rank, expresses `Y = W₁ᵀY'W₁`, bounds the least
//! eigenvalue of `Y'` from below by `λ̂ > 0`, factors `Y' − (λ̂/2)I = LDLᵀ`,
//! rounds `√D` down to dyadic rationals to obtain `U₁`, and leaves the
//! remainder `V₁ = Y' − U₁ᵀU₁` which is diagonally dominant once the dyadic
//! precision is fine enough. Clearing denominators gives the integer triple.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::certify::{
    verify_package, CertificatePackage, CertifyError, Failure, FailureCode, MatrixId, Tag, UvwCertificate,
};
use crate::graphs::Graph;
use crate::numerics::{
    denominator_lcm, determinant, inverse, is_diag_dominant_rat, is_positive_definite, isqrt, ldl, IntMatrix, RatMatrix,
};
use crate::polytope::homogenized_incidence;

/// Tuning knobs for rationalization and certificate synthesis.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisOptions {
    /// Largest denominator accepted by [`rationalize`].
    pub denominator_bound: u64,
    /// Fraction of the eigenvalue bound `λ̂` reserved as diagonal budget for
    /// the residual `V₁` (the factor is applied to `Y' − slack·λ̂·I`).
    pub dominance_slack: BigRational,
    /// First binary exponent tried for the dyadic square roots.
    pub initial_exponent: u32,
    /// Largest binary exponent tried before giving up.
    pub max_exponent: u32,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        Self {
            denominator_bound: 1_000_000,
            dominance_slack: BigRational::new(1.into(), 2.into()),
            initial_exponent: 4,
            max_exponent: 256,
        }
    }
}

/// Synthesis failures.
#[derive(Debug, Error)]
pub enum SynthesisError {
    /// A floating input contained NaN or an infinity.
    #[error("non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },
    /// The input matrix is not symmetric.
    #[error("matrix is not symmetric")]
    NotSymmetric,
    /// The matrix is not positive semidefinite.
    #[error("NOT_PSD: {0}")]
    NotPsd(String),
    /// Dyadic precision ran out before the residual became dominant.
    #[error("denominator bound too small: no dominant residual up to 2^{max_exponent}; raise max_exponent")]
    DenominatorTooSmall { max_exponent: u32 },
    /// A structural package condition fails independently of PSD-ness.
    #[error("structural condition failed: {}", .0.iter().map(|f| format!("{} {} {}", f.code, f.subject, f.message)).collect::<Vec<_>>().join("; "))]
    Structural(Vec<Failure>),
    /// A matrix of the package could not be certified.
    #[error("{id}: {source}")]
    Matrix { id: String, source: Box<SynthesisError> },
    /// Verification raised a malformed-input error.
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

impl SynthesisError {
    /// The machine-readable code of the underlying cause.
    pub fn code(&self) -> &'static str {
        match self {
            SynthesisError::NonFinite { .. } => "NON_FINITE",
            SynthesisError::NotSymmetric => "NOT_SYMMETRIC",
            SynthesisError::NotPsd(_) => "NOT_PSD",
            SynthesisError::DenominatorTooSmall { .. } => "DENOMINATOR_TOO_SMALL",
            SynthesisError::Structural(f) => f.first().map_or("STRUCTURAL", |f| f.code.as_str()),
            SynthesisError::Matrix { source, .. } => source.code(),
            SynthesisError::Certify(_) => "MALFORMED",
        }
    }
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// from the continued fraction expansion and its last semiconvergent.
pub fn best_rational(x: f64, max_den: u64) -> BigRational {
    assert!(x.is_finite() && max_den >= 1);
    let neg = x < 0.0;
    let mut f = x.abs();
    let limit = max_den as i128;
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    loop {
        let a = f.floor();
        if a > 1e30 {
            break;
        }
        let a = a as i128;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > limit {
            let t = (limit - k0) / k1;
            let (hs, ks) = (t * h1 + h0, t * k1 + k0);
            let err = |h: i128, k: i128| (h as f64 / k as f64 - x.abs()).abs();
            if t > 0 && err(hs, ks) < err(h1, k1) {
                h1 = hs;
                k1 = ks;
            }
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = f - a as f64;
        if frac <= f64::EPSILON * f.max(1.0) || h1 as f64 / k1 as f64 == x.abs() {
            break;
        }
        f = 1.0 / frac;
    }
    let r = BigRational::new(BigInt::from(h1), BigInt::from(k1));
    if neg {
        -r
    } else {
        r
    }
}

/// Entrywise best rational approximation of a floating matrix after
/// symmetrizing it as `(M + Mᵀ)/2`.
pub fn rationalize(m: &[Vec<f64>], opts: &SynthesisOptions) -> Result<RatMatrix, SynthesisError> {
    let n = m.len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(SynthesisError::NotSymmetric);
        }
        if let Some(j) = row.iter().position(|v| !v.is_finite()) {
            return Err(SynthesisError::NonFinite { row: i, col: j });
        }
    }
    let mut out = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let r = best_rational((m[i][j] + m[j][i]) / 2.0, opts.denominator_bound);
            out.set(i, j, r.clone());
            out.set(j, i, r);
        }
    }
    Ok(out)
}

/// Parses floating matrices written as CSV of decimal literals.
pub fn parse_float_csv(text: &str) -> Result<Vec<Vec<f64>>, String> {
    text.lines()
        .map(|l| l.trim_end_matches('\r'))
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, line)| {
            line.split(',').map(|f| f.trim().parse::<f64>().map_err(|e| format!("line {}: {e}", i + 1))).collect()
        })
        .collect()
}

/// Greedy principal pivots: index `i` joins `P` when `Y[P ∪ {i}]` stays nonsingular.
fn principal_pivots(y: &RatMatrix) -> Vec<usize> {
    let mut p: Vec<usize> = Vec::new();
    for i in 0..y.rows() {
        let mut cand = p.clone();
        cand.push(i);
        if !determinant(&y.submatrix(&cand, &cand)).is_zero() {
            p = cand;
        }
    }
    p
}

fn shifted(m: &RatMatrix, t: &BigRational) -> RatMatrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        let v = m.get(i, i) - t;
        out.set(i, i, v);
    }
    out
}

/// Rational `λ̂ > 0` with `Y' − λ̂I` positive definite, found by bisection on
/// `[0, min diag]` until the bracket width is at most `λ̂/4`.
fn eigenvalue_lower_bound(yp: &RatMatrix) -> BigRational {
    let mut lo = BigRational::zero();
    let mut hi = yp.diagonal().into_iter().min().expect("nonempty block");
    let four = BigRational::from_integer(4.into());
    let two = BigRational::from_integer(2.into());
    loop {
        if lo.is_positive() && &hi - &lo <= &lo / &four {
            return lo;
        }
        let mid = (&lo + &hi) / &two;
        if is_positive_definite(&shifted(yp, &mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

fn rat_to_int(m: &RatMatrix, scale: &BigInt) -> IntMatrix {
    let s = BigRational::from_integer(scale.clone());
    let entries: Vec<BigInt> = m
        .entries()
        .iter()
        .map(|v| {
            let x = v * &s;
            debug_assert!(x.is_integer());
            x.to_integer()
        })
        .collect();
    IntMatrix::from_entries(m.rows(), m.cols(), entries).expect("shape preserved")
}

/// Integer UVW-certificate for a symmetric integer PSD matrix.
pub fn uvw_synthesize(y: &IntMatrix, opts: &SynthesisOptions) -> Result<UvwCertificate, SynthesisError> {
    if !y.is_square() || !y.is_symmetric() {
        return Err(SynthesisError::NotSymmetric);
    }
    let n = y.rows();
    if y.is_zero() {
        return Ok(UvwCertificate { u: IntMatrix::zeros(n, n), v: IntMatrix::zeros(n, n), w: IntMatrix::identity(n) });
    }
    let yr = y.to_rat();
    let p = principal_pivots(&yr);
    if p.is_empty() {
        return Err(SynthesisError::NotPsd("every diagonal entry is zero but the matrix is not".into()));
    }
    let all: Vec<usize> = (0..n).collect();
    let yp = yr.submatrix(&p, &p);
    let w1 = inverse(&yp).expect("pivot block is nonsingular").mul(&yr.submatrix(&p, &all)).expect("shapes");
    let back = w1.transpose().mul(&yp).and_then(|m| m.mul(&w1)).expect("shapes");
    if back != yr {
        return Err(SynthesisError::NotPsd(format!("rank-{} pivot block does not reproduce the matrix", p.len())));
    }
    if !is_positive_definite(&yp) {
        return Err(SynthesisError::NotPsd(format!("principal block on rows {p:?} is not positive definite")));
    }
    let lambda = eigenvalue_lower_bound(&yp);
    let budget = &lambda * &opts.dominance_slack;
    let (l, d) = ldl(&shifted(&yp, &budget)).expect("shifted block stays positive definite");
    let dim = p.len();
    for e in opts.initial_exponent..=opts.max_exponent {
        let q = BigInt::one() << e;
        let q2 = &q * &q;
        let s: Vec<BigRational> = d
            .iter()
            .map(|di| {
                let scaled = (di * BigRational::from_integer(q2.clone())).floor().to_integer();
                BigRational::new(isqrt(&scaled), q.clone())
            })
            .collect();
        let mut u1 = l.transpose();
        for i in 0..dim {
            for j in 0..dim {
                let v = u1.get(i, j) * &s[i];
                u1.set(i, j, v);
            }
        }
        let gram = u1.transpose().mul(&u1).expect("square");
        let mut v1 = yp.clone();
        for i in 0..dim {
            for j in 0..dim {
                let v = v1.get(i, j) - gram.get(i, j);
                v1.set(i, j, v);
            }
        }
        if !is_diag_dominant_rat(&v1) {
            continue;
        }
        let cw = denominator_lcm(w1.entries());
        let cu = denominator_lcm(u1.entries());
        let u = rat_to_int(&u1, &cu);
        let v = rat_to_int(&v1, &(&cu * &cu));
        let w = rat_to_int(&w1, &cw);
        return Ok(UvwCertificate { u, v, w });
    }
    Err(SynthesisError::DenominatorTooSmall { max_exponent: opts.max_exponent })
}

/// Builds a package from caller-supplied layer matrices, checks every
/// structural condition and synthesizes all UVW certificates.
pub fn assemble_package(
    g: &Graph,
    level: u8,
    y: IntMatrix,
    m1: BTreeMap<Tag, IntMatrix>,
    m2: BTreeMap<(Tag, Tag), IntMatrix>,
    opts: &SynthesisOptions,
) -> Result<CertificatePackage, SynthesisError> {
    let mut pkg = CertificatePackage::new(level, g.n(), y);
    pkg.m1 = m1;
    pkg.m2 = m2;
    let report = verify_package(g, &pkg)?;
    let structural: Vec<Failure> =
        report.failures.into_iter().filter(|f| f.code != FailureCode::MissingCertificate).collect();
    if !structural.is_empty() {
        return Err(SynthesisError::Structural(structural));
    }
    let ids: Vec<MatrixId> =
        pkg.matrix_ids().into_iter().filter(|&id| !pkg.matrix(id).expect("id").is_zero()).collect();
    let certs: Vec<(MatrixId, Result<UvwCertificate, SynthesisError>)> =
        ids.par_iter().map(|&id| (id, uvw_synthesize(pkg.matrix(id).expect("id"), opts))).collect();
    for (id, cert) in certs {
        let cert = cert.map_err(|e| SynthesisError::Matrix { id: id.to_string(), source: Box::new(e) })?;
        pkg.uvw.insert(id, cert);
    }
    let report = verify_package(g, &pkg)?;
    if !report.accepted {
        return Err(SynthesisError::Structural(report.failures));
    }
    Ok(pkg)
}

/// `vvᵀ` for `v = (1, χ_S)`.
fn outer(v: &[i64]) -> IntMatrix {
    let rows: Vec<Vec<i64>> = v.iter().map(|a| v.iter().map(|b| a * b).collect()).collect();
    IntMatrix::from_i64_rows(&rows).expect("square")
}

/// Value of a tag on the homogeneous point `v`.
fn tag_value(t: Tag, v: &[i64]) -> i64 {
    match t {
        Tag::E(i) => v[i],
        Tag::F(i) => v[0] - v[i],
    }
}

/// The package of the integral point `(1, χ_S)` for a stable set `S`:
/// `Y = vvᵀ`, `Y_t = (t·v)Y` and `Y_{ts} = (t·v)(s·v)Y`, each nonzero
/// matrix certified by `U = vᵀ`, `V = 0`, `W = I` with `k = 1`. All first
/// layer matrices are stored; zero second-layer matrices are omitted.
pub fn stable_set_package(g: &Graph, stable: u64, level: u8) -> CertificatePackage {
    assert!(g.is_stable(stable), "mask must be a stable set");
    let n = g.n();
    let v = homogenized_incidence(stable, n);
    let y = outer(&v);
    let cert = UvwCertificate {
        u: IntMatrix::from_i64_rows(std::slice::from_ref(&v)).expect("row"),
        v: IntMatrix::zeros(n + 1, n + 1),
        w: IntMatrix::identity(n + 1),
    };
    let mut pkg = CertificatePackage::new(level, n, y.clone());
    pkg.uvw.insert(MatrixId::Y, cert.clone());
    if level >= 2 {
        for t in Tag::all(n) {
            let on = tag_value(t, &v) == 1;
            pkg.m1.insert(t, if on { y.clone() } else { IntMatrix::zeros(n + 1, n + 1) });
            if on {
                pkg.uvw.insert(MatrixId::M1(t), cert.clone());
            }
            if level == 3 && on {
                for s in Tag::all(n) {
                    if tag_value(s, &v) == 1 {
                        pkg.m2.insert((t, s), y.clone());
                        pkg.uvw.insert(MatrixId::M2(t, s), cert.clone());
                    }
                }
            }
        }
    }
    pkg
}
