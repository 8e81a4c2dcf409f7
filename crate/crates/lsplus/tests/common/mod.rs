//! Fixtures shared by the certify tests and the acceptance target.
#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::One;

use lsplus::certify::{self, CertificatePackage, FailureCode, MatrixId, Tag, UvwCertificate};
use lsplus::graphs::{parse_graph_collection, Graph};
use lsplus::numerics::IntMatrix;
use lsplus::synthesize::{stable_set_package, uvw_synthesize, SynthesisOptions};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn data(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn named(file: &str, name: &str) -> Graph {
    parse_graph_collection(&data(file)).unwrap().into_iter().find(|g| g.name == name).unwrap().graph
}

pub fn claw7() -> Graph {
    named("claw7.txt", "claw7")
}

pub fn claw7_bundle() -> CertificatePackage {
    certify::load_package(&data_path("bundles/claw7_level1")).unwrap()
}

fn resynthesize(pkg: &mut CertificatePackage, id: MatrixId) {
    let m = pkg.matrix(id).unwrap().clone();
    let cert = uvw_synthesize(&m, &SynthesisOptions::default()).expect("mutated matrix stays PSD");
    pkg.uvw.insert(id, cert);
}

fn bump(m: &mut IntMatrix, i: usize, j: usize, by: i64) {
    let v = m.get(i, j) + BigInt::from(by);
    m.set(i, j, v);
}

/// A corrupted package, the graph to check it against and the code it must raise.
pub struct Mutation {
    pub name: &'static str,
    pub expected: FailureCode,
    pub graph: Graph,
    pub package: CertificatePackage,
}

/// One corruption per verified condition, each built so that only the
/// targeted condition breaks.
pub fn mutations() -> Vec<Mutation> {
    let g = claw7();
    let base = claw7_bundle();
    let mut out = Vec::new();

    // Y[2][3] alone, lowered by one: breaks symmetry and nothing else (the
    // cone constraints still hold, and UVW is not evaluated on asymmetric input).
    let mut p = base.clone();
    bump(&mut p.y, 2, 3, -1);
    out.push(Mutation { name: "symmetry", expected: FailureCode::NotSymmetric, graph: g.clone(), package: p });

    // Y + uuᵀ with u = (2, χ_S) for the stable set S = {2,3,4}: PSD, symmetric
    // and inside cone(FRAC), but diag(Y) grows by χ_S while Ye0 grows by 2χ_S.
    let mut p = base.clone();
    let u = [2i64, 0, 1, 1, 1, 0, 0, 0];
    for i in 0..8 {
        for j in 0..8 {
            bump(&mut p.y, i, j, u[i] * u[j]);
        }
    }
    resynthesize(&mut p, MatrixId::Y);
    out.push(Mutation { name: "diag = Ye0", expected: FailureCode::DiagMismatch, graph: g.clone(), package: p });

    // Y + (1, χ_{1,2})(1, χ_{1,2})ᵀ with {1,2} an edge: PSD, symmetric and
    // diagonal-consistent, but column e_1 leaves cone(FRAC). UVW re-synthesized.
    let mut p = base.clone();
    for &i in &[0usize, 1, 2] {
        for &j in &[0usize, 1, 2] {
            bump(&mut p.y, i, j, 1);
        }
    }
    resynthesize(&mut p, MatrixId::Y);
    out.push(Mutation { name: "cone(FRAC)", expected: FailureCode::ConeFrac, graph: g.clone(), package: p });

    // Level 2 around the stable set {2,3,4}: Y_{e_2} replaced by e0e0ᵀ with its own
    // certificate, so Y_{e_2}e0 = e0 fails to dominate Ye_2 = (1, χ_S).
    let stable = 0b0001110;
    let mut p = stable_set_package(&g, stable, 2);
    let t = Tag::E(2);
    let mut e00 = IntMatrix::zeros(8, 8);
    e00.set(0, 0, BigInt::one());
    p.m1.insert(t, e00.clone());
    let mut u = IntMatrix::zeros(1, 8);
    u.set(0, 0, BigInt::one());
    p.uvw.insert(MatrixId::M1(t), UvwCertificate { u, v: IntMatrix::zeros(8, 8), w: IntMatrix::identity(8) });
    out.push(Mutation { name: "domination", expected: FailureCode::Dominance, graph: g.clone(), package: p });

    // One entry of U: the product no longer equals kY; V is untouched.
    let mut p = base.clone();
    bump(&mut p.uvw.get_mut(&MatrixId::Y).unwrap().u, 0, 0, 1);
    out.push(Mutation { name: "UVW product", expected: FailureCode::UvwMismatch, graph: g.clone(), package: p });

    // Product-preserving: append the row 8·e0 to U and lower V00 by 64, so
    // UᵀU + V is unchanged but V loses diagonal dominance in row 0.
    let mut p = base.clone();
    let cert = p.uvw.get_mut(&MatrixId::Y).unwrap();
    let cols = cert.u.cols();
    let mut rows: Vec<Vec<BigInt>> = (0..cert.u.rows()).map(|i| cert.u.row(i)).collect();
    let mut extra = vec![BigInt::from(0); cols];
    extra[0] = BigInt::from(8);
    rows.push(extra);
    cert.u = IntMatrix::from_row_vecs(rows).unwrap();
    bump(&mut cert.v, 0, 0, -64);
    out.push(Mutation { name: "diagonal dominance", expected: FailureCode::NotDiagDominant, graph: g, package: p });

    out
}
