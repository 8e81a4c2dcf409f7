//! Stable set polytope STAB(G) and fractional relaxation FRAC(G): stable-set
//! enumeration, validity and facet tests, exact facet enumeration by double
//! description, cone membership and domination of homogeneous points.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{bits, max_weight_stable_set, Graph};
use crate::numerics::{lp_max_exact, rational_rank, LpOutcome, NumericsError, RatMatrix};

/// Errors raised by polytope operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    /// The coefficient vector length differs from the vertex count.
    #[error("inequality has {found} coefficients for a graph on {expected} vertices")]
    Dimension { expected: usize, found: usize },
    /// A facet test was requested for an inequality that STAB(G) violates.
    #[error("inequality is not valid for STAB(G): a stable set attains {attained} > {beta}")]
    NotValid { attained: i64, beta: i64 },
    /// A CSV facet row could not be parsed.
    #[error("malformed inequality row: {0}")]
    Malformed(String),
    /// The underlying LP failed.
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// The inequality `aᵀx ≤ β` over the vertex set of a graph (0-based coordinates).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Inequality {
    /// Coefficients, one per vertex.
    pub a: Vec<i64>,
    /// Right-hand side.
    pub beta: i64,
}

impl Inequality {
    /// Builds `aᵀx ≤ β`.
    pub fn new(a: Vec<i64>, beta: i64) -> Self {
        Self { a, beta }
    }

    /// The rank inequality `ēᵀx ≤ β` on `n` vertices.
    pub fn all_ones(n: usize, beta: i64) -> Self {
        Self { a: vec![1; n], beta }
    }

    /// Support of `a` as a vertex mask.
    pub fn support(&self) -> u64 {
        self.a.iter().enumerate().filter(|(_, &c)| c != 0).fold(0, |m, (i, _)| m | 1 << i)
    }

    /// True iff every coefficient is positive.
    pub fn is_full_support_nonnegative(&self) -> bool {
        self.a.iter().all(|&c| c > 0)
    }

    /// True iff this is a nonnegativity constraint `−x_i ≤ 0`.
    pub fn is_nonnegativity(&self) -> bool {
        self.beta == 0 && self.a.iter().filter(|&&c| c != 0).count() == 1 && self.a.contains(&-1)
    }

    /// `aᵀχ_S` for the stable set `S` given as a mask.
    pub fn value_on(&self, mask: u64) -> i64 {
        bits(mask).map(|v| self.a[v]).sum()
    }

    /// CSV row `a₁,…,a_n,β`.
    pub fn to_csv_row(&self) -> String {
        let mut fields: Vec<String> = self.a.iter().map(i64::to_string).collect();
        fields.push(self.beta.to_string());
        fields.join(",")
    }

    /// Parses a CSV row `a₁,…,a_n,β`.
    pub fn parse_csv_row(row: &str) -> Result<Self, PolytopeError> {
        let values: Result<Vec<i64>, _> = row.trim().split(',').map(|f| f.trim().parse::<i64>()).collect();
        let mut values = values.map_err(|e| PolytopeError::Malformed(format!("{row:?}: {e}")))?;
        let beta = values.pop().ok_or_else(|| PolytopeError::Malformed("empty row".into()))?;
        Ok(Self { a: values, beta })
    }

    fn check_dim(&self, g: &Graph) -> Result<(), PolytopeError> {
        if self.a.len() == g.n() {
            Ok(())
        } else {
            Err(PolytopeError::Dimension { expected: g.n(), found: self.a.len() })
        }
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<String> = self.a.iter().map(i64::to_string).collect();
        write!(f, "({})ᵀx ≤ {}", coeffs.join(","), self.beta)
    }
}

/// All stable sets of `g` as vertex masks, including ∅, sorted by size and
/// then lexicographically on the increasing vertex list.
pub fn enumerate_stable_sets(g: &Graph) -> Vec<u64> {
    let mut out = Vec::new();
    fn go(g: &Graph, cand: u64, cur: u64, out: &mut Vec<u64>) {
        out.push(cur);
        for v in bits(cand) {
            let higher = cand & !((1u64 << (v + 1)) - 1);
            go(g, higher & !g.neighbors(v), cur | 1 << v, out);
        }
    }
    go(g, g.vertex_mask(), 0, &mut out);
    // the recursion already yields lexicographic order within each size
    out.sort_by_key(|m| m.count_ones());
    out
}

/// Renders a stable set as a bitstring line, vertex 1 first.
pub fn stable_set_bitstring(mask: u64, n: usize) -> String {
    (0..n).map(|v| if mask >> v & 1 == 1 { '1' } else { '0' }).collect()
}

/// `max{aᵀx : x ∈ STAB(G)}`.
pub fn max_over_stab(g: &Graph, a: &[i64]) -> i64 {
    max_weight_stable_set(g, a).0
}

/// True iff `aᵀχ_S ≤ β` for every stable set `S`.
pub fn is_valid_for_stab(g: &Graph, ineq: &Inequality) -> bool {
    ineq.a.len() == g.n() && max_over_stab(g, &ineq.a) <= ineq.beta
}

/// Rank of a set of integer rows, by fraction-free elimination in `i128`
/// with a rational fallback on overflow. Stops once `cap` is reached.
fn row_rank(rows: &[Vec<i64>], cap: usize) -> usize {
    let mut basis: Vec<(usize, Vec<i128>)> = Vec::new();
    let mut overflow = false;
    'rows: for row in rows {
        let mut r: Vec<i128> = row.iter().map(|&x| x as i128).collect();
        for (p, b) in &basis {
            if r[*p] != 0 {
                let (f, h) = (b[*p], r[*p]);
                for (x, y) in r.iter_mut().zip(b) {
                    match x.checked_mul(f).and_then(|xf| y.checked_mul(h).and_then(|yh| xf.checked_sub(yh))) {
                        Some(v) => *x = v,
                        None => {
                            overflow = true;
                            break 'rows;
                        }
                    }
                }
                let g = r.iter().fold(0i128, |g, &x| g.gcd(&x));
                if g > 1 {
                    r.iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        if let Some(p) = r.iter().position(|&x| x != 0) {
            basis.push((p, r));
            if basis.len() >= cap {
                return basis.len();
            }
        }
    }
    if overflow {
        let m = RatMatrix::from_row_vecs(
            rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect(),
        )
        .expect("rectangular rows");
        return rational_rank(&m);
    }
    basis.len()
}

/// True iff the valid inequality induces a facet of STAB(G), i.e. the
/// homogenized tight incidence vectors `(1, χ_S)` have rank `n`.
pub fn is_facet(g: &Graph, ineq: &Inequality) -> Result<bool, PolytopeError> {
    ineq.check_dim(g)?;
    let attained = max_over_stab(g, &ineq.a);
    if attained > ineq.beta {
        return Err(PolytopeError::NotValid { attained, beta: ineq.beta });
    }
    let n = g.n();
    let tight: Vec<Vec<i64>> = enumerate_stable_sets(g)
        .into_iter()
        .filter(|&s| ineq.value_on(s) == ineq.beta)
        .map(|s| std::iter::once(1).chain((0..n).map(|v| (s >> v & 1) as i64)).collect())
        .collect();
    Ok(row_rank(&tight, n) == n)
}

/// Scalars usable by the double description kernel.
trait DdScalar: Clone + Ord + Zero + Signed {
    /// `a·x − b·y`, or `None` on overflow.
    fn combine(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn gcd_of(values: &[Self]) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
}

impl DdScalar for i64 {
    fn combine(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn gcd_of(values: &[Self]) -> Self {
        values.iter().fold(0i64, |g, v| g.gcd(v))
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
}

impl DdScalar for BigInt {
    fn combine(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
    fn gcd_of(values: &[Self]) -> Self {
        values.iter().fold(BigInt::zero(), |g, v| g.gcd(v))
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
}

struct Ray<T> {
    coords: Vec<T>,
    zeros: Vec<u64>,
}

fn bitset_is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Extreme rays of `{(a, β) : β − aᵀχ_S ≥ 0 for all stable S}` by the
/// double description method, or `None` if `T` overflows.
fn double_description<T: DdScalar + From<i64>>(n: usize, rows: &[u64]) -> Option<Vec<Vec<T>>> {
    let dim = n + 1;
    let words = rows.len().div_ceil(64).max(1);
    // value of constraint `S` on ray (a, β) is β − Σ_{v∈S} a_v
    let eval = |coords: &[T], s: u64| -> Option<T> {
        let mut acc = coords[n].clone();
        for v in bits(s) {
            acc = T::combine(&T::one(), &acc, &T::one(), &coords[v])?;
        }
        Some(acc)
    };
    let with_zeros = |coords: Vec<T>, upto: usize| -> Option<Ray<T>> {
        let mut zeros = vec![0u64; words];
        for (k, &s) in rows[..upto].iter().enumerate() {
            if eval(&coords, s)?.is_zero() {
                zeros[k / 64] |= 1 << (k % 64);
            }
        }
        Some(Ray { coords, zeros })
    };
    // rows[0] = ∅ and rows[1..=n] = the singletons form a simplicial start
    debug_assert!(rows.len() > n && rows[0] == 0);
    let mut rays: Vec<Ray<T>> = Vec::new();
    rays.push(with_zeros(vec![T::from(1); dim], dim)?);
    for i in 0..n {
        let mut c = vec![T::from(0); dim];
        c[i] = T::from(-1);
        rays.push(with_zeros(c, dim)?);
    }
    for (k, &s) in rows.iter().enumerate().skip(dim) {
        let values: Vec<T> = rays.iter().map(|r| eval(&r.coords, s)).collect::<Option<_>>()?;
        let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
        for (idx, v) in values.iter().enumerate() {
            if v.is_positive() {
                pos.push(idx);
            } else if v.is_negative() {
                neg.push(idx);
            } else {
                zero.push(idx);
            }
        }
        if neg.is_empty() {
            for &z in &zero {
                rays[z].zeros[k / 64] |= 1 << (k % 64);
            }
            continue;
        }
        let mut next: Vec<Ray<T>> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common: Vec<u64> = rays[p].zeros.iter().zip(&rays[q].zeros).map(|(a, b)| a & b).collect();
                let count: u32 = common.iter().map(|w| w.count_ones()).sum();
                if (count as usize) + 2 < dim {
                    continue;
                }
                let adjacent =
                    rays.iter().enumerate().all(|(r, ray)| r == p || r == q || !bitset_is_subset(&common, &ray.zeros));
                if !adjacent {
                    continue;
                }
                // vp > 0 > vq: the combination vp·q − vq·p vanishes on the new row
                let (vp, vq) = (&values[p], &values[q]);
                let mut coords = Vec::with_capacity(dim);
                for (x, y) in rays[q].coords.iter().zip(&rays[p].coords) {
                    coords.push(T::combine(vp, x, vq, y)?);
                }
                let g = T::gcd_of(&coords);
                if !g.is_zero() {
                    coords.iter_mut().for_each(|c| *c = c.div_exact(&g));
                }
                let mut zeros = common;
                zeros[k / 64] |= 1 << (k % 64);
                next.push(Ray { coords, zeros });
            }
        }
        let mut kept: Vec<Ray<T>> = Vec::with_capacity(pos.len() + zero.len() + next.len());
        for (idx, ray) in rays.into_iter().enumerate() {
            if values[idx].is_positive() {
                kept.push(ray);
            } else if values[idx].is_zero() {
                let mut ray = ray;
                ray.zeros[k / 64] |= 1 << (k % 64);
                kept.push(ray);
            }
        }
        kept.extend(next);
        rays = kept;
    }
    Some(rays.into_iter().map(|r| r.coords).collect())
}

/// Sort key: nonnegativity facets first by vertex, then by `β` and `a`.
fn facet_order(f: &Inequality) -> (bool, usize, i64, Vec<i64>) {
    let neg_vertex = if f.is_nonnegativity() { f.a.iter().position(|&c| c != 0).unwrap_or(0) } else { 0 };
    (!f.is_nonnegativity(), neg_vertex, f.beta, f.a.iter().map(|c| -c).collect())
}

/// The irredundant facet list of STAB(G), each scaled to coprime integers.
/// Nonnegativity facets `−x_i ≤ 0` come first, then the rest ordered by `β`
/// and by decreasing coefficient vector.
pub fn enumerate_facets(g: &Graph) -> Vec<Inequality> {
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }
    let rows = enumerate_stable_sets(g);
    let rays: Vec<Vec<i64>> = match double_description::<i64>(n, &rows) {
        Some(r) => r,
        None => double_description::<BigInt>(n, &rows)
            .expect("arbitrary precision never overflows")
            .into_iter()
            .map(|r| r.iter().map(|c| i64::try_from(c).expect("facet coefficient fits in i64")).collect())
            .collect(),
    };
    let mut facets: Vec<Inequality> = rays
        .into_iter()
        .map(|mut c| {
            let beta = c.pop().expect("β coordinate");
            Inequality { a: c, beta }
        })
        .collect();
    facets.sort_by_key(facet_order);
    facets.dedup();
    facets
}

/// Facets with full support and nonnegative coefficients.
pub fn full_support_facets(g: &Graph) -> Vec<Inequality> {
    enumerate_facets(g).into_iter().filter(Inequality::is_full_support_nonnegative).collect()
}

/// `y ∈ cone(FRAC(G))` for a homogeneous point `y = (y₀, y₁, …, y_n)`:
/// either `y = 0`, or `y₀ > 0`, `0 ≤ y_i ≤ y₀` and `y_i + y_j ≤ y₀` on edges.
pub fn cone_frac_member<T>(g: &Graph, y: &[T]) -> bool
where
    T: Clone + Ord + Zero + for<'a> Add<&'a T, Output = T>,
{
    if y.len() != g.n() + 1 {
        return false;
    }
    if y.iter().all(Zero::is_zero) {
        return true;
    }
    let y0 = &y[0];
    if *y0 <= T::zero() {
        return false;
    }
    if y[1..].iter().any(|v| *v < T::zero() || v > y0) {
        return false;
    }
    g.edges().iter().all(|&(i, j)| y[i + 1].clone() + &y[j + 1] <= *y0)
}

/// Index of the first coordinate of `y` that violates cone(FRAC(G)) membership,
/// as a human-readable reason, or `None` when `y` is a member.
pub fn cone_frac_violation<T>(g: &Graph, y: &[T]) -> Option<String>
where
    T: Clone + Ord + Zero + fmt::Display + for<'a> Add<&'a T, Output = T>,
{
    if y.len() != g.n() + 1 {
        return Some(format!("point has {} coordinates, expected {}", y.len(), g.n() + 1));
    }
    if cone_frac_member(g, y) {
        return None;
    }
    let y0 = &y[0];
    if *y0 <= T::zero() {
        return Some(format!("nonzero point with y0 = {y0}"));
    }
    for (i, v) in y[1..].iter().enumerate() {
        if *v < T::zero() || v > y0 {
            return Some(format!("coordinate {} = {v} outside [0, {y0}]", i + 1));
        }
    }
    for (i, j) in g.edges() {
        if y[i + 1].clone() + &y[j + 1] > *y0 {
            return Some(format!("edge {{{},{}}}: {} + {} > {y0}", i + 1, j + 1, y[i + 1], y[j + 1]));
        }
    }
    None
}

/// `x1` dominates `x2`: both zero, or `x1₀ > 0`, `x2₀ ≥ 0` and
/// `x2₀ · x1 ≥ x1₀ · x2` componentwise.
pub fn dominates<T>(x1: &[T], x2: &[T]) -> bool
where
    T: Clone + Ord + Zero + for<'a> Mul<&'a T, Output = T>,
{
    if x1.len() != x2.len() || x1.is_empty() {
        return false;
    }
    let zero1 = x1.iter().all(Zero::is_zero);
    let zero2 = x2.iter().all(Zero::is_zero);
    if zero1 && zero2 {
        return true;
    }
    if x1[0] <= T::zero() || x2[0] < T::zero() {
        return false;
    }
    x1.iter().zip(x2).all(|(a, b)| x2[0].clone() * a >= x1[0].clone() * b)
}

/// FRAC(G) as explicit constraints `(a, b)` meaning `aᵀx ≤ b`: box bounds
/// then one row per edge.
pub fn frac_constraints(g: &Graph) -> Vec<(Vec<BigRational>, BigRational)> {
    let n = g.n();
    let unit = |i: usize, s: i64| -> Vec<BigRational> {
        (0..n).map(|j| BigRational::from_integer(if i == j { s.into() } else { 0.into() })).collect()
    };
    let mut out = Vec::new();
    for i in 0..n {
        out.push((unit(i, 1), BigRational::one()));
        out.push((unit(i, -1), BigRational::zero()));
    }
    for (i, j) in g.edges() {
        let mut a = unit(i, 1);
        a[j] = BigRational::one();
        out.push((a, BigRational::one()));
    }
    out
}

/// `max{cᵀx : x ∈ FRAC(G)}` by exact simplex.
pub fn frac_lp_max(g: &Graph, objective: &[BigRational]) -> Result<BigRational, PolytopeError> {
    match lp_max_exact(&frac_constraints(g), objective)? {
        LpOutcome::Optimal(v) => Ok(v),
        LpOutcome::Unbounded => unreachable!("FRAC(G) is bounded"),
    }
}

/// `max{ēᵀx : x ∈ FRAC(G)}`.
pub fn frac_max_all_ones(g: &Graph) -> Result<BigRational, PolytopeError> {
    frac_lp_max(g, &vec![BigRational::one(); g.n()])
}

/// The homogenized incidence vector `(1, χ_S)` of a stable set.
pub fn homogenized_incidence(mask: u64, n: usize) -> Vec<i64> {
    std::iter::once(1).chain((0..n).map(|v| (mask >> v & 1) as i64)).collect()
}
