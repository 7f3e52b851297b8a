//! Exact rational linear algebra and polyhedral primitives.

mod linalg;
mod lp;

use std::fmt;

pub use linalg::{gram_schmidt, nullspace, rank, solve_square};
pub use lp::{lp_min, LpOutcome};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::diffval::DifferentialValuation;
use crate::error::{Error, Result};
use crate::rat::Rat;

/// A point (or direction) of `ℚ^n`.
pub type Point = Vec<Rat>;

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

pub fn add(a: &[Rat], b: &[Rat]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Rat, a: &[Rat]) -> Point {
    a.iter().map(|x| c * x).collect()
}

pub fn is_zero_vector(a: &[Rat]) -> bool {
    a.iter().all(Rat::is_zero)
}

pub fn in_unit_cube(p: &[Rat]) -> bool {
    p.iter().all(|x| !x.is_negative() && *x <= Rat::one())
}

/// `Some(c)` with `c > 0` when `a = c * b`.
pub fn positive_multiple(a: &[Rat], b: &[Rat]) -> Option<Rat> {
    if a.len() != b.len() {
        return None;
    }
    let j = b.iter().position(|x| !x.is_zero())?;
    let c = &a[j] / &b[j];
    if !c.is_positive() {
        return None;
    }
    a.iter().zip(b).all(|(x, y)| *x == &c * y).then_some(c)
}

/// Comma-separated rationals, e.g. `1/2,0`.
pub fn format_point(p: &[Rat]) -> String {
    p.iter().map(Rat::to_string).collect::<Vec<_>>().join(",")
}

pub fn parse_point(s: &str) -> std::result::Result<Point, crate::error::ParseRatError> {
    s.split([',', ' ']).filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `c0 + c1*x1 + … + cn*xn`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineFn {
    constant: Rat,
    coeffs: Vec<Rat>,
}

impl AffineFn {
    pub fn new(constant: Rat, coeffs: Vec<Rat>) -> AffineFn {
        AffineFn { constant, coeffs }
    }

    pub fn constant_fn(dim: usize, c: Rat) -> AffineFn {
        AffineFn::new(c, vec![Rat::zero(); dim])
    }

    /// The coordinate function `x_{i+1}` (0-based `i`).
    pub fn coordinate(dim: usize, i: usize) -> AffineFn {
        let mut coeffs = vec![Rat::zero(); dim];
        coeffs[i] = Rat::one();
        AffineFn::new(Rat::zero(), coeffs)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn constant(&self) -> &Rat {
        &self.constant
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// The gradient, i.e. the coefficient vector.
    pub fn gradient(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.is_constant()
    }

    /// `(j, c)` when the function is `c*x_j + const` with `c != 0`.
    pub fn single_variable(&self) -> Option<(usize, &Rat)> {
        let mut found = None;
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                if found.is_some() {
                    return None;
                }
                found = Some((j, c));
            }
        }
        found
    }

    pub fn eval(&self, p: &[Rat]) -> Rat {
        debug_assert_eq!(p.len(), self.dim());
        let mut acc = self.constant.clone();
        for (c, x) in self.coeffs.iter().zip(p) {
            if !c.is_zero() && !x.is_zero() {
                acc += c * x;
            }
        }
        acc
    }

    /// `∇f · u`.
    pub fn slope(&self, u: &[Rat]) -> Rat {
        dot(&self.coeffs, u)
    }

    pub fn add(&self, other: &AffineFn) -> AffineFn {
        AffineFn::new(&self.constant + &other.constant, add(&self.coeffs, &other.coeffs))
    }

    pub fn sub(&self, other: &AffineFn) -> AffineFn {
        AffineFn::new(&self.constant - &other.constant, sub(&self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, c: &Rat) -> AffineFn {
        AffineFn::new(c * &self.constant, scale(c, &self.coeffs))
    }

    pub fn add_constant(&self, c: &Rat) -> AffineFn {
        AffineFn::new(&self.constant + c, self.coeffs.clone())
    }

    /// `1 - f`.
    pub fn one_minus(&self) -> AffineFn {
        AffineFn::new(Rat::one() - &self.constant, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn negate(&self) -> AffineFn {
        self.scale(&-Rat::one())
    }

    /// Same half-space `f >= 0`, scaled so the first nonzero coefficient
    /// (or the constant, for constant functions) has absolute value 1.
    pub fn normalized(&self) -> AffineFn {
        let lead = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .unwrap_or(&self.constant)
            .abs();
        if lead.is_zero() || lead.is_one() {
            return self.clone();
        }
        self.scale(&lead.recip())
    }

    /// Re-embeds into `new_dim` coordinates: coordinate `j` moves to `map[j]`.
    pub fn embed(&self, new_dim: usize, map: &[usize]) -> AffineFn {
        let mut coeffs = vec![Rat::zero(); new_dim];
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs[map[j]] = c.clone();
        }
        AffineFn::new(self.constant.clone(), coeffs)
    }
}

/// Bracketed list `[c0 c1 … cn]`.
impl fmt::Display for AffineFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.constant)?;
        for c in &self.coeffs {
            write!(f, " {c}")?;
        }
        f.write_str("]")
    }
}

/// Closed polyhedron `{x : h(x) >= 0 for every constraint h}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    dim: usize,
    constraints: Vec<AffineFn>,
}

impl Polyhedron {
    pub fn new(dim: usize, constraints: Vec<AffineFn>) -> Polyhedron {
        assert!(constraints.iter().all(|h| h.dim() == dim), "constraint dimension mismatch");
        Polyhedron { dim, constraints }
    }

    /// `[0,1]^n`.
    pub fn cube(dim: usize) -> Polyhedron {
        Polyhedron::new(dim, cube_faces(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[AffineFn] {
        &self.constraints
    }

    pub fn push(&mut self, h: AffineFn) {
        assert_eq!(h.dim(), self.dim);
        let h = h.normalized();
        if !self.constraints.contains(&h) {
            self.constraints.push(h);
        }
    }

    pub fn with(&self, h: AffineFn) -> Polyhedron {
        let mut p = self.clone();
        p.push(h);
        p
    }

    /// Adds `f = 0` as the pair `f >= 0`, `-f >= 0`.
    pub fn with_equality(&self, f: &AffineFn) -> Polyhedron {
        let mut p = self.clone();
        p.push(f.clone());
        p.push(f.negate());
        p
    }

    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        assert_eq!(self.dim, other.dim);
        let mut p = self.clone();
        for h in &other.constraints {
            p.push(h.clone());
        }
        p
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        self.constraints.iter().all(|h| !h.eval(p).is_negative())
    }

    pub fn try_contains(&self, p: &[Rat]) -> Result<bool> {
        check_dim(self.dim, p.len())?;
        Ok(self.contains(p))
    }

    pub fn is_empty(&self) -> bool {
        let zero = AffineFn::constant_fn(self.dim, Rat::zero());
        !lp_min(&zero, self).is_feasible()
    }

    /// Some point of the polyhedron, if it is nonempty.
    pub fn some_point(&self) -> Option<Point> {
        let zero = AffineFn::constant_fn(self.dim, Rat::zero());
        match lp_min(&zero, self) {
            LpOutcome::Optimal { argmin, .. } => Some(argmin),
            _ => None,
        }
    }

    /// A point where every non-constant constraint is strictly positive,
    /// if the polyhedron has nonempty interior.
    pub fn interior_point(&self) -> Option<Point> {
        let n = self.dim;
        let mut lifted = Vec::with_capacity(self.constraints.len() + 2);
        for h in &self.constraints {
            if h.is_constant() {
                if h.constant().is_negative() {
                    return None;
                }
                continue;
            }
            let mut coeffs = h.coeffs().to_vec();
            coeffs.push(-Rat::one());
            lifted.push(AffineFn::new(h.constant().clone(), coeffs));
        }
        // -1 <= t <= 1
        let mut t_up = vec![Rat::zero(); n + 1];
        t_up[n] = -Rat::one();
        lifted.push(AffineFn::new(Rat::one(), t_up));
        let mut t_lo = vec![Rat::zero(); n + 1];
        t_lo[n] = Rat::one();
        lifted.push(AffineFn::new(Rat::one(), t_lo));
        let mut obj = vec![Rat::zero(); n + 1];
        obj[n] = -Rat::one();
        match lp_min(&AffineFn::new(Rat::zero(), obj), &Polyhedron::new(n + 1, lifted)) {
            LpOutcome::Optimal { value, mut argmin } if value.is_negative() => {
                argmin.truncate(n);
                Some(argmin)
            }
            _ => None,
        }
    }

    pub fn has_interior(&self) -> bool {
        self.interior_point().is_some()
    }

    /// Exact `[min, max]` of each coordinate; `None` when empty or unbounded.
    pub fn bounding_box(&self) -> Option<Vec<(Rat, Rat)>> {
        let mut out = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            let x = AffineFn::coordinate(self.dim, j);
            let lo = lp_min(&x, self).value()?.clone();
            let hi = -lp_min(&x.negate(), self).value()?.clone();
            out.push((lo, hi));
        }
        Some(out)
    }

    /// `self ⊆ other`, decided by minimizing each constraint of `other` over `self`.
    pub fn is_subset_of(&self, other: &Polyhedron) -> bool {
        other.constraints.iter().all(|h| match lp_min(h, self) {
            LpOutcome::Optimal { value, .. } => !value.is_negative(),
            LpOutcome::Infeasible => true,
            LpOutcome::Unbounded => false,
        })
    }

    /// Drops constraints implied by the others.
    pub fn remove_redundant(&mut self) {
        let mut i = 0;
        while i < self.constraints.len() {
            let h = self.constraints[i].clone();
            let rest: Vec<AffineFn> = self
                .constraints
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, c)| c.clone())
                .collect();
            let others = Polyhedron::new(self.dim, rest);
            let redundant = match lp_min(&h, &others) {
                LpOutcome::Optimal { value, .. } => !value.is_negative(),
                LpOutcome::Infeasible => true,
                LpOutcome::Unbounded => false,
            };
            if redundant {
                self.constraints.remove(i);
            } else {
                i += 1;
            }
        }
    }

    pub fn embed(&self, new_dim: usize, map: &[usize]) -> Polyhedron {
        let mut p = Polyhedron::new(new_dim, Vec::new());
        for h in &self.constraints {
            p.push(h.embed(new_dim, map));
        }
        p
    }

    /// Indices of the constraints vanishing at `p`.
    pub fn active_at(&self, p: &[Rat]) -> Vec<usize> {
        (0..self.constraints.len())
            .filter(|&i| {
                let h = &self.constraints[i];
                !h.is_constant() && h.eval(p).is_zero()
            })
            .collect()
    }

    /// Vertices, found by solving every `n`-subset of constraint hyperplanes.
    /// Meant for small dimensions.
    pub fn vertices(&self) -> Vec<Point> {
        let n = self.dim;
        let rows: Vec<&AffineFn> = self.constraints.iter().filter(|h| !h.is_constant()).collect();
        let mut out: Vec<Point> = Vec::new();
        for subset in rows.iter().combinations(n) {
            let a: Vec<Point> = subset.iter().map(|h| h.coeffs().to_vec()).collect();
            let b: Vec<Rat> = subset.iter().map(|h| -h.constant()).collect();
            if let Some(v) = solve_square(&a, &b) {
                if self.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// Vertices together with the edge directions `w - v` between vertices
    /// sharing `n - 1` independent active constraints.
    pub fn vertices_and_edges(&self) -> (Vec<Point>, Vec<Point>) {
        let verts = self.vertices();
        let active: Vec<Vec<usize>> = verts.iter().map(|v| self.active_at(v)).collect();
        let mut edges = Vec::new();
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                let shared: Vec<Point> = active[i]
                    .iter()
                    .filter(|k| active[j].contains(k))
                    .map(|&k| self.constraints[k].coeffs().to_vec())
                    .collect();
                if rank(&shared) + 1 == self.dim {
                    edges.push(sub(&verts[j], &verts[i]));
                }
            }
        }
        (verts, edges)
    }
}

/// `{h1 h2 …}`.
impl fmt::Display for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, h) in self.constraints.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{h}")?;
        }
        f.write_str("}")
    }
}

/// The `2n` facets `x_j >= 0`, `1 - x_j >= 0`.
pub fn cube_faces(dim: usize) -> Vec<AffineFn> {
    let mut out = Vec::with_capacity(2 * dim);
    for j in 0..dim {
        let x = AffineFn::coordinate(dim, j);
        out.push(x.one_minus());
        out.push(x);
    }
    out
}

/// An ordered vertex list spanning a simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    pub vertices: Vec<Point>,
    /// Set when the vertices are known to be affinely dependent.
    pub degenerate: bool,
}

impl Simplex {
    pub fn new(vertices: Vec<Point>) -> Simplex {
        let degenerate = !affinely_independent(&vertices);
        Simplex { vertices, degenerate }
    }

    pub fn barycenter(&self) -> Point {
        let k = Rat::from_int(self.vertices.len() as i64);
        let n = self.vertices[0].len();
        (0..n)
            .map(|j| self.vertices.iter().map(|v| &v[j]).sum::<Rat>() / &k)
            .collect()
    }

    pub fn last_vertex(&self) -> &Point {
        self.vertices.last().expect("a simplex has at least one vertex")
    }
}

fn affinely_independent(vs: &[Point]) -> bool {
    if vs.len() <= 1 {
        return true;
    }
    let rows: Vec<Point> = vs[1..].iter().map(|v| sub(v, &vs[0])).collect();
    rank(&rows) == rows.len()
}

/// Whether `p` lies in the convex hull of `vertices`, by exact LP feasibility
/// over barycentric weights.
pub fn in_convex_hull(p: &[Rat], vertices: &[Point]) -> bool {
    let k = vertices.len();
    let mut cons = Vec::new();
    for i in 0..k {
        cons.push(AffineFn::coordinate(k, i));
    }
    let ones = AffineFn::new(-Rat::one(), vec![Rat::one(); k]);
    cons.push(ones.clone());
    cons.push(ones.negate());
    for j in 0..p.len() {
        let coeffs: Vec<Rat> = vertices.iter().map(|v| v[j].clone()).collect();
        let row = AffineFn::new(-p[j].clone(), coeffs);
        cons.push(row.negate());
        cons.push(row);
    }
    !Polyhedron::new(k, cons).is_empty()
}

/// Vertices `u0 + u1/m + … + ui/m^i`, `i = 0..t`, of the flag simplex `T_{U,m}`.
pub fn flag_simplex(u: &DifferentialValuation, m: u64) -> Simplex {
    assert!(m >= 1, "m must be positive");
    let mut vertices = Vec::with_capacity(u.order() + 1);
    let mut cur = u.base().to_vec();
    vertices.push(cur.clone());
    let m_big = BigInt::from(m);
    let mut denom = BigInt::one();
    for d in u.directions() {
        denom *= &m_big;
        let w = Rat::from_bigints(BigInt::one(), denom.clone());
        cur = add(&cur, &scale(&w, d));
        vertices.push(cur.clone());
    }
    Simplex::new(vertices)
}

/// The sequence `h(u0), ∇h·u1, …, ∇h·ut`.
pub fn lex_sequence(h: &AffineFn, u: &DifferentialValuation) -> Vec<Rat> {
    let mut seq = Vec::with_capacity(u.order() + 1);
    seq.push(h.eval(u.base()));
    for d in u.directions() {
        seq.push(h.slope(d));
    }
    seq
}

/// Sign of the first nonzero element of `seq`, or 0.
pub fn lex_sign_of(seq: &[Rat]) -> i32 {
    seq.iter().map(Rat::signum).find(|&s| s != 0).unwrap_or(0)
}

/// Eventual sign of `h` at the last vertex of `T_{U,m}` as `m → ∞`.
pub fn lex_sign(h: &AffineFn, u: &DifferentialValuation) -> Result<i32> {
    check_dim(u.dim(), h.dim())?;
    Ok(lex_sign_of(&lex_sequence(h, u)))
}

/// `m* = 1 + ceil(Σ_{k>j} |c_k| / |c_j|)` for the first nonzero `c_j`; 1 when all vanish.
/// For every `m >= m*` the sign of `Σ c_k / m^k` equals the sign of `c_j`.
pub fn sign_threshold(seq: &[Rat]) -> u64 {
    let Some(j) = seq.iter().position(|c| !c.is_zero()) else {
        return 1;
    };
    let tail: Rat = seq[j + 1..].iter().map(Rat::abs).sum();
    let q = tail / seq[j].abs();
    let c = q.ceil().to_u64().expect("threshold fits in u64");
    1 + c
}

/// `m*(h, U)`.
pub fn threshold(h: &AffineFn, u: &DifferentialValuation) -> u64 {
    sign_threshold(&lex_sequence(h, u))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn pt(s: &str) -> Point {
        parse_point(s).unwrap()
    }

    fn dv(base: &str, dirs: &[&str]) -> DifferentialValuation {
        DifferentialValuation::new(pt(base), dirs.iter().map(|d| pt(d)).collect())
    }

    #[test]
    fn contains_examples() {
        let sq = Polyhedron::cube(2);
        assert!(sq.contains(&pt("1/2,1/2")));
        assert!(!sq.contains(&pt("2,0")));
        let half = Polyhedron::new(1, vec![AffineFn::new(r("-1/2"), vec![Rat::one()])]);
        assert!(half.contains(&pt("1/2")));
        assert!(matches!(sq.try_contains(&pt("1")), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn flag_simplex_examples() {
        let s = flag_simplex(&dv("1/2", &["1"]), 4);
        assert_eq!(s.vertices, vec![pt("1/2"), pt("3/4")]);
        let s = flag_simplex(&dv("0,0", &["1,0", "0,1"]), 2);
        assert_eq!(s.vertices, vec![pt("0,0"), pt("1/2,0"), pt("1/2,1/4")]);
        assert!(!s.degenerate);
        let s = flag_simplex(&dv("1/3", &[]), 7);
        assert_eq!(s.vertices, vec![pt("1/3")]);
    }

    #[test]
    fn lex_sign_examples() {
        let h = AffineFn::new(r("-1/2"), vec![Rat::one()]);
        assert_eq!(lex_sign(&h, &dv("1/2", &["1"])).unwrap(), 1);
        assert_eq!(lex_sign(&h, &dv("1/2", &["-1"])).unwrap(), -1);
        let zero = AffineFn::constant_fn(1, Rat::zero());
        assert_eq!(lex_sign(&zero, &dv("1/3", &["1"])).unwrap(), 0);
        assert!(lex_sign(&zero, &dv("1/3,0", &[])).is_err());
    }

    #[test]
    fn threshold_matches_sign_at_last_vertex() {
        // h = 1/10 - x + 100*y at u0 = (1/10, 0), flag (1,0),(0,1): sequence (0, -1, 100).
        let h = AffineFn::new(r("1/10"), vec![-Rat::one(), Rat::from_int(100)]);
        let u = dv("1/10,0", &["1,0", "0,1"]);
        let m = threshold(&h, &u);
        assert_eq!(m, 101);
        assert_eq!(lex_sign(&h, &u).unwrap(), -1);
        for mm in [m, 2 * m] {
            assert_eq!(h.eval(flag_simplex(&u, mm).last_vertex()).signum(), -1);
        }
        // Just below the threshold the sign may still be wrong.
        assert_eq!(h.eval(flag_simplex(&u, 100).last_vertex()).signum(), 0);
    }

    #[test]
    fn hull_membership() {
        let tri = vec![pt("0,0"), pt("1,0"), pt("0,1")];
        assert!(in_convex_hull(&pt("1/3,1/3"), &tri));
        assert!(in_convex_hull(&pt("1,0"), &tri));
        assert!(!in_convex_hull(&pt("2/3,2/3"), &tri));
    }

    #[test]
    fn interior_and_boxes() {
        let sq = Polyhedron::cube(2);
        let p = sq.interior_point().unwrap();
        assert!(sq.constraints().iter().all(|h| h.eval(&p).is_positive()));
        let segment = sq.with_equality(&AffineFn::new(r("-1/2"), vec![Rat::one(), Rat::zero()]));
        assert!(!segment.has_interior());
        assert!(!segment.is_empty());
        let bb = segment.bounding_box().unwrap();
        assert_eq!(bb[0], (r("1/2"), r("1/2")));
        assert_eq!(bb[1], (Rat::zero(), Rat::one()));
        let mut redundant = sq.with(AffineFn::new(Rat::from_int(3), vec![-Rat::one(), -Rat::one()]));
        redundant.remove_redundant();
        assert_eq!(redundant.constraints().len(), 4);
        assert!(segment.is_subset_of(&sq));
        assert!(!sq.is_subset_of(&segment));
    }
}
