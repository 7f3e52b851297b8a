//! Tangent directions of closed sets and the two-dimensional criterion for
//! strong semisimplicity.
//!
//! The cone `C_{x,u,1/m,1/m²}` is tested with an exact surrogate for its
//! vertex angle: a point `y` qualifies when its axial coordinate along `u` is
//! positive, its distance from `x` is at most `1/m`, and its offset from the
//! axis is at most `1/m²` times its axial length. Everything is compared on
//! squares, so no square roots appear.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::geometry::{
    check_dim, dot, format_point, in_unit_cube, is_zero_vector, nullspace, scale, sub, Point,
};
use crate::pl::RegionUnion;
use crate::rat::Rat;

/// A finite prefix `x_1, …, x_N` of a sequence converging to `limit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSequence {
    limit: Point,
    points: Vec<Point>,
    note: Option<String>,
}

impl PointSequence {
    pub fn new(limit: Point, points: Vec<Point>) -> Result<PointSequence> {
        let n = limit.len();
        if !in_unit_cube(&limit) {
            return Err(Error::OutsideCube(format_point(&limit)));
        }
        for p in &points {
            check_dim(n, p.len())?;
            if !in_unit_cube(p) {
                return Err(Error::OutsideCube(format_point(p)));
            }
            if *p == limit {
                return Err(Error::InvalidArgument(format!(
                    "sequence point {} equals the limit",
                    format_point(p)
                )));
            }
        }
        Ok(PointSequence { limit, points, note: None })
    }

    pub fn with_note(mut self, note: impl Into<String>) -> PointSequence {
        self.note = Some(note.into());
        self
    }

    pub fn limit(&self) -> &[Rat] {
        &self.limit
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn note(&self) -> Option<&str> {
        self.note.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.limit.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedSetDescription {
    Polyhedral(RegionUnion),
    Sequence(PointSequence),
}

impl ClosedSetDescription {
    pub fn dim(&self) -> usize {
        match self {
            ClosedSetDescription::Polyhedral(r) => r.dim(),
            ClosedSetDescription::Sequence(s) => s.dim(),
        }
    }
}

/// `y ∈ C_{x,u,1/m,1/m²}` with the tangent surrogate for the angle.
pub fn cone_contains(x: &[Rat], u: &[Rat], m: u64, y: &[Rat]) -> Result<bool> {
    check_dim(x.len(), u.len())?;
    check_dim(x.len(), y.len())?;
    if is_zero_vector(u) {
        return Err(Error::ZeroDirection);
    }
    let d = sub(y, x);
    let uu = dot(u, u);
    let a = dot(&d, u) / &uu;
    if !a.is_positive() {
        return Ok(false);
    }
    let inv_m2 = Rat::from_int(m as i64).recip();
    let inv_m2 = &inv_m2 * &inv_m2;
    if dot(&d, &d) > inv_m2 {
        return Ok(false);
    }
    let off = sub(&d, &scale(&a, u));
    Ok(dot(&off, &off) <= &(&inv_m2 * &inv_m2) * &(&(&a * &a) * &uu))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TangentVerdict {
    /// Every cone up to this index holds a listed point.
    CertifiedUpTo(u64),
    /// No listed point lies in this cone; relative to the listed prefix only.
    RefutedAt(u64),
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentReport {
    pub verdict: TangentVerdict,
    /// `(m, i)`: the listed point `x_i` (1-based) found inside the `m`-th cone.
    pub evidence: Vec<(u64, usize)>,
    /// Outcome of the outgoing test together with the `λ` used.
    pub outgoing: Option<(bool, Rat)>,
    pub notes: Vec<String>,
}

impl TangentReport {
    pub fn certified(&self) -> bool {
        matches!(self.verdict, TangentVerdict::CertifiedUpTo(_))
    }
}

/// Looks for a listed point in each of the first `max_m` cones at the limit.
pub fn certify_tangent_sequence(set: &ClosedSetDescription, u: &[Rat], max_m: u64) -> Result<TangentReport> {
    let ClosedSetDescription::Sequence(seq) = set else {
        return Err(Error::WrongSetKind { expected: "sequence" });
    };
    check_dim(seq.dim(), u.len())?;
    if is_zero_vector(u) {
        return Err(Error::ZeroDirection);
    }
    let mut evidence = Vec::new();
    for m in 1..=max_m {
        let mut hit = None;
        for (i, p) in seq.points().iter().enumerate() {
            if cone_contains(seq.limit(), u, m, p)? {
                hit = Some(i + 1);
                break;
            }
        }
        match hit {
            Some(i) => evidence.push((m, i)),
            None => {
                return Ok(TangentReport {
                    verdict: TangentVerdict::RefutedAt(m),
                    evidence,
                    outgoing: None,
                    notes: vec![format!(
                        "refutation is relative to the {} listed points",
                        seq.points().len()
                    )],
                });
            }
        }
    }
    Ok(TangentReport {
        verdict: TangentVerdict::CertifiedUpTo(max_m),
        evidence,
        outgoing: None,
        notes: Vec::new(),
    })
}

/// Parameter `s` with `p = x + s·v`, if `p` lies on that line.
fn line_parameter(x: &[Rat], v: &[Rat], p: &[Rat]) -> Option<Rat> {
    let d = sub(p, x);
    let s = dot(&d, v) / dot(v, v);
    (sub(&d, &scale(&s, v)).iter().all(Rat::is_zero)).then_some(s)
}

/// Whether the open segment from `x` to `x + λu` misses the set.
pub fn certify_outgoing(set: &ClosedSetDescription, x: &[Rat], u: &[Rat], lambda: &Rat) -> Result<bool> {
    let n = set.dim();
    check_dim(n, x.len())?;
    check_dim(n, u.len())?;
    if is_zero_vector(u) {
        return Err(Error::ZeroDirection);
    }
    if !lambda.is_positive() {
        return Err(Error::InvalidArgument(format!("segment length {lambda} is not positive")));
    }
    let v = scale(lambda, u);
    match set {
        ClosedSetDescription::Polyhedral(region) => {
            for p in region.members() {
                // h(x + s v) = a + b s >= 0 for s in [0, 1].
                let mut lo = Rat::zero();
                let mut hi = Rat::one();
                let mut empty = false;
                for h in p.constraints() {
                    let a = h.eval(x);
                    let b = h.slope(&v);
                    if b.is_zero() {
                        empty |= a.is_negative();
                    } else if b.is_positive() {
                        lo = lo.max(-&a / &b);
                    } else {
                        hi = hi.min(-&a / &b);
                    }
                }
                if !empty && lo <= hi && lo < Rat::one() && hi.is_positive() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        ClosedSetDescription::Sequence(seq) => {
            let on_segment = |p: &[Rat]| {
                line_parameter(x, &v, p).is_some_and(|s| s.is_positive() && s < Rat::one())
            };
            Ok(!on_segment(seq.limit()) && !seq.points().iter().any(|p| on_segment(p)))
        }
    }
}

fn canonical(d: &[Rat]) -> Point {
    let lead = d.iter().find(|c| !c.is_zero()).expect("nonzero").abs();
    scale(&lead.recip(), d)
}

fn axis(n: usize, i: usize, sign: i64) -> Point {
    let mut e = vec![Rat::zero(); n];
    e[i] = Rat::from_int(sign);
    e
}

/// Generators of the feasible-direction cone of `x` in each member of the
/// union that contains it. Each generator appears once up to positive scaling.
pub fn tangent_cone_polyhedral(set: &RegionUnion, x: &[Rat]) -> Result<Vec<Point>> {
    let n = set.dim();
    check_dim(n, x.len())?;
    let mut found = false;
    let mut gens = BTreeSet::new();
    for p in set.members().iter().filter(|p| p.contains(x)) {
        found = true;
        let rows: Vec<Point> = p
            .active_at(x)
            .into_iter()
            .map(|i| p.constraints()[i].coeffs().to_vec())
            .collect();
        let lineality = nullspace(&rows, n);
        if lineality.len() == n {
            for i in 0..n {
                gens.insert(axis(n, i, 1));
                gens.insert(axis(n, i, -1));
            }
            continue;
        }
        for l in &lineality {
            let c = canonical(l);
            gens.insert(c.iter().map(|v| -v).collect::<Point>());
            gens.insert(c);
        }
        let k = n - lineality.len() - 1;
        let feasible = |r: &Point| rows.iter().all(|a| !dot(a, r).is_negative());
        for subset in itertools::Itertools::combinations(rows.iter(), k) {
            let mut system: Vec<Point> = subset.into_iter().cloned().collect();
            system.extend(lineality.iter().cloned());
            let ray = nullspace(&system, n);
            if ray.len() != 1 {
                continue;
            }
            for r in [ray[0].clone(), ray[0].iter().map(|v| -v).collect()] {
                if feasible(&r) {
                    gens.insert(canonical(&r));
                }
            }
        }
    }
    if !found {
        return Err(Error::PointNotInSet);
    }
    Ok(gens.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SssVerdict {
    StronglySemisimple,
    /// A certified outgoing tangent `u` at `x`, with the `λ` that showed it outgoing.
    NotStronglySemisimpleWitnessed { point: Point, direction: Point, lambda: Rat },
    NoWitnessFoundUpTo(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SssReport {
    pub verdict: SssVerdict,
    /// Set when the dimension is not 2, where the criterion is only a heuristic.
    pub heuristic: bool,
    /// One tangent report per examined candidate.
    pub candidates: Vec<(Point, Point, TangentReport)>,
}

/// Largest exponent tried for `λ = 2^-j` in the outgoing test.
const MAX_LAMBDA_EXPONENT: u32 = 30;

/// Searches the candidate `(point, direction)` pairs for an outgoing
/// rational tangent of the set.
pub fn sss_check(set: &ClosedSetDescription, candidates: &[(Point, Point)], max_m: u64) -> Result<SssReport> {
    let heuristic = set.dim() != 2;
    let seq = match set {
        ClosedSetDescription::Polyhedral(_) => {
            return Ok(SssReport { verdict: SssVerdict::StronglySemisimple, heuristic, candidates: Vec::new() })
        }
        ClosedSetDescription::Sequence(seq) => seq,
    };
    let mut reports = Vec::new();
    for (x, u) in candidates {
        check_dim(set.dim(), x.len())?;
        let mut report = if x.as_slice() == seq.limit() {
            certify_tangent_sequence(set, u, max_m)?
        } else {
            TangentReport {
                verdict: TangentVerdict::NotApplicable,
                evidence: Vec::new(),
                outgoing: None,
                notes: vec!["candidate point is not the limit of the listed sequence".into()],
            }
        };
        if report.certified() {
            for j in 0..=MAX_LAMBDA_EXPONENT {
                let lambda = Rat::pow2_neg(j);
                let end: Point = x.iter().zip(u).map(|(a, b)| a + &(&lambda * b)).collect();
                if !in_unit_cube(&end) {
                    continue;
                }
                let out = certify_outgoing(set, x, u, &lambda)?;
                report.outgoing = Some((out, lambda.clone()));
                if out {
                    reports.push((x.clone(), u.clone(), report));
                    return Ok(SssReport {
                        verdict: SssVerdict::NotStronglySemisimpleWitnessed {
                            point: x.clone(),
                            direction: u.clone(),
                            lambda,
                        },
                        heuristic,
                        candidates: reports,
                    });
                }
            }
        }
        reports.push((x.clone(), u.clone(), report));
    }
    Ok(SssReport { verdict: SssVerdict::NoWitnessFoundUpTo(max_m), heuristic, candidates: reports })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{parse_point, AffineFn, Polyhedron};

    fn pt(s: &str) -> Point {
        parse_point(s).unwrap()
    }

    fn parabola(n: i64) -> ClosedSetDescription {
        let points = (1..=n).map(|i| vec![Rat::new(1, i), Rat::new(1, i * i)]).collect();
        ClosedSetDescription::Sequence(PointSequence::new(pt("0,0"), points).unwrap())
    }

    fn square() -> RegionUnion {
        RegionUnion::cube(2)
    }

    #[test]
    fn cone_examples() {
        let (x, u) = (pt("0,0"), pt("1,0"));
        assert!(cone_contains(&x, &u, 2, &pt("1/8,1/512")).unwrap());
        assert!(!cone_contains(&x, &u, 2, &pt("1/8,1/8")).unwrap());
        assert!(!cone_contains(&x, &u, 2, &x).unwrap());
        assert!(matches!(cone_contains(&x, &pt("0,0"), 2, &x), Err(Error::ZeroDirection)));
    }

    #[test]
    fn sequence_certification() {
        let set = parabola(200);
        let r = certify_tangent_sequence(&set, &pt("1,0"), 10).unwrap();
        assert_eq!(r.verdict, TangentVerdict::CertifiedUpTo(10));
        assert_eq!(r.evidence.len(), 10);
        let r = certify_tangent_sequence(&set, &pt("0,1"), 3).unwrap();
        assert_eq!(r.verdict, TangentVerdict::RefutedAt(1));
        let single = ClosedSetDescription::Sequence(PointSequence::new(pt("0,0"), vec![pt("1,1")]).unwrap());
        assert!(matches!(
            certify_tangent_sequence(&single, &pt("1,1"), 2).unwrap().verdict,
            TangentVerdict::RefutedAt(_)
        ));
        let poly = ClosedSetDescription::Polyhedral(square());
        assert!(certify_tangent_sequence(&poly, &pt("1,0"), 2).is_err());
    }

    #[test]
    fn outgoing_examples() {
        let half = Rat::new(1, 2);
        assert!(certify_outgoing(&parabola(200), &pt("0,0"), &pt("1,0"), &half).unwrap());
        let sq = ClosedSetDescription::Polyhedral(square());
        assert!(!certify_outgoing(&sq, &pt("0,0"), &pt("1,0"), &half).unwrap());
        let x_eq_0 = AffineFn::coordinate(2, 0).negate();
        let edge = RegionUnion::new(2, vec![Polyhedron::new(2, vec![x_eq_0])]);
        assert!(certify_outgoing(&ClosedSetDescription::Polyhedral(edge), &pt("0,0"), &pt("1,0"), &half).unwrap());
    }

    #[test]
    fn polyhedral_cones() {
        assert_eq!(tangent_cone_polyhedral(&square(), &pt("0,0")).unwrap(), vec![pt("0,1"), pt("1,0")]);
        let left = RegionUnion::new(1, vec![Polyhedron::new(1, vec![AffineFn::new(Rat::new(1, 2), vec![-Rat::one()])])]);
        assert_eq!(tangent_cone_polyhedral(&left, &pt("1/2")).unwrap(), vec![pt("-1")]);
        let inner = tangent_cone_polyhedral(&square(), &pt("1/2,1/2")).unwrap();
        assert_eq!(inner.len(), 4);
        assert!(matches!(tangent_cone_polyhedral(&left, &pt("3/4")), Err(Error::PointNotInSet)));
        // Segment {x2 = 0} in the square at its midpoint: a line through x.
        let seg = RegionUnion::new(2, vec![Polyhedron::cube(2).with_equality(&AffineFn::coordinate(2, 1))]);
        assert_eq!(tangent_cone_polyhedral(&seg, &pt("1/2,0")).unwrap(), vec![pt("-1,0"), pt("1,0")]);
    }

    #[test]
    fn sss_examples() {
        let set = parabola(200);
        let r = sss_check(&set, &[(pt("0,0"), pt("1,0"))], 10).unwrap();
        assert!(matches!(r.verdict, SssVerdict::NotStronglySemisimpleWitnessed { .. }));
        let r = sss_check(&set, &[(pt("0,0"), pt("0,1"))], 10).unwrap();
        assert_eq!(r.verdict, SssVerdict::NoWitnessFoundUpTo(10));
        let r = sss_check(&ClosedSetDescription::Polyhedral(square()), &[], 10).unwrap();
        assert_eq!(r.verdict, SssVerdict::StronglySemisimple);
        assert!(!r.heuristic);
    }
}
