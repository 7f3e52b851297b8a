//! Line-based text formats for theories, valuations, regions and point
//! sequences. `#` starts a comment anywhere on a line; blank lines are
//! ignored. Every reader takes a `source` name used in error messages.

use crate::consequence::Theory;
use crate::diffval::DifferentialValuation;
use crate::error::{Error, Result};
use crate::formula::parse;
use crate::geometry::{format_point, parse_point, AffineFn, Point, Polyhedron};
use crate::pl::RegionUnion;
use crate::rat::Rat;
use crate::tangent::{ClosedSetDescription, PointSequence};

/// Non-empty content lines with their 1-based numbers, comments stripped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn input_error(source: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Input { path: source.to_string(), line, message: message.into() }
}

fn point_at(source: &str, line: usize, text: &str) -> Result<Point> {
    parse_point(text).map_err(|e| input_error(source, line, e.to_string()))
}

/// One formula per line.
pub fn parse_theory(text: &str, source: &str) -> Result<Theory> {
    let mut formulas = Vec::new();
    for (line, body) in content_lines(text) {
        let f = parse(body).map_err(|e| {
            input_error(source, line, format!("column {}: {}", e.column, e.message))
        })?;
        formulas.push(f);
    }
    Ok(Theory::new(formulas))
}

/// `point: r1 … rn` followed by zero or more `dir: r1 … rn` lines.
pub fn parse_valuation(text: &str, source: &str) -> Result<DifferentialValuation> {
    let mut base: Option<Point> = None;
    let mut dirs = Vec::new();
    for (line, body) in content_lines(text) {
        let (key, rest) = body
            .split_once(':')
            .ok_or_else(|| input_error(source, line, "expected `point:` or `dir:`"))?;
        let p = point_at(source, line, rest)?;
        match key.trim() {
            "point" if base.is_none() => base = Some(p),
            "point" => return Err(input_error(source, line, "duplicate `point:` line")),
            "dir" if base.is_some() => {
                if p.len() != base.as_ref().map_or(0, Vec::len) {
                    return Err(input_error(source, line, "direction dimension differs from the point"));
                }
                dirs.push(p);
            }
            "dir" => return Err(input_error(source, line, "`dir:` before `point:`")),
            other => return Err(input_error(source, line, format!("unknown key `{other}`"))),
        }
    }
    let base = base.ok_or_else(|| input_error(source, 0, "missing `point:` line"))?;
    Ok(DifferentialValuation::new(base, dirs))
}

fn parse_affine(source: &str, line: usize, text: &str) -> Result<AffineFn> {
    let coeffs: Vec<Rat> = text
        .split_whitespace()
        .map(|t| t.parse::<Rat>().map_err(|e| input_error(source, line, e.to_string())))
        .collect::<Result<_>>()?;
    let (c0, rest) = coeffs
        .split_first()
        .ok_or_else(|| input_error(source, line, "empty constraint"))?;
    Ok(AffineFn::new(c0.clone(), rest.to_vec()))
}

/// `{[c0 c1 …] [c0 c1 …] …}`: the constraints `c0 + c1 x1 + … >= 0`.
fn parse_polyhedron(source: &str, line: usize, text: &str, dim: &mut Option<usize>) -> Result<Polyhedron> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| input_error(source, line, "expected `{[..] ..}`"))?;
    let mut constraints = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('[')
            .ok_or_else(|| input_error(source, line, "expected `[`"))?;
        let end = body.find(']').ok_or_else(|| input_error(source, line, "missing `]`"))?;
        let h = parse_affine(source, line, &body[..end])?;
        match *dim {
            None => *dim = Some(h.dim()),
            Some(n) if n != h.dim() => {
                return Err(input_error(source, line, format!("constraint has dimension {}, expected {n}", h.dim())))
            }
            Some(_) => {}
        }
        constraints.push(h);
        rest = body[end + 1..].trim_start();
    }
    let n = dim.ok_or_else(|| input_error(source, line, "cannot infer the dimension of `{}`"))?;
    Ok(Polyhedron::new(n, constraints))
}

/// Optional `dim: n`, then one `POLY {[c0 c1 …] …}` line per member.
/// Members are intersected with the unit cube.
pub fn parse_region(text: &str, source: &str) -> Result<RegionUnion> {
    let mut dim = None;
    let mut members = Vec::new();
    for (line, body) in content_lines(text) {
        if let Some(n) = body.strip_prefix("dim:") {
            let n: usize = n.trim().parse().map_err(|_| input_error(source, line, "bad dimension"))?;
            if n == 0 || dim.is_some_and(|d| d != n) {
                return Err(input_error(source, line, "inconsistent dimension"));
            }
            dim = Some(n);
            continue;
        }
        let poly = body.strip_prefix("POLY").unwrap_or(body);
        members.push(parse_polyhedron(source, line, poly, &mut dim)?);
    }
    let dim = dim.ok_or_else(|| input_error(source, 0, "empty region file needs a `dim:` line"))?;
    Ok(RegionUnion::new(dim, members))
}

pub fn format_region(region: &RegionUnion) -> String {
    let mut out = format!("dim: {}\n", region.dim());
    for p in region.members() {
        out.push_str(&format!("POLY {p}\n"));
    }
    out
}

/// `limit: r1 … rn`, then one point per line.
pub fn parse_point_sequence(text: &str, source: &str) -> Result<PointSequence> {
    let mut lines = content_lines(text);
    let (first, head) = lines.next().ok_or_else(|| input_error(source, 0, "empty sequence file"))?;
    let limit_text = head
        .strip_prefix("limit:")
        .ok_or_else(|| input_error(source, first, "expected `limit:`"))?;
    let limit = point_at(source, first, limit_text)?;
    let mut points = Vec::new();
    for (line, body) in lines {
        let p = point_at(source, line, body)?;
        if p.len() != limit.len() {
            return Err(input_error(source, line, "point dimension differs from the limit"));
        }
        points.push(p);
    }
    PointSequence::new(limit, points).map_err(|e| input_error(source, first, e.to_string()))
}

pub fn format_point_sequence(seq: &PointSequence) -> String {
    let join = |p: &[Rat]| p.iter().map(Rat::to_string).collect::<Vec<_>>().join(" ");
    let mut out = format!("limit: {}\n", join(seq.limit()));
    for p in seq.points() {
        out.push_str(&join(p));
        out.push('\n');
    }
    out
}

/// A sequence file when the first content line starts with `limit:`,
/// a region file otherwise.
pub fn parse_set(text: &str, source: &str) -> Result<ClosedSetDescription> {
    let is_sequence = content_lines(text).next().is_some_and(|(_, l)| l.starts_with("limit:"));
    if is_sequence {
        Ok(ClosedSetDescription::Sequence(parse_point_sequence(text, source)?))
    } else {
        Ok(ClosedSetDescription::Polyhedral(parse_region(text, source)?))
    }
}

/// Points as comma-separated rationals, one per line.
pub fn format_points(points: &[Point]) -> String {
    points.iter().map(|p| format_point(p) + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theory_files() {
        let t = parse_theory("X1\n", "t").unwrap();
        assert_eq!((t.len(), t.dim()), (1, 1));
        assert!(parse_theory("# comment\n\n", "t").unwrap().is_empty());
        match parse_theory("X1 ->\n", "t") {
            Err(Error::Input { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
        match parse_theory("X1\n# c\nX2 + )\n", "t") {
            Err(Error::Input { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn valuation_files() {
        let u = parse_valuation("# U\npoint: 1/2 0\ndir: 1 0\ndir: 0 1\n", "u").unwrap();
        assert_eq!(u.order(), 2);
        assert_eq!(parse_valuation(&u.to_string(), "u").unwrap(), u);
        assert!(parse_valuation("dir: 1\n", "u").is_err());
        assert!(parse_valuation("point: 1/2\ndir: 1 0\n", "u").is_err());
        assert!(parse_valuation("", "u").is_err());
    }

    #[test]
    fn region_files() {
        let r = parse_region("POLY {[1/2 -1]}\n", "r").unwrap();
        assert_eq!(r.dim(), 1);
        assert!(r.contains(&[Rat::new(1, 2)]) && !r.contains(&[Rat::new(3, 4)]));
        let again = parse_region(&format_region(&r), "r").unwrap();
        assert_eq!(again.dim(), 1);
        assert!(again.contains(&[Rat::zero()]));
        assert!(parse_region("dim: 2\n", "r").unwrap().is_empty());
        assert!(parse_region("POLY {[1 1] [1 0 1]}\n", "r").is_err());
    }

    #[test]
    fn sequence_files() {
        let s = parse_set("limit: 0 0\n1 1\n1/2 1/4\n", "s").unwrap();
        let ClosedSetDescription::Sequence(seq) = s else { panic!() };
        assert_eq!(seq.points().len(), 2);
        assert_eq!(parse_point_sequence(&format_point_sequence(&seq), "s").unwrap(), seq);
        assert!(parse_point_sequence("limit: 0 0\n0 0\n", "s").is_err());
        assert!(matches!(parse_set("POLY {[1 -1]}", "s").unwrap(), ClosedSetDescription::Polyhedral(_)));
    }
}
