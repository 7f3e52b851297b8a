//! Compilation of formulas to exact piecewise-linear functions on `[0,1]^n`.
//!
//! A [`PLFunction`] is a flat list of full-dimensional cells, each carrying
//! one affine piece. Binary connectives overlay the two operand complexes
//! (every pair of cells with overlapping interiors) and split each overlay
//! cell by the single hyperplane where the connective changes branch.
//! Cells are never merged, so two equal functions may have different
//! complexes; compare them pointwise.

use std::fmt;
use std::sync::Arc;

use crate::diffval::DifferentialValuation;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::geometry::{
    check_dim, cube_faces, format_point, in_unit_cube, is_zero_vector, lex_sign_of, lex_sequence,
    lp_min, AffineFn, LpOutcome, Point, Polyhedron,
};
use crate::rat::Rat;

/// Cells with more constraints than this get redundant ones pruned.
const PRUNE_ABOVE: usize = 10;

#[derive(Clone, Debug)]
pub struct Cell {
    region: Polyhedron,
    piece: AffineFn,
    bbox: Vec<(Rat, Rat)>,
}

impl Cell {
    fn new(mut region: Polyhedron, piece: AffineFn) -> Option<Cell> {
        if region.constraints().len() > PRUNE_ABOVE {
            region.remove_redundant();
        }
        let bbox = region.bounding_box()?;
        Some(Cell { region, piece, bbox })
    }

    pub fn region(&self) -> &Polyhedron {
        &self.region
    }

    pub fn piece(&self) -> &AffineFn {
        &self.piece
    }

    fn box_contains(&self, p: &[Rat]) -> bool {
        self.bbox.iter().zip(p).all(|((lo, hi), x)| lo <= x && x <= hi)
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        self.box_contains(p) && self.region.contains(p)
    }
}

fn boxes_overlap_openly(a: &[(Rat, Rat)], b: &[(Rat, Rat)]) -> bool {
    a.iter().zip(b).all(|((alo, ahi), (blo, bhi))| alo.clone().max(blo.clone()) < ahi.clone().min(bhi.clone()))
}

/// Binary connectives as PL operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Impl,
    OPlus,
    OTimes,
    Max,
    Min,
}

impl BinOp {
    /// `(d, piece where d >= 0, piece where d <= 0)`.
    fn branches(self, f: &AffineFn, g: &AffineFn) -> (AffineFn, AffineFn, AffineFn) {
        let n = f.dim();
        let one = AffineFn::constant_fn(n, Rat::one());
        let zero = AffineFn::constant_fn(n, Rat::zero());
        match self {
            // min(1, 1 - f + g)
            BinOp::Impl => (g.sub(f), one, g.sub(f).add_constant(&Rat::one())),
            // min(1, f + g)
            BinOp::OPlus => {
                let s = f.add(g);
                (s.add_constant(&-Rat::one()), one, s)
            }
            // max(0, f + g - 1)
            BinOp::OTimes => {
                let d = f.add(g).add_constant(&-Rat::one());
                (d.clone(), d, zero)
            }
            BinOp::Max => (f.sub(g), f.clone(), g.clone()),
            BinOp::Min => (f.sub(g), g.clone(), f.clone()),
        }
    }

    pub fn apply(self, a: &Rat, b: &Rat) -> Rat {
        let one = Rat::one();
        match self {
            BinOp::Impl => (&one - a + b).min(one),
            BinOp::OPlus => (a + b).min(one),
            BinOp::OTimes => (a + b - &one).max(Rat::zero()),
            BinOp::Max => a.clone().max(b.clone()),
            BinOp::Min => a.clone().min(b.clone()),
        }
    }
}

/// A continuous piecewise-linear function `[0,1]^n → [0,1]`.
#[derive(Clone, Debug)]
pub struct PLFunction {
    dim: usize,
    cells: Vec<Cell>,
}

impl PLFunction {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// The coordinate function `x_{i+1}` (0-based `i`) as a single cell.
    pub fn coordinate(dim: usize, i: usize) -> PLFunction {
        PLFunction::single(dim, AffineFn::coordinate(dim, i))
    }

    pub fn constant(dim: usize, c: Rat) -> PLFunction {
        PLFunction::single(dim, AffineFn::constant_fn(dim, c))
    }

    fn single(dim: usize, piece: AffineFn) -> PLFunction {
        let cell = Cell::new(Polyhedron::cube(dim), piece).expect("the cube is bounded and nonempty");
        PLFunction { dim, cells: vec![cell] }
    }

    /// `1 - f` on the same cells.
    pub fn negate(&self) -> PLFunction {
        PLFunction {
            dim: self.dim,
            cells: self
                .cells
                .iter()
                .map(|c| Cell {
                    region: c.region.clone(),
                    piece: c.piece.one_minus(),
                    bbox: c.bbox.clone(),
                })
                .collect(),
        }
    }

    /// Overlays the two complexes and splits by the connective's decision hyperplane.
    pub fn combine(&self, other: &PLFunction, op: BinOp) -> PLFunction {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut cells = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                if !boxes_overlap_openly(&a.bbox, &b.bbox) {
                    continue;
                }
                let region = a.region.intersect(&b.region);
                let (d, ge, le) = op.branches(&a.piece, &b.piece);
                if d.is_constant() {
                    let piece = if d.constant().is_negative() { le } else { ge };
                    if region.has_interior() {
                        cells.extend(Cell::new(region, piece));
                    }
                    continue;
                }
                for (half, piece) in [(d.clone(), ge), (d.negate(), le)] {
                    let r = region.with(half);
                    if r.has_interior() {
                        cells.extend(Cell::new(r, piece));
                    }
                }
            }
        }
        PLFunction { dim: self.dim, cells }
    }

    /// `max(0, f - g)`.
    pub fn truncated_sub(&self, other: &PLFunction) -> PLFunction {
        self.combine(&other.negate(), BinOp::OTimes)
    }

    fn check_point(&self, v: &[Rat]) -> Result<()> {
        check_dim(self.dim, v.len())?;
        if !in_unit_cube(v) {
            return Err(Error::OutsideCube(format_point(v)));
        }
        Ok(())
    }

    /// Value at `v`, read from any cell containing it.
    pub fn eval(&self, v: &[Rat]) -> Result<Rat> {
        self.check_point(v)?;
        let cell = self
            .cells
            .iter()
            .find(|c| c.contains(v))
            .expect("cells cover the unit cube");
        Ok(cell.piece.eval(v))
    }

    /// First cell whose closure contains `T_{U,m}` for all large `m`: every
    /// defining constraint has nonnegative lex sign along the flag.
    pub fn germ_cell(&self, u: &DifferentialValuation) -> Result<&Cell> {
        check_dim(self.dim, u.dim())?;
        self.cells
            .iter()
            .find(|c| {
                c.region
                    .constraints()
                    .iter()
                    .all(|h| lex_sign_of(&lex_sequence(h, u)) >= 0)
            })
            .ok_or_else(|| Error::InvalidValuation("no cell contains the flag germ".into()))
    }

    /// One-sided derivative along `u` (not normalized) at `v`.
    pub fn dir_deriv(&self, v: &[Rat], u: &[Rat]) -> Result<Rat> {
        self.check_point(v)?;
        check_dim(self.dim, u.len())?;
        if is_zero_vector(u) {
            return Err(Error::ZeroDirection);
        }
        let flag = DifferentialValuation::new(v.to_vec(), vec![u.to_vec()]);
        if cube_faces(self.dim).iter().any(|h| lex_sign_of(&lex_sequence(h, &flag)) < 0) {
            return Err(Error::InfeasibleDirection);
        }
        Ok(self.germ_cell(&flag)?.piece.slope(u))
    }

    /// `{v : f(v) = 1}` as a union of polyhedra.
    pub fn one_set(&self) -> RegionUnion {
        let mut members = Vec::new();
        for c in &self.cells {
            if c.piece.is_constant() {
                if c.piece.constant().is_one() {
                    members.push(c.region.clone());
                }
                continue;
            }
            let r = c.region.with_equality(&c.piece.add_constant(&-Rat::one()));
            if !r.is_empty() {
                members.push(r);
            }
        }
        let mut u = RegionUnion { dim: self.dim, members };
        u.prune_subsumed();
        u
    }

    /// Exact minimum of `f` over `∪ region`.
    pub fn min_over_region(&self, region: &RegionUnion) -> Result<MinResult> {
        check_dim(self.dim, region.dim)?;
        let mut best: Option<(Rat, Point)> = None;
        for c in &self.cells {
            for p in &region.members {
                let dom = c.region.intersect(p);
                if let LpOutcome::Optimal { value, argmin } = lp_min(&c.piece, &dom) {
                    if best.as_ref().is_none_or(|(b, _)| value < *b) {
                        best = Some((value, argmin));
                    }
                }
            }
        }
        Ok(match best {
            Some((value, argmin)) => MinResult::Min { value, argmin },
            None => MinResult::Infeasible,
        })
    }

    /// Writes one `CELL {constraints} PIECE [affine]` line per cell.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            out.push_str(&format!("CELL {} PIECE {}\n", c.region, c.piece));
        }
        out
    }
}

impl fmt::Display for PLFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinResult {
    Min { value: Rat, argmin: Point },
    Infeasible,
}

/// A finite union of polyhedra inside `[0,1]^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionUnion {
    dim: usize,
    members: Vec<Polyhedron>,
}

impl RegionUnion {
    /// Members are intersected with the unit cube.
    pub fn new(dim: usize, members: Vec<Polyhedron>) -> RegionUnion {
        let cube = Polyhedron::cube(dim);
        let members = members
            .into_iter()
            .map(|p| {
                assert_eq!(p.dim(), dim, "dimension mismatch");
                p.intersect(&cube)
            })
            .filter(|p| !p.is_empty())
            .collect();
        RegionUnion { dim, members }
    }

    pub fn empty(dim: usize) -> RegionUnion {
        RegionUnion { dim, members: Vec::new() }
    }

    pub fn cube(dim: usize) -> RegionUnion {
        RegionUnion { dim, members: vec![Polyhedron::cube(dim)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn members(&self) -> &[Polyhedron] {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        self.members.iter().any(|m| m.contains(p))
    }

    /// Distributes the intersection over both unions, dropping empty and
    /// subsumed pieces.
    pub fn intersect(&self, other: &RegionUnion) -> RegionUnion {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut members = Vec::new();
        for a in &self.members {
            for b in &other.members {
                let p = a.intersect(b);
                if !p.is_empty() {
                    members.push(p);
                }
            }
        }
        let mut u = RegionUnion { dim: self.dim, members };
        u.prune_subsumed();
        u
    }

    /// Removes members contained in another member.
    fn prune_subsumed(&mut self) {
        let mut keep: Vec<Polyhedron> = Vec::with_capacity(self.members.len());
        for p in std::mem::take(&mut self.members) {
            if keep.iter().any(|k| p.is_subset_of(k)) {
                continue;
            }
            keep.retain(|k| !k.is_subset_of(&p));
            keep.push(p);
        }
        self.members = keep;
    }
}

/// Full-dimensional cells of the common refinement of several complexes.
pub fn overlay(dim: usize, functions: &[&PLFunction]) -> Vec<Polyhedron> {
    let zero = AffineFn::constant_fn(dim, Rat::zero());
    let mut cells = vec![Cell::new(Polyhedron::cube(dim), zero.clone()).expect("the cube is bounded")];
    for f in functions {
        assert_eq!(f.dim, dim, "dimension mismatch");
        let mut next = Vec::new();
        for a in &cells {
            for b in &f.cells {
                if !boxes_overlap_openly(&a.bbox, &b.bbox) {
                    continue;
                }
                let region = a.region.intersect(&b.region);
                if region.has_interior() {
                    next.extend(Cell::new(region, zero.clone()));
                }
            }
        }
        cells = next;
    }
    cells.into_iter().map(|c| c.region).collect()
}

/// Compiles `f` over `[0,1]^dim`; shared subformulas are compiled once.
pub fn compile(f: &Formula, dim: usize) -> Result<PLFunction> {
    let max = f.max_var();
    if max > dim {
        return Err(Error::DimensionTooSmall { index: max, dim });
    }
    let out = f.fold_shared(&mut |node, args: &[Arc<PLFunction>]| {
        Arc::new(match node {
            Formula::Var(i) => PLFunction::coordinate(dim, i - 1),
            Formula::Neg(_) => args[0].negate(),
            Formula::Impl(..) => args[0].combine(&args[1], BinOp::Impl),
            Formula::OPlus(..) => args[0].combine(&args[1], BinOp::OPlus),
            Formula::OTimes(..) => args[0].combine(&args[1], BinOp::OTimes),
            Formula::Max(..) => args[0].combine(&args[1], BinOp::Max),
            Formula::Min(..) => args[0].combine(&args[1], BinOp::Min),
        })
    });
    Ok(Arc::unwrap_or_clone(out))
}

/// Truth value of `f` at `v` by direct recursion on the formula.
pub fn eval_formula(f: &Formula, v: &[Rat]) -> Result<Rat> {
    let max = f.max_var();
    if max > v.len() {
        return Err(Error::DimensionTooSmall { index: max, dim: v.len() });
    }
    if !in_unit_cube(v) {
        return Err(Error::OutsideCube(format_point(v)));
    }
    Ok(f.fold_shared(&mut |node, args: &[Rat]| match node {
        Formula::Var(i) => v[i - 1].clone(),
        Formula::Neg(_) => Rat::one() - &args[0],
        Formula::Impl(..) => BinOp::Impl.apply(&args[0], &args[1]),
        Formula::OPlus(..) => BinOp::OPlus.apply(&args[0], &args[1]),
        Formula::OTimes(..) => BinOp::OTimes.apply(&args[0], &args[1]),
        Formula::Max(..) => BinOp::Max.apply(&args[0], &args[1]),
        Formula::Min(..) => BinOp::Min.apply(&args[0], &args[1]),
    }))
}
