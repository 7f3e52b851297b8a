//! Differential valuations, the prime ideals `p_U`, stable satisfaction and
//! domination between valuations over nested variable sets.
//!
//! A valuation `U = (u0; u1, …, ut)` pairs a base point with pairwise
//! orthogonal rational directions. Directions need not be unit vectors:
//! every question answered here depends only on the signs of the sequence
//! `h(u0), ∇h·u1, …, ∇h·ut`, which positive rescaling of any `ui` leaves
//! unchanged. "For all large m" is discharged exactly through those signs.

use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{Formula, VariableSet};
use crate::geometry::{
    check_dim, cube_faces, dot, flag_simplex, format_point, gram_schmidt, in_unit_cube,
    is_zero_vector, positive_multiple, threshold, AffineFn, Point,
};
use crate::pl::{compile, PLFunction};
use crate::rat::Rat;
use crate::synth;

/// `U = (u0; u1, …, ut)` in `ℚ^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialValuation {
    base: Point,
    directions: Vec<Point>,
}

/// Outcome of [`DifferentialValuation::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid(String),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

impl DifferentialValuation {
    /// Builds a valuation without checking it; see [`Self::validate`].
    pub fn new(base: Point, directions: Vec<Point>) -> DifferentialValuation {
        DifferentialValuation { base, directions }
    }

    /// Order-0 valuation at `v`.
    pub fn point(v: Point) -> DifferentialValuation {
        DifferentialValuation::new(v, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    /// `t`, the number of directions.
    pub fn order(&self) -> usize {
        self.directions.len()
    }

    pub fn base(&self) -> &[Rat] {
        &self.base
    }

    pub fn directions(&self) -> &[Point] {
        &self.directions
    }

    /// Replaces `u_i` (1-based) by `c * u_i`.
    pub fn rescaled(&self, i: usize, c: &Rat) -> DifferentialValuation {
        let mut out = self.clone();
        out.directions[i - 1] = crate::geometry::scale(c, &out.directions[i - 1]);
        out
    }

    /// Largest `m*(h, U)` over the `2n` cube facets; `T_{U,m}` stays in the
    /// cube for every `m` at or above it when `U` is valid.
    pub fn cube_threshold(&self) -> u64 {
        cube_faces(self.dim()).iter().map(|h| threshold(h, self)).max().unwrap_or(1)
    }

    pub fn validate(&self) -> Validity {
        let n = self.dim();
        if self.order() > n {
            return Validity::Invalid(format!("order {} exceeds dimension {n}", self.order()));
        }
        for (i, d) in self.directions.iter().enumerate() {
            if d.len() != n {
                return Validity::Invalid(format!("direction u{} has dimension {}, expected {n}", i + 1, d.len()));
            }
            if is_zero_vector(d) {
                return Validity::Invalid(format!("direction u{} is zero", i + 1));
            }
        }
        for i in 0..self.order() {
            for j in i + 1..self.order() {
                if !dot(&self.directions[i], &self.directions[j]).is_zero() {
                    return Validity::Invalid(format!("directions u{} and u{} are not orthogonal", i + 1, j + 1));
                }
            }
        }
        if !in_unit_cube(&self.base) {
            return Validity::Invalid(format!("base point {} lies outside the unit cube", format_point(&self.base)));
        }
        let m = self.cube_threshold();
        for (i, v) in flag_simplex(self, m).vertices.iter().enumerate() {
            if !in_unit_cube(v) {
                return Validity::Invalid(format!(
                    "vertex {i} of T_(U,{m}) = {} leaves the unit cube",
                    format_point(v)
                ));
            }
        }
        Validity::Valid
    }

    fn require_valid(&self) -> Result<()> {
        match self.validate() {
            Validity::Valid => Ok(()),
            Validity::Invalid(why) => Err(Error::InvalidValuation(why)),
        }
    }
}

/// `point: r1 … rn` followed by one `dir: r1 … rn` line per direction.
impl fmt::Display for DifferentialValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |p: &[Rat]| p.iter().map(Rat::to_string).collect::<Vec<_>>().join(" ");
        writeln!(f, "point: {}", join(&self.base))?;
        for d in &self.directions {
            writeln!(f, "dir: {}", join(d))?;
        }
        Ok(())
    }
}

/// Whether `f ∈ p_U`: the piece on the germ cell vanishes at `u0` and has
/// zero slope along every `ui`, so `f` vanishes on `T_{U,m}` for large `m`.
pub fn in_ideal(f: &PLFunction, u: &DifferentialValuation) -> Result<bool> {
    u.require_valid()?;
    check_dim(u.dim(), f.dim())?;
    Ok(germ_piece_vanishes(f.germ_cell(u)?.piece(), u))
}

fn germ_piece_vanishes(piece: &AffineFn, u: &DifferentialValuation) -> bool {
    piece.eval(u.base()).is_zero() && u.directions().iter().all(|d| piece.slope(d).is_zero())
}

/// [`in_ideal`] for a valuation already known to be valid, with matching dimension.
pub(crate) fn in_ideal_unchecked(f: &PLFunction, u: &DifferentialValuation) -> bool {
    let cell = f.germ_cell(u).expect("a valid flag has a germ cell");
    germ_piece_vanishes(cell.piece(), u)
}

/// `U` satisfies `f` iff `1 - f̂ ∈ p_U`.
pub fn satisfies(u: &DifferentialValuation, f: &Formula) -> Result<bool> {
    let compiled = compile(&Formula::neg(f.clone()), u.dim())?;
    in_ideal(&compiled, u)
}

/// Same as [`satisfies`] for an already compiled `f̂`.
pub fn satisfies_compiled(u: &DifferentialValuation, f: &PLFunction) -> Result<bool> {
    in_ideal(&f.negate(), u)
}

/// Projects `v` onto the coordinates listed in `h` (positions inside `k`),
/// orthogonalizing the projected directions and dropping vanishing ones.
pub fn project_flag(v: &DifferentialValuation, positions: &[usize]) -> DifferentialValuation {
    let pick = |p: &[Rat]| positions.iter().map(|&i| p[i].clone()).collect::<Point>();
    let projected: Vec<Point> = v.directions().iter().map(|d| pick(d)).collect();
    DifferentialValuation::new(pick(v.base()), gram_schmidt(&projected))
}

/// Answer of [`dominates`] with the evidence behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domination {
    /// Result of comparing the projected flag with `U`.
    pub geometric: bool,
    /// Probes on which `p_U` and `p_V ∩ M(I^H)` disagree.
    pub probe_disagreements: Vec<String>,
}

impl Domination {
    pub fn verdict(&self) -> bool {
        self.geometric && self.probe_disagreements.is_empty()
    }

    /// The probe family contradicted a positive geometric answer.
    pub fn override_fired(&self) -> bool {
        self.geometric && !self.probe_disagreements.is_empty()
    }
}

/// Default probes over `H`: for each coordinate, the McNaughton distance
/// `min(1, q·|x_i − p/q|)` to the base point's coordinate `p/q`.
pub fn default_probes(u: &DifferentialValuation, h: &VariableSet) -> Result<Vec<Formula>> {
    h.iter()
        .zip(u.base())
        .map(|(var, c)| synth::distance_formula(c, var))
        .collect()
}

/// `V ⪰ U`: `p_U = p_V ∩ M(I^H)`, with `U` over the variables `h` and `V`
/// over `k ⊇ h` (coordinates in increasing variable order).
pub fn dominates(
    v: &DifferentialValuation,
    k: &VariableSet,
    u: &DifferentialValuation,
    h: &VariableSet,
    extra_probes: &[Formula],
) -> Result<Domination> {
    if !h.is_subset(k) {
        return Err(Error::NotSubset);
    }
    check_dim(h.len(), u.dim())?;
    check_dim(k.len(), v.dim())?;
    u.require_valid()?;
    v.require_valid()?;

    let k_list: Vec<usize> = k.iter().collect();
    let positions: Vec<usize> = h
        .iter()
        .map(|var| k_list.iter().position(|&x| x == var).expect("h is a subset of k"))
        .collect();
    let projected = project_flag(v, &positions);
    let geometric = projected.base() == u.base()
        && projected.order() == u.order()
        && projected
            .directions()
            .iter()
            .zip(u.directions())
            .all(|(p, d)| positive_multiple(p, d).is_some());

    let mut probes = default_probes(u, h)?;
    probes.extend(extra_probes.iter().cloned());
    let h_list: Vec<usize> = h.iter().collect();
    let mut disagreements = Vec::new();
    for probe in &probes {
        if !probe.variables().is_subset(h) {
            return Err(Error::NotSubset);
        }
        let local = probe.rename(&|i| h_list.iter().position(|&x| x == i).expect("checked") + 1);
        let lifted = probe.rename(&|i| k_list.iter().position(|&x| x == i).expect("subset") + 1);
        let in_u = in_ideal(&compile(&local, u.dim())?, u)?;
        let in_v = in_ideal(&compile(&lifted, v.dim())?, v)?;
        if in_u != in_v {
            disagreements.push(probe.to_text());
        }
    }
    Ok(Domination { geometric, probe_disagreements: disagreements })
}
