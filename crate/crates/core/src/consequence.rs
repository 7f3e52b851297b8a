//! Semantic consequence, stable consequence for finite theories, witness
//! checks for infinite families, and interval formulas.

use std::collections::BTreeSet;
use std::fmt;

use crate::diffval::{in_ideal_unchecked, DifferentialValuation};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::geometry::{format_point, gram_schmidt, is_zero_vector, scale, Point};
use crate::pl::{compile, eval_formula, overlay, MinResult, PLFunction, RegionUnion};
use crate::rat::Rat;
use crate::synth;

/// Index range of a listed prefix of an indexed family `θ_start, θ_{start+1}, …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub name: String,
    pub start: u64,
    pub end: u64,
}

/// A finite, ordered list of formulas.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    formulas: Vec<Formula>,
    family: Option<Family>,
}

impl Theory {
    pub fn new(formulas: Vec<Formula>) -> Theory {
        Theory { formulas, family: None }
    }

    pub fn with_family(mut self, family: Family) -> Theory {
        self.family = Some(family);
        self
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn family(&self) -> Option<&Family> {
        self.family.as_ref()
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    /// Largest variable index over all members (0 for the empty theory).
    pub fn dim(&self) -> usize {
        self.formulas.iter().map(Formula::max_var).max().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Semantic,
    Stable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Countermodel {
    Point(Point),
    Valuation(DifferentialValuation),
}

impl fmt::Display for Countermodel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Countermodel::Point(p) => f.write_str(&format_point(p)),
            Countermodel::Valuation(u) => write!(f, "{u}"),
        }
    }
}

/// Summary of the bounded search for differential countermodels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrossCheck {
    /// Valid flags examined.
    pub flags_tested: usize,
    /// Flags satisfying every member of the theory.
    pub models_found: usize,
    /// Flags satisfying the theory but not the query.
    pub refuting_flags: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsequenceReport {
    pub verdict: Verdict,
    pub mode: Mode,
    pub countermodel: Option<Countermodel>,
    /// `min ψ̂` over the model set; `None` when that set is empty or in stable mode.
    pub min_value: Option<Rat>,
    pub cross_check: Option<CrossCheck>,
    pub notes: Vec<String>,
}

impl ConsequenceReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// `Mod(Θ)` over `[0,1]^dim`.
pub fn model_set(theory: &Theory, dim: usize) -> Result<RegionUnion> {
    let mut region = RegionUnion::cube(dim);
    for theta in theory.formulas() {
        region = region.intersect(&compile(theta, dim)?.one_set());
        if region.is_empty() {
            break;
        }
    }
    Ok(region)
}

fn working_dim(theory: &Theory, psi: &Formula) -> usize {
    theory.dim().max(psi.max_var()).max(1)
}

/// `Θ ⊨ ψ`, in the smallest dimension covering every variable.
pub fn semantic_consequence(theory: &Theory, psi: &Formula) -> Result<ConsequenceReport> {
    semantic_consequence_in(theory, psi, working_dim(theory, psi))
}

/// `Θ ⊨ ψ` with formulas read over `[0,1]^dim`.
pub fn semantic_consequence_in(theory: &Theory, psi: &Formula, dim: usize) -> Result<ConsequenceReport> {
    let region = model_set(theory, dim)?;
    let report = semantic_over_set(&region, psi)?;
    if let Some(Countermodel::Point(v)) = &report.countermodel {
        for theta in theory.formulas() {
            if !eval_formula(theta, v)?.is_one() {
                return Err(Error::InternalSoundness(format!(
                    "countermodel {} does not satisfy {theta}",
                    format_point(v)
                )));
            }
        }
    }
    Ok(report)
}

/// Whether `ψ̂ = 1` on every point of `x`.
pub fn semantic_over_set(x: &RegionUnion, psi: &Formula) -> Result<ConsequenceReport> {
    let f = compile(psi, x.dim())?;
    let mut report = ConsequenceReport {
        verdict: Verdict::Holds,
        mode: Mode::Semantic,
        countermodel: None,
        min_value: None,
        cross_check: None,
        notes: Vec::new(),
    };
    match f.min_over_region(x)? {
        MinResult::Infeasible => report.notes.push("model set is empty".into()),
        MinResult::Min { value, argmin } => {
            if !value.is_one() {
                let direct = eval_formula(psi, &argmin)?;
                if direct != value || !x.contains(&argmin) {
                    return Err(Error::InternalSoundness(format!(
                        "minimizer {} does not re-evaluate to {value}",
                        format_point(&argmin)
                    )));
                }
                report.verdict = Verdict::Fails;
                report.countermodel = Some(Countermodel::Point(argmin));
            }
            report.min_value = Some(value);
        }
    }
    Ok(report)
}

/// Upper bound on the flags examined by the cross-check.
const MAX_FLAGS: usize = 4000;

/// Scales `d` so that its first nonzero coordinate is `±1`.
fn canonical_direction(d: &[Rat]) -> Point {
    let lead = d.iter().find(|x| !x.is_zero()).expect("nonzero direction").abs();
    scale(&lead.recip(), d)
}

fn second_directions(d: &[Rat]) -> Vec<Point> {
    let n = d.len();
    let mut out = BTreeSet::new();
    if n == 2 {
        let perp = vec![-&d[1], d[0].clone()];
        out.insert(perp.iter().map(|x| -x).collect::<Point>());
        out.insert(perp);
    } else {
        for i in 0..n {
            let mut e = vec![Rat::zero(); n];
            e[i] = Rat::one();
            if let Some(w) = gram_schmidt(&[d.to_vec(), e]).get(1) {
                let w = canonical_direction(w);
                out.insert(w.iter().map(|x| -x).collect::<Point>());
                out.insert(w);
            }
        }
    }
    out.into_iter().collect()
}

/// Candidate flags of order at most 2 built from the vertices and edge
/// directions of the common refinement, plus the coordinate axes.
fn candidate_flags(dim: usize, functions: &[&PLFunction]) -> Vec<DifferentialValuation> {
    let mut vertices = BTreeSet::new();
    let mut directions = BTreeSet::new();
    for cell in overlay(dim, functions) {
        let (vs, es) = cell.vertices_and_edges();
        vertices.extend(vs);
        for e in es.into_iter().filter(|e| !is_zero_vector(e)) {
            let c = canonical_direction(&e);
            directions.insert(c.iter().map(|x| -x).collect::<Point>());
            directions.insert(c);
        }
    }
    for i in 0..dim {
        let mut e = vec![Rat::zero(); dim];
        e[i] = Rat::one();
        directions.insert(e.iter().map(|x| -x).collect::<Point>());
        directions.insert(e);
    }
    let mut flags = Vec::new();
    for v in &vertices {
        flags.push(DifferentialValuation::point(v.clone()));
    }
    'outer: for v in &vertices {
        for d in &directions {
            let first = DifferentialValuation::new(v.clone(), vec![d.clone()]);
            if !first.validate().is_valid() {
                continue;
            }
            flags.push(first);
            for d2 in second_directions(d) {
                flags.push(DifferentialValuation::new(v.clone(), vec![d.clone(), d2]));
            }
            if flags.len() >= MAX_FLAGS {
                break 'outer;
            }
        }
    }
    flags.truncate(MAX_FLAGS);
    flags
}

/// `Θ ⊨∂ ψ` for finite `Θ`. The verdict is the semantic one; a bounded
/// search over candidate flags confirms that no differential valuation
/// among them separates `Θ` from `ψ` when the verdict is positive.
pub fn stable_consequence(theory: &Theory, psi: &Formula) -> Result<ConsequenceReport> {
    let dim = working_dim(theory, psi);
    let semantic = semantic_consequence_in(theory, psi, dim)?;

    let thetas: Vec<PLFunction> = theory
        .formulas()
        .iter()
        .map(|t| compile(t, dim))
        .collect::<Result<_>>()?;
    let query = compile(psi, dim)?;
    let mut refs: Vec<&PLFunction> = thetas.iter().collect();
    refs.push(&query);
    let co_thetas: Vec<PLFunction> = thetas.iter().map(PLFunction::negate).collect();
    let co_query = query.negate();

    let mut check = CrossCheck::default();
    let mut separating = None;
    for u in candidate_flags(dim, &refs) {
        if !u.validate().is_valid() {
            continue;
        }
        check.flags_tested += 1;
        if !co_thetas.iter().all(|f| in_ideal_unchecked(f, &u)) {
            continue;
        }
        check.models_found += 1;
        if !in_ideal_unchecked(&co_query, &u) {
            check.refuting_flags += 1;
            separating.get_or_insert(u);
        }
    }
    if semantic.holds() {
        if let Some(u) = separating {
            return Err(Error::InternalSoundness(format!(
                "semantic consequence holds but this valuation satisfies the theory and not the query:\n{u}"
            )));
        }
    }

    let countermodel = match (&semantic.countermodel, separating) {
        (_, Some(u)) => Some(Countermodel::Valuation(u)),
        (Some(Countermodel::Point(v)), None) => Some(Countermodel::Valuation(DifferentialValuation::point(v.clone()))),
        (other, None) => other.clone(),
    };
    if let Some(Countermodel::Valuation(u)) = &countermodel {
        let w = witness_verify(theory, psi, u)?;
        if !w.is_witness() {
            return Err(Error::InternalSoundness(format!("countermodel does not re-verify:\n{u}")));
        }
    }
    Ok(ConsequenceReport {
        verdict: semantic.verdict,
        mode: Mode::Stable,
        countermodel,
        min_value: None,
        cross_check: Some(check),
        notes: vec!["finite theory: stable consequence coincides with semantic consequence".into()],
    })
}

/// Outcome of [`witness_verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    /// Members not satisfied by the valuation, with their positions.
    pub failing_members: Vec<(usize, Formula)>,
    pub query_satisfied: bool,
    pub members_checked: usize,
    pub proviso: Option<String>,
}

impl WitnessReport {
    pub fn is_witness(&self) -> bool {
        self.failing_members.is_empty() && !self.query_satisfied
    }
}

/// Checks that `u` satisfies every listed member and fails `psi`, which
/// refutes `Θ' ⊨∂ ψ` for every `Θ'` made of formulas that `u` satisfies.
pub fn witness_verify(members: &Theory, psi: &Formula, u: &DifferentialValuation) -> Result<WitnessReport> {
    let mut failing = Vec::new();
    for (i, theta) in members.formulas().iter().enumerate() {
        if !crate::diffval::satisfies(u, theta)? {
            failing.push((i, theta.clone()));
        }
    }
    let query_satisfied = crate::diffval::satisfies(u, psi)?;
    let proviso = members.family().map(|fam| {
        format!(
            "the full family {} fails stable consequence provided every unlisted member beyond index {} is also satisfied by this valuation",
            fam.name, fam.end
        )
    });
    Ok(WitnessReport {
        failing_members: failing,
        query_satisfied,
        members_checked: members.len(),
        proviso,
    })
}

/// A formula in `X1` whose one-set is exactly `[0, a]` and whose value
/// drops immediately to the right of `a`.
pub fn formula_from_interval(a: &Rat) -> Result<Formula> {
    if !a.is_positive() || *a >= Rat::one() {
        return Err(Error::EndpointOutOfRange(a.to_string()));
    }
    let theta = synth::negate(&synth::ramp_at(a, 1)?);
    let f = compile(&theta, 1)?;
    let mut intervals: Vec<(Rat, Rat)> = f
        .one_set()
        .members()
        .iter()
        .map(|p| p.bounding_box().expect("members are bounded").remove(0))
        .collect();
    intervals.sort();
    let mut covered = Rat::zero();
    let mut exact = intervals.first().is_some_and(|(lo, _)| lo.is_zero());
    for (lo, hi) in &intervals {
        exact &= *lo <= covered;
        covered = covered.max(hi.clone());
    }
    exact &= covered == *a;
    let falling = f.dir_deriv(&[a.clone()], &[Rat::one()])?.is_negative();
    if !exact || !falling {
        return Err(Error::SynthesisFailed(format!("candidate for {a} has the wrong one-set")));
    }
    Ok(theta)
}
