//! Command-line front end.
//!
//! Exit codes: 0 when the verdict holds (valid, certified, satisfied), 1 when
//! it fails (a witness or countermodel is printed), 2 on usage or input errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{ArgGroup, Args, Parser, Subcommand};
use luka_core::consequence::{
    formula_from_interval, semantic_consequence, semantic_over_set, stable_consequence, witness_verify,
    ConsequenceReport, Countermodel, Family, Theory,
};
use luka_core::diffval::{dominates, satisfies, DifferentialValuation, Validity};
use luka_core::geometry::{format_point, parse_point, Point};
use luka_core::io::{format_region, parse_region, parse_set, parse_theory, parse_valuation};
use luka_core::tangent::{
    certify_outgoing, certify_tangent_sequence, sss_check, tangent_cone_polyhedral, ClosedSetDescription,
    SssVerdict, TangentReport, TangentVerdict,
};
use luka_core::{compile, eval_formula, parse, Formula, Rat, VariableSet};

#[derive(Parser, Debug)]
#[command(name = "luka", version, about = "Exact decision procedures for infinite-valued Lukasiewicz logic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a formula at a rational point.
    Eval {
        #[arg(short = 'f', long = "formula")]
        formula: String,
        /// Coordinates separated by commas or spaces, e.g. "1/2,3/4".
        #[arg(short = 'p', long = "point")]
        point: String,
    },
    /// Compile a formula to a piecewise-linear function.
    Compile {
        #[arg(short = 'f', long = "formula")]
        formula: String,
        #[arg(short = 'n', long = "dim")]
        dim: Option<usize>,
        /// Print every cell with its affine piece.
        #[arg(long)]
        dump: bool,
    },
    /// Print the set where a formula takes the value 1, as a region file.
    Oneset {
        #[arg(short = 'f', long = "formula")]
        formula: String,
        #[arg(short = 'n', long = "dim")]
        dim: Option<usize>,
    },
    /// Decide whether a theory (or a region) entails a formula.
    Entails(EntailsArgs),
    /// Differential valuation queries.
    Diffval {
        #[command(subcommand)]
        action: DiffvalAction,
    },
    /// Tangent checks on a closed set given by a region or sequence file.
    Tangent {
        #[command(subcommand)]
        action: TangentAction,
    },
    /// Verify a differential valuation as a witness against stable consequence.
    Witness {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        query: String,
        #[arg(long)]
        valuation: PathBuf,
        /// Name of the indexed family the theory lists a prefix of.
        #[arg(long)]
        family: Option<String>,
        /// Index of the first listed member of the family.
        #[arg(long, default_value_t = 1, requires = "family")]
        start: u64,
    },
    /// Build a formula in X1 whose one-set is exactly [0, a].
    Interval {
        #[arg(long = "a")]
        a: String,
    },
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true).args(["semantic", "stable", "over_set"])))]
struct EntailsArgs {
    #[arg(long)]
    semantic: bool,
    #[arg(long)]
    stable: bool,
    /// Region file: the query is checked on every point of the region.
    #[arg(long = "over-set", value_name = "REGIONFILE")]
    over_set: Option<PathBuf>,
    #[arg(long, required_unless_present = "over_set")]
    theory: Option<PathBuf>,
    #[arg(long)]
    query: String,
}

#[derive(Subcommand, Debug)]
enum DiffvalAction {
    /// Check that a valuation is well formed.
    Check {
        #[arg(long)]
        valuation: PathBuf,
    },
    /// Decide whether a valuation stably satisfies a formula.
    Satisfies {
        #[arg(long)]
        valuation: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Decide whether the first valuation (over K) dominates the second (over H).
    Dominates {
        #[arg(long)]
        valuation: PathBuf,
        #[arg(long)]
        valuation2: PathBuf,
        /// Extra probe formulas over H.
        #[arg(long)]
        formula: Vec<String>,
        /// Variable indices of the first valuation, e.g. "1,2" (default 1..n).
        #[arg(long)]
        k: Option<String>,
        /// Variable indices of the second valuation (default 1..n).
        #[arg(long)]
        h: Option<String>,
    },
}

#[derive(Args, Debug)]
struct TangentArgs {
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    point: String,
    #[arg(long)]
    dir: String,
    #[arg(long = "max-m", default_value_t = 10)]
    max_m: u64,
    #[arg(long)]
    lambda: Option<String>,
}

#[derive(Subcommand, Debug)]
enum TangentAction {
    /// Certify a tangent direction of a point sequence at its limit.
    Certify(TangentArgs),
    /// Check that a short open segment from the point misses the set.
    Outgoing(TangentArgs),
    /// Look for an outgoing rational tangent at the given candidate.
    Sss(TangentArgs),
    /// Generators of the feasible-direction cone of a region at a point.
    Cone {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        point: String,
    },
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn formula(text: &str) -> anyhow::Result<Formula> {
    parse(text).with_context(|| format!("cannot parse formula `{text}`"))
}

fn point(text: &str) -> anyhow::Result<Point> {
    let p = parse_point(text).with_context(|| format!("cannot parse point `{text}`"))?;
    if p.is_empty() {
        bail!("empty point");
    }
    Ok(p)
}

fn rational(text: &str) -> anyhow::Result<Rat> {
    text.trim().parse().with_context(|| format!("cannot parse rational `{text}`"))
}

fn theory(path: &Path) -> anyhow::Result<Theory> {
    Ok(parse_theory(&read(path)?, &path.display().to_string())?)
}

fn valuation(path: &Path) -> anyhow::Result<DifferentialValuation> {
    Ok(parse_valuation(&read(path)?, &path.display().to_string())?)
}

fn variable_set(text: Option<&str>, n: usize) -> anyhow::Result<VariableSet> {
    let Some(text) = text else {
        return Ok((1..=n).collect());
    };
    let set: VariableSet = text
        .split([',', ' '])
        .filter(|t| !t.is_empty())
        .map(|t| t.trim_start_matches('X').parse::<usize>().with_context(|| format!("bad variable `{t}`")))
        .collect::<anyhow::Result<_>>()?;
    if set.len() != n || set.iter().any(|i| i == 0) {
        bail!("variable set `{text}` must list {n} distinct positive indices");
    }
    Ok(set)
}

fn code(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

fn print_consequence(out: &mut dyn Write, rep: &ConsequenceReport) -> anyhow::Result<i32> {
    writeln!(out, "{}", if rep.holds() { "holds" } else { "fails" })?;
    match &rep.countermodel {
        Some(Countermodel::Point(p)) => writeln!(out, "countermodel: {}", format_point(p))?,
        Some(Countermodel::Valuation(u)) => {
            writeln!(out, "countermodel valuation:")?;
            write!(out, "{u}")?;
        }
        None => {}
    }
    if let Some(v) = &rep.min_value {
        writeln!(out, "minimum: {v}")?;
    }
    if let Some(c) = &rep.cross_check {
        writeln!(
            out,
            "cross-check: {} flags tested, {} models, {} refuting",
            c.flags_tested, c.models_found, c.refuting_flags
        )?;
    }
    for n in &rep.notes {
        writeln!(out, "note: {n}")?;
    }
    Ok(code(rep.holds()))
}

fn print_tangent(out: &mut dyn Write, rep: &TangentReport) -> anyhow::Result<()> {
    match rep.verdict {
        TangentVerdict::CertifiedUpTo(m) => writeln!(out, "certified up to m = {m}")?,
        TangentVerdict::RefutedAt(m) => writeln!(out, "refuted at m = {m}")?,
        TangentVerdict::NotApplicable => writeln!(out, "not applicable")?,
    }
    for (m, i) in &rep.evidence {
        writeln!(out, "m {m}: point {i}")?;
    }
    if let Some((ok, lambda)) = &rep.outgoing {
        writeln!(out, "outgoing: {ok} (lambda {lambda})")?;
    }
    for n in &rep.notes {
        writeln!(out, "note: {n}")?;
    }
    Ok(())
}

fn entails(args: EntailsArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let psi = formula(&args.query)?;
    let rep = if let Some(path) = &args.over_set {
        let region = parse_region(&read(path)?, &path.display().to_string())?;
        semantic_over_set(&region, &psi)?
    } else {
        let path = args.theory.as_deref().ok_or_else(|| anyhow!("--theory is required"))?;
        let t = theory(path)?;
        if args.stable {
            stable_consequence(&t, &psi)?
        } else {
            semantic_consequence(&t, &psi)?
        }
    };
    print_consequence(out, &rep)
}

fn diffval(action: DiffvalAction, out: &mut dyn Write) -> anyhow::Result<i32> {
    match action {
        DiffvalAction::Check { valuation: path } => match valuation(&path)?.validate() {
            Validity::Valid => {
                writeln!(out, "valid")?;
                Ok(0)
            }
            Validity::Invalid(why) => {
                writeln!(out, "invalid: {why}")?;
                Ok(1)
            }
        },
        DiffvalAction::Satisfies { valuation: path, formula: f } => {
            let u = valuation(&path)?;
            let ok = satisfies(&u, &formula(&f)?)?;
            writeln!(out, "{}", if ok { "satisfied" } else { "not satisfied" })?;
            Ok(code(ok))
        }
        DiffvalAction::Dominates { valuation: v_path, valuation2: u_path, formula: probes, k, h } => {
            let v = valuation(&v_path)?;
            let u = valuation(&u_path)?;
            let kset = variable_set(k.as_deref(), v.dim())?;
            let hset = variable_set(h.as_deref(), u.dim())?;
            let probes = probes.iter().map(|p| formula(p)).collect::<anyhow::Result<Vec<_>>>()?;
            let d = dominates(&v, &kset, &u, &hset, &probes)?;
            writeln!(out, "{}", if d.verdict() { "dominates" } else { "does not dominate" })?;
            writeln!(out, "geometric: {}", d.geometric)?;
            for p in &d.probe_disagreements {
                writeln!(out, "probe disagreement: {p}")?;
            }
            Ok(code(d.verdict()))
        }
    }
}

fn tangent(action: TangentAction, out: &mut dyn Write) -> anyhow::Result<i32> {
    let load = |path: &Path| -> anyhow::Result<ClosedSetDescription> {
        Ok(parse_set(&read(path)?, &path.display().to_string())?)
    };
    match action {
        TangentAction::Certify(a) => {
            let set = load(&a.set)?;
            let x = point(&a.point)?;
            if let ClosedSetDescription::Sequence(seq) = &set {
                if seq.limit() != x.as_slice() {
                    bail!("--point must be the limit of the sequence");
                }
            }
            let rep = certify_tangent_sequence(&set, &point(&a.dir)?, a.max_m)?;
            print_tangent(out, &rep)?;
            Ok(code(rep.certified()))
        }
        TangentAction::Outgoing(a) => {
            let set = load(&a.set)?;
            let lambda = rational(a.lambda.as_deref().unwrap_or("1/2"))?;
            let ok = certify_outgoing(&set, &point(&a.point)?, &point(&a.dir)?, &lambda)?;
            writeln!(out, "outgoing: {ok} (lambda {lambda})")?;
            Ok(code(ok))
        }
        TangentAction::Sss(a) => {
            let set = load(&a.set)?;
            let rep = sss_check(&set, &[(point(&a.point)?, point(&a.dir)?)], a.max_m)?;
            let decided = match &rep.verdict {
                SssVerdict::StronglySemisimple => {
                    writeln!(out, "strongly semisimple")?;
                    true
                }
                SssVerdict::NotStronglySemisimpleWitnessed { point, direction, lambda } => {
                    writeln!(out, "not strongly semisimple (witnessed)")?;
                    writeln!(out, "point: {}", format_point(point))?;
                    writeln!(out, "dir: {}", format_point(direction))?;
                    writeln!(out, "lambda: {lambda}")?;
                    true
                }
                SssVerdict::NoWitnessFoundUpTo(m) => {
                    writeln!(out, "no witness found up to m = {m}")?;
                    false
                }
            };
            if rep.heuristic {
                writeln!(out, "note: dimension is not 2, verdict is heuristic")?;
            }
            for (_, _, t) in &rep.candidates {
                print_tangent(out, t)?;
            }
            Ok(code(decided))
        }
        TangentAction::Cone { set, point: p } => {
            let ClosedSetDescription::Polyhedral(region) = load(&set)? else {
                bail!("tangent cones need a region file");
            };
            for g in tangent_cone_polyhedral(&region, &point(&p)?)? {
                writeln!(out, "{}", format_point(&g))?;
            }
            Ok(0)
        }
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<i32> {
    match cli.command {
        Command::Eval { formula: f, point: p } => {
            writeln!(out, "{}", eval_formula(&formula(&f)?, &point(&p)?)?)?;
            Ok(0)
        }
        Command::Compile { formula: f, dim, dump } => {
            let f = formula(&f)?;
            let pl = compile(&f, dim.unwrap_or_else(|| f.max_var().max(1)))?;
            writeln!(out, "dim: {}", pl.dim())?;
            writeln!(out, "cells: {}", pl.cells().len())?;
            if dump {
                write!(out, "{}", pl.dump())?;
            }
            Ok(0)
        }
        Command::Oneset { formula: f, dim } => {
            let f = formula(&f)?;
            let pl = compile(&f, dim.unwrap_or_else(|| f.max_var().max(1)))?;
            write!(out, "{}", format_region(&pl.one_set()))?;
            Ok(0)
        }
        Command::Entails(args) => entails(args, out),
        Command::Diffval { action } => diffval(action, out),
        Command::Tangent { action } => tangent(action, out),
        Command::Witness { theory: t, query, valuation: v, family, start } => {
            let mut t = theory(&t)?;
            if let Some(name) = family {
                let end = start + t.len().saturating_sub(1) as u64;
                t = t.with_family(Family { name, start, end });
            }
            let rep = witness_verify(&t, &formula(&query)?, &valuation(&v)?)?;
            for (i, f) in &rep.failing_members {
                writeln!(out, "member {} not satisfied: {f}", i + 1)?;
            }
            if rep.query_satisfied {
                writeln!(out, "query is satisfied by the valuation")?;
            }
            writeln!(out, "{}", if rep.is_witness() { "witness verified" } else { "not a witness" })?;
            writeln!(out, "members checked: {}", rep.members_checked)?;
            if let (true, Some(p)) = (rep.is_witness(), &rep.proviso) {
                writeln!(out, "proviso: {p}")?;
            }
            Ok(code(rep.is_witness()))
        }
        Command::Interval { a } => {
            writeln!(out, "{}", formula_from_interval(&rational(&a)?)?)?;
            Ok(0)
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Reports go to `out`, diagnostics to `err`.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}
