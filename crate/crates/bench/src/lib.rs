//! Deterministic workloads shared by the benchmarks.

use luka_core::consequence::{formula_from_interval, Theory};
use luka_core::geometry::{AffineFn, Polyhedron};
use luka_core::{parse, Formula, Rat};

/// Formulas of growing size in three variables, built by nesting a fixed pattern.
pub fn nested_formulas(depth: usize) -> Vec<Formula> {
    let mut out = Vec::with_capacity(depth);
    let mut f = parse("X1 * X2 -> X3").expect("valid formula");
    for i in 0..depth {
        let var = Formula::var(1 + i % 3);
        f = match i % 3 {
            0 => Formula::oplus(Formula::neg(f), var),
            1 => Formula::max(Formula::otimes(f, var.clone()), Formula::neg(var)),
            _ => Formula::implies(var, f),
        };
        out.push(f.clone());
    }
    out
}

/// The members `[0, 1/2 + 2^-k]` for `k = 3..=last`.
pub fn interval_family(last: u32) -> Theory {
    let half = Rat::new(1, 2);
    Theory::new(
        (3..=last)
            .map(|k| formula_from_interval(&(&half + &Rat::pow2_neg(k))).expect("a lies in (0,1)"))
            .collect(),
    )
}

/// The cube cut by `k` slanted half-spaces in dimension `n`.
pub fn cut_cube(n: usize, k: usize) -> Polyhedron {
    let mut p = Polyhedron::cube(n);
    for i in 0..k {
        let coeffs = (0..n).map(|j| Rat::from_int(if (i + j) % 2 == 0 { -1 } else { 2 })).collect();
        p.push(AffineFn::new(Rat::new(1 + i as i64, 2), coeffs));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_well_formed() {
        assert_eq!(nested_formulas(5).len(), 5);
        assert_eq!(interval_family(6).len(), 4);
        assert!(!cut_cube(3, 4).is_empty());
    }
}
