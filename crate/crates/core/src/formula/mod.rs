//! Formulas of infinite-valued Łukasiewicz logic over the variables `X1, X2, …`.
//!
//! Subtrees are reference counted, so a formula may be a DAG: the `k.F`
//! shorthand and the interval synthesizer both share the repeated operand
//! instead of copying it. Every traversal in this crate memoizes on node
//! identity, which keeps work linear in the number of distinct nodes.

mod parse;
mod print;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

pub use parse::parse;

/// Abstract syntax tree of a formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    /// `X_i`, `i >= 1`.
    Var(usize),
    Neg(Arc<Formula>),
    Impl(Arc<Formula>, Arc<Formula>),
    OPlus(Arc<Formula>, Arc<Formula>),
    OTimes(Arc<Formula>, Arc<Formula>),
    Max(Arc<Formula>, Arc<Formula>),
    Min(Arc<Formula>, Arc<Formula>),
}

/// The set of variable indices occurring in a formula.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VariableSet(pub BTreeSet<usize>);

impl VariableSet {
    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn is_subset(&self, other: &VariableSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn max(&self) -> Option<usize> {
        self.0.iter().next_back().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl FromIterator<usize> for VariableSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VariableSet(iter.into_iter().collect())
    }
}

impl Formula {
    /// `X_i`; panics when `i == 0`.
    pub fn var(i: usize) -> Formula {
        assert!(i >= 1, "variable indices start at 1");
        Formula::Var(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: impl Into<Arc<Formula>>) -> Formula {
        Formula::Neg(f.into())
    }

    pub fn implies(a: impl Into<Arc<Formula>>, b: impl Into<Arc<Formula>>) -> Formula {
        Formula::Impl(a.into(), b.into())
    }

    pub fn oplus(a: impl Into<Arc<Formula>>, b: impl Into<Arc<Formula>>) -> Formula {
        Formula::OPlus(a.into(), b.into())
    }

    pub fn otimes(a: impl Into<Arc<Formula>>, b: impl Into<Arc<Formula>>) -> Formula {
        Formula::OTimes(a.into(), b.into())
    }

    pub fn max(a: impl Into<Arc<Formula>>, b: impl Into<Arc<Formula>>) -> Formula {
        Formula::Max(a.into(), b.into())
    }

    pub fn min(a: impl Into<Arc<Formula>>, b: impl Into<Arc<Formula>>) -> Formula {
        Formula::Min(a.into(), b.into())
    }

    /// `k`-fold truncated sum `F ⊕ F ⊕ … ⊕ F`, associated to the left.
    /// The operand is shared, not copied.
    pub fn multiple(k: usize, f: impl Into<Arc<Formula>>) -> Formula {
        assert!(k >= 1, "multiplicity must be positive");
        let f: Arc<Formula> = f.into();
        let mut acc = f.clone();
        for _ in 1..k {
            acc = Arc::new(Formula::OPlus(acc, f.clone()));
        }
        Arc::try_unwrap(acc).unwrap_or_else(|a| (*a).clone())
    }

    /// `X1 → X1`, the canonical tautology (the grammar has no constants).
    pub fn top() -> Formula {
        let x = Arc::new(Formula::Var(1));
        Formula::Impl(x.clone(), x)
    }

    pub fn children(&self) -> Vec<&Arc<Formula>> {
        match self {
            Formula::Var(_) => vec![],
            Formula::Neg(a) => vec![a],
            Formula::Impl(a, b)
            | Formula::OPlus(a, b)
            | Formula::OTimes(a, b)
            | Formula::Max(a, b)
            | Formula::Min(a, b) => vec![a, b],
        }
    }

    /// Bottom-up fold that visits each distinct node once.
    pub fn try_fold_shared<T: Clone, E>(
        &self,
        visit: &mut impl FnMut(&Formula, &[T]) -> Result<T, E>,
    ) -> Result<T, E> {
        fn go<T: Clone, E>(
            f: &Formula,
            memo: &mut HashMap<usize, T>,
            visit: &mut impl FnMut(&Formula, &[T]) -> Result<T, E>,
        ) -> Result<T, E> {
            let key = f as *const Formula as usize;
            if let Some(v) = memo.get(&key) {
                return Ok(v.clone());
            }
            let mut args = Vec::with_capacity(2);
            for c in f.children() {
                args.push(go(c, memo, visit)?);
            }
            let v = visit(f, &args)?;
            memo.insert(key, v.clone());
            Ok(v)
        }
        go(self, &mut HashMap::new(), visit)
    }

    pub fn fold_shared<T: Clone>(&self, visit: &mut impl FnMut(&Formula, &[T]) -> T) -> T {
        self.try_fold_shared::<T, std::convert::Infallible>(&mut |f, a| Ok(visit(f, a)))
            .unwrap_or_else(|e| match e {})
    }

    /// Rebuilds the formula bottom-up, preserving sharing.
    pub fn map_shared(&self, rebuild: &mut impl FnMut(&Formula, &[Arc<Formula>]) -> Formula) -> Formula {
        let out = self.fold_shared(&mut |f, args: &[Arc<Formula>]| Arc::new(rebuild(f, args)));
        Arc::try_unwrap(out).unwrap_or_else(|a| (*a).clone())
    }

    /// Exactly the variable indices occurring in the formula.
    pub fn variables(&self) -> VariableSet {
        let set = self.fold_shared(&mut |f, args: &[Arc<BTreeSet<usize>>]| match f {
            Formula::Var(i) => Arc::new(BTreeSet::from([*i])),
            _ if args.len() == 1 => args[0].clone(),
            _ if Arc::ptr_eq(&args[0], &args[1]) => args[0].clone(),
            _ => Arc::new(args[0].union(&args[1]).copied().collect()),
        });
        VariableSet((*set).clone())
    }

    /// Largest variable index, i.e. the least dimension the formula lives in.
    pub fn max_var(&self) -> usize {
        self.fold_shared(&mut |f, args: &[usize]| match f {
            Formula::Var(i) => *i,
            _ => args.iter().copied().max().unwrap_or(0),
        })
    }

    /// Number of distinct connective nodes.
    pub fn distinct_connectives(&self) -> usize {
        let mut count = 0;
        self.fold_shared(&mut |f, _: &[()]| {
            if !matches!(f, Formula::Var(_)) {
                count += 1;
            }
        });
        count
    }

    /// Rewrites `⊕ ⊙ ∨ ∧` in terms of `¬` and `→`:
    /// `a⊕b = ¬a→b`, `a⊙b = ¬(a→¬b)`, `a∨b = (a→b)→b`, `a∧b = ¬(¬a∨¬b)`.
    pub fn expand_derived(&self) -> Formula {
        fn join(a: &Arc<Formula>, b: &Arc<Formula>) -> Formula {
            Formula::Impl(Arc::new(Formula::Impl(a.clone(), b.clone())), b.clone())
        }
        self.map_shared(&mut |f, args| match f {
            Formula::Var(i) => Formula::Var(*i),
            Formula::Neg(_) => Formula::Neg(args[0].clone()),
            Formula::Impl(..) => Formula::Impl(args[0].clone(), args[1].clone()),
            Formula::OPlus(..) => Formula::Impl(Arc::new(Formula::Neg(args[0].clone())), args[1].clone()),
            Formula::OTimes(..) => Formula::Neg(Arc::new(Formula::Impl(
                args[0].clone(),
                Arc::new(Formula::Neg(args[1].clone())),
            ))),
            Formula::Max(..) => join(&args[0], &args[1]),
            Formula::Min(..) => {
                let na = Arc::new(Formula::Neg(args[0].clone()));
                let nb = Arc::new(Formula::Neg(args[1].clone()));
                Formula::Neg(Arc::new(join(&na, &nb)))
            }
        })
    }

    /// Renames variables through `map` (old index → new index).
    pub fn rename(&self, map: &impl Fn(usize) -> usize) -> Formula {
        self.map_shared(&mut |f, args| match f {
            Formula::Var(i) => Formula::Var(map(*i)),
            Formula::Neg(_) => Formula::Neg(args[0].clone()),
            Formula::Impl(..) => Formula::Impl(args[0].clone(), args[1].clone()),
            Formula::OPlus(..) => Formula::OPlus(args[0].clone(), args[1].clone()),
            Formula::OTimes(..) => Formula::OTimes(args[0].clone(), args[1].clone()),
            Formula::Max(..) => Formula::Max(args[0].clone(), args[1].clone()),
            Formula::Min(..) => Formula::Min(args[0].clone(), args[1].clone()),
        })
    }

    /// Textual form in the formula grammar; `parse(&f.to_text())` rebuilds `f`.
    pub fn to_text(&self) -> String {
        print::to_text(self)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl std::str::FromStr for Formula {
    type Err = crate::error::ParseError;

    fn from_str(s: &str) -> Result<Formula, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Formula {
        Formula::var(i)
    }

    #[test]
    fn variables_of_examples() {
        assert_eq!(Formula::neg(x(3)).variables(), [3].into_iter().collect());
        assert_eq!(Formula::implies(x(1), x(1)).variables(), [1].into_iter().collect());
        assert_eq!(Formula::oplus(x(1), x(2)).variables(), [1, 2].into_iter().collect());
    }

    #[test]
    fn expand_derived_examples() {
        assert_eq!(Formula::oplus(x(1), x(2)).expand_derived(), Formula::implies(Formula::neg(x(1)), x(2)));
        assert_eq!(x(1).expand_derived(), x(1));
        assert_eq!(
            Formula::otimes(x(1), x(1)).expand_derived(),
            Formula::neg(Formula::implies(x(1), Formula::neg(x(1))))
        );
    }

    #[test]
    fn multiple_shares_operand() {
        let f = Formula::multiple(3, x(2));
        assert_eq!(f, Formula::oplus(Formula::oplus(x(2), x(2)), x(2)));
        let mut deep = x(1);
        for _ in 0..64 {
            deep = Formula::multiple(2, deep);
        }
        // 2^64 leaves as a tree, 65 distinct nodes as a DAG.
        assert_eq!(deep.distinct_connectives(), 64);
        assert_eq!(deep.variables().max(), Some(1));
        assert_eq!(deep.expand_derived().distinct_connectives(), 128);
    }
}
