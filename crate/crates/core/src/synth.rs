//! One-variable formula synthesis for truncated ramps `clamp(q·x − p)`.
//!
//! The ramp is written as a composition of digit maps `D_{c,d}(y) =
//! clamp(c·y − d)`, one per factor `c` of `q`, with the digits `d` taken from
//! the mixed-radix expansion of `p`. Digit maps with `d = 0` or `d = c − 1`
//! are plain multiples; the remaining ones are sums of Schauder hats obtained
//! by Farey refinement of `[0, 1]`. Subformulas are shared, so the result is
//! small as a DAG even when its printed form is long.

use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::rat::Rat;

/// `¬f`, cancelling a double negation.
pub fn negate(f: &Formula) -> Formula {
    match f {
        Formula::Neg(inner) => (**inner).clone(),
        _ => Formula::neg(f.clone()),
    }
}

fn small_factors(mut q: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= q && p < 1000 {
        while q % p == 0 {
            out.push(p);
            q /= p;
        }
        p += 1;
    }
    if q > 1 {
        out.push(q);
    }
    out
}

struct Vertex {
    num: u64,
    den: u64,
    hat: Arc<Formula>,
}

/// `clamp(c·y − d)` for `1 ≤ d ≤ c − 2`, as `⊕_v k_v · hat_v` over a Farey
/// subdivision that has `d/c` and `(d+1)/c` among its vertices.
fn hat_digit(c: u64, d: u64, y: &Arc<Formula>) -> Formula {
    let mut vs = vec![
        Vertex { num: 0, den: 1, hat: Arc::new(negate(y)) },
        Vertex { num: 1, den: 1, hat: y.clone() },
    ];
    for target in [d, d + 1] {
        loop {
            // Position of the first vertex at or beyond target/c.
            let i = vs
                .iter()
                .position(|v| u128::from(v.num) * u128::from(c) >= u128::from(target) * u128::from(v.den))
                .expect("1 is a vertex");
            if u128::from(vs[i].num) * u128::from(c) == u128::from(target) * u128::from(vs[i].den) {
                break;
            }
            let (l, r) = (&vs[i - 1], &vs[i]);
            let mid = Vertex {
                num: l.num + r.num,
                den: l.den + r.den,
                hat: Arc::new(Formula::min(l.hat.clone(), r.hat.clone())),
            };
            let left = Arc::new(Formula::otimes(l.hat.clone(), Arc::new(negate(&r.hat))));
            let right = Arc::new(Formula::otimes(r.hat.clone(), Arc::new(negate(&l.hat))));
            vs[i - 1].hat = left;
            vs[i].hat = right;
            vs.insert(i, mid);
        }
    }
    let mut sum: Option<Formula> = None;
    for v in &vs {
        let raw = i128::from(c) * i128::from(v.num) - i128::from(d) * i128::from(v.den);
        let k = raw.clamp(0, i128::from(v.den)) as usize;
        if k == 0 {
            continue;
        }
        let term = if k == 1 { (*v.hat).clone() } else { Formula::multiple(k, v.hat.clone()) };
        sum = Some(match sum {
            None => term,
            Some(acc) => Formula::oplus(acc, term),
        });
    }
    sum.expect("the vertex 1 always contributes")
}

fn digit_map(c: u64, d: u64, y: Formula) -> Formula {
    if d == 0 {
        Formula::multiple(c as usize, y)
    } else if d == c - 1 {
        negate(&Formula::multiple(c as usize, negate(&y)))
    } else {
        hat_digit(c, d, &Arc::new(y))
    }
}

/// Formula whose function is `clamp(q·x − p)` where `x` is the value of `x`,
/// for integers `0 ≤ p < q`.
pub fn ramp(p: u64, q: u64, x: Formula) -> Formula {
    assert!(p < q, "ramp requires p < q");
    let radices = small_factors(q);
    let mut digits = Vec::with_capacity(radices.len());
    let mut rest = p;
    for &c in radices.iter().rev() {
        digits.push(rest % c);
        rest /= c;
    }
    digits.reverse();
    radices
        .iter()
        .zip(digits)
        .fold(x, |acc, (&c, d)| digit_map(c, d, acc))
}

fn to_u64_pair(a: &Rat) -> Result<(u64, u64)> {
    match (a.numer().to_u64(), a.denom().to_u64()) {
        (Some(p), Some(q)) if q < (1 << 62) => Ok((p, q)),
        _ => Err(Error::SynthesisFailed(format!("{a} is outside the supported range"))),
    }
}

/// `min(1, q·|X_var − p/q|)` for `c = p/q ∈ [0, 1]`.
pub fn distance_formula(c: &Rat, var: usize) -> Result<Formula> {
    let (p, q) = to_u64_pair(c)?;
    let x = Formula::var(var);
    Ok(if p == 0 {
        x
    } else if p == q {
        Formula::neg(x)
    } else {
        Formula::oplus(ramp(p, q, x.clone()), ramp(q - p, q, Formula::neg(x)))
    })
}

/// `clamp(q·X_var − p)` for `a = p/q ∈ [0, 1)`.
pub fn ramp_at(a: &Rat, var: usize) -> Result<Formula> {
    let (p, q) = to_u64_pair(a)?;
    if p >= q {
        return Err(Error::SynthesisFailed(format!("{a} is not below 1")));
    }
    Ok(ramp(p, q, Formula::var(var)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl::eval_formula;

    fn check_ramp(p: u64, q: u64) {
        let f = ramp(p, q, Formula::var(1));
        for i in 0..=4 * q {
            let x = Rat::new(i as i64, 4 * q as i64);
            let want = (&(&Rat::from_int(q as i64) * &x) - &Rat::from_int(p as i64))
                .max(Rat::zero())
                .min(Rat::one());
            assert_eq!(eval_formula(&f, &[x.clone()]).unwrap(), want, "p={p} q={q} x={x}");
        }
    }

    #[test]
    fn ramps_match_target() {
        for q in 1..=12 {
            for p in 0..q {
                check_ramp(p, q);
            }
        }
        check_ramp(5, 8);
        check_ramp(7, 30);
        check_ramp(13, 17);
    }

    #[test]
    fn double_negation_cancels() {
        let f = negate(&ramp(1, 2, Formula::var(1)));
        assert_eq!(f.to_text(), "2.!X1");
    }

    #[test]
    fn distance_vanishes_only_at_center() {
        let c = Rat::new(2, 5);
        let f = distance_formula(&c, 1).unwrap();
        assert!(eval_formula(&f, &[c]).unwrap().is_zero());
        assert_eq!(eval_formula(&f, &[Rat::new(1, 2)]).unwrap(), Rat::new(1, 2));
        assert_eq!(eval_formula(&f, &[Rat::zero()]).unwrap(), Rat::one());
    }
}
