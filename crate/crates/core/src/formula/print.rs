use std::sync::Arc;

use super::Formula;

// Binding strength, loosest first: -> | & + * and then unary/atoms.
const IMPL: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const SUM: u8 = 4;
const PROD: u8 = 5;
const UNARY: u8 = 6;

pub(super) fn to_text(f: &Formula) -> String {
    let mut out = String::new();
    write(f, 0, &mut out);
    out
}

/// Recognizes a left-nested chain `((R ⊕ R) ⊕ R) …` and returns `(k, R)`.
fn multiple_of(f: &Formula) -> Option<(usize, &Arc<Formula>)> {
    let Formula::OPlus(left, right) = f else {
        return None;
    };
    let mut k = 1;
    let mut cur: &Formula = left;
    loop {
        if cur == right.as_ref() {
            return Some((k + 1, right));
        }
        match cur {
            Formula::OPlus(l, r) if r == right => {
                k += 1;
                cur = l;
            }
            _ => return None,
        }
    }
}

fn write(f: &Formula, min_prec: u8, out: &mut String) {
    let prec = match f {
        Formula::Var(_) | Formula::Neg(_) => UNARY,
        Formula::OPlus(..) if multiple_of(f).is_some() => UNARY,
        Formula::Impl(..) => IMPL,
        Formula::Max(..) => OR,
        Formula::Min(..) => AND,
        Formula::OPlus(..) => SUM,
        Formula::OTimes(..) => PROD,
    };
    let paren = prec < min_prec;
    if paren {
        out.push('(');
    }
    match f {
        Formula::Var(i) => {
            out.push('X');
            out.push_str(&i.to_string());
        }
        Formula::Neg(a) => {
            out.push('!');
            write(a, UNARY, out);
        }
        Formula::Impl(a, b) => {
            // right-associative
            write(a, IMPL + 1, out);
            out.push_str(" -> ");
            write(b, IMPL, out);
        }
        Formula::OPlus(..) if prec == UNARY => {
            let (k, r) = multiple_of(f).expect("checked above");
            out.push_str(&k.to_string());
            out.push('.');
            write(r, UNARY, out);
        }
        Formula::Max(a, b) | Formula::Min(a, b) | Formula::OPlus(a, b) | Formula::OTimes(a, b) => {
            let op = match f {
                Formula::Max(..) => " | ",
                Formula::Min(..) => " & ",
                Formula::OPlus(..) => " + ",
                _ => " * ",
            };
            // left-associative
            write(a, prec, out);
            out.push_str(op);
            write(b, prec + 1, out);
        }
    }
    if paren {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;

    #[test]
    fn minimal_parentheses() {
        for (src, printed) in [
            ("X1 -> X2 -> X3", "X1 -> X2 -> X3"),
            ("(X1 -> X2) -> X3", "(X1 -> X2) -> X3"),
            ("X1 + X1 & X2", "2.X1 & X2"),
            ("X1 + X2 + X3", "X1 + X2 + X3"),
            ("X1 + (X2 + X3)", "X1 + (X2 + X3)"),
            ("!(X1 * X1)", "!(X1 * X1)"),
            ("3.!X1", "3.!X1"),
            ("2.(X1 | X2)", "2.(X1 | X2)"),
            ("X1 + X1 + X2", "2.X1 + X2"),
        ] {
            assert_eq!(parse(src).unwrap().to_text(), printed, "{src}");
        }
    }
}
