use std::fmt::Write as _;

use crate::grid::Alphabet;

use super::{Atom, Formula, Sentence, Term};

fn term(t: &Term) -> String {
    if t.offset.dx == 0 && t.offset.dy == 0 {
        t.var.clone()
    } else {
        format!("{}@({},{})", t.var, t.offset.dx, t.offset.dy)
    }
}

fn is_simple(f: &Formula) -> bool {
    matches!(f, Formula::True | Formula::False | Formula::Atom(_) | Formula::AtMostOne(_) | Formula::Not(_))
}

fn operand(f: &Formula, a: &Alphabet, out: &mut String) {
    if is_simple(f) {
        write(f, a, out);
    } else {
        out.push('(');
        write(f, a, out);
        out.push(')');
    }
}

fn write(f: &Formula, a: &Alphabet, out: &mut String) {
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(Atom::ColorAt(c, t)) => {
            let _ = write!(out, "{}({})", a.name(*c), term(t));
        }
        Formula::Atom(Atom::InSet(x, t)) => {
            let _ = write!(out, "{}({})", x, term(t));
        }
        Formula::Atom(Atom::Equal(s, t)) => {
            let _ = write!(out, "{} = {}", term(s), term(t));
        }
        Formula::AtMostOne(x) => {
            let _ = write!(out, "atmostone({x})");
        }
        Formula::Not(g) => {
            out.push('!');
            if matches!(**g, Formula::Atom(Atom::Equal(..))) {
                out.push('(');
                write(g, a, out);
                out.push(')');
            } else {
                operand(g, a, out);
            }
        }
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
            let op = match f {
                Formula::And(..) => " & ",
                Formula::Or(..) => " | ",
                Formula::Implies(..) => " -> ",
                _ => " <-> ",
            };
            operand(l, a, out);
            out.push_str(op);
            operand(r, a, out);
        }
        Formula::Exists(x, g) | Formula::Forall(x, g) | Formula::ExistsSet(x, g) | Formula::ForallSet(x, g) => {
            let kw = match f {
                Formula::Exists(..) => "E",
                Formula::Forall(..) => "A",
                Formula::ExistsSet(..) => "E2",
                _ => "A2",
            };
            let _ = write!(out, "{kw} {x}. ");
            write(g, a, out);
        }
    }
}

/// Renders a formula in the syntax accepted by [`super::parse_formula`].
pub fn print_formula(f: &Formula, a: &Alphabet) -> String {
    let mut out = String::new();
    write(f, a, &mut out);
    out
}

pub fn print_sentence(s: &Sentence) -> String {
    format!(
        "alphabet {}\n{}\n",
        s.alphabet.names().join(" "),
        print_formula(&s.body, &s.alphabet)
    )
}

#[cfg(test)]
mod tests {
    use super::super::parse_sentence;

    #[test]
    fn round_trip() {
        for src in [
            "alphabet W L B\nA z. !(L(z) & L(z@(1,0)))\n",
            "alphabet W L B\nA x. A y. (L(x) & B(y@(1,0))) -> x = y\n",
            "alphabet W L\nE2 X. (A z. X(z) <-> L(z@(0,1))) & atmostone(X)\n",
            "alphabet W L\n(E x. L(x)) | (A y. !(y = y@(1,0)))\n",
            "alphabet W L\nA2 X. E z. X(z) -> (true & !false)\n",
        ] {
            let s = parse_sentence(src).unwrap();
            let printed = s.to_string();
            assert_eq!(printed, src);
            assert_eq!(parse_sentence(&printed).unwrap(), s);
        }
    }
}
