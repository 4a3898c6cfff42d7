use super::Formula;

// Binding levels, loosest first.
const IFF: u8 = 1;
const IMP: u8 = 2;
const RHD: u8 = 3;
const ANDOR: u8 = 4;
const UNARY: u8 = 5;

enum View<'a> {
    Iff(&'a Formula, &'a Formula),
    And(&'a Formula, &'a Formula),
    Dia(&'a Formula),
    Not(&'a Formula),
    Or(&'a Formula, &'a Formula),
    Imp(&'a Formula, &'a Formula),
    Box(&'a Formula),
    Rhd(&'a Formula, &'a Formula),
    Bot,
    Var(&'a str),
}

fn as_and(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f.as_neg()? {
        Formula::Implies(lhs, rhs) => Some((lhs, rhs.as_neg()?)),
        _ => None,
    }
}

fn view(f: &Formula) -> View<'_> {
    if let Some((l, r)) = as_and(f) {
        if let (Formula::Implies(a, b), Formula::Implies(b2, a2)) = (l, r) {
            if a == a2 && b == b2 {
                return View::Iff(a, b);
            }
        }
        return View::And(l, r);
    }
    if let Some(inner) = f.as_neg() {
        if let Some(Some(body)) = inner.as_box().map(Formula::as_neg) {
            return View::Dia(body);
        }
        return View::Not(inner);
    }
    match f {
        Formula::Implies(l, r) => match l.as_neg() {
            Some(a) => View::Or(a, r),
            None => View::Imp(l, r),
        },
        Formula::Box(inner) => View::Box(inner),
        Formula::Rhd(l, r) => View::Rhd(l, r),
        Formula::Bot => View::Bot,
        Formula::Var(v) => View::Var(v),
    }
}

fn at(f: &Formula, min: u8, out: &mut String) {
    let level = level_of(&view(f));
    if level < min {
        out.push('(');
        write(f, out);
        out.push(')');
    } else {
        write(f, out);
    }
}

fn level_of(v: &View<'_>) -> u8 {
    match v {
        View::Iff(..) => IFF,
        View::Imp(..) => IMP,
        View::Rhd(..) => RHD,
        View::And(..) | View::Or(..) => ANDOR,
        _ => UNARY,
    }
}

fn binary(l: &Formula, op: &str, r: &Formula, lmin: u8, rmin: u8, out: &mut String) {
    at(l, lmin, out);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    at(r, rmin, out);
}

fn write(f: &Formula, out: &mut String) {
    match view(f) {
        View::Iff(l, r) => binary(l, "<->", r, IMP, IMP, out),
        View::Imp(l, r) => binary(l, "->", r, RHD, IMP, out),
        View::Rhd(l, r) => binary(l, "|>", r, ANDOR, ANDOR, out),
        View::And(l, r) => binary(l, "/\\", r, ANDOR, UNARY, out),
        View::Or(l, r) => binary(l, "\\/", r, ANDOR, UNARY, out),
        View::Not(x) => {
            out.push('~');
            at(x, UNARY, out);
        }
        View::Box(x) => {
            out.push_str("[]");
            at(x, UNARY, out);
        }
        View::Dia(x) => {
            out.push_str("<>");
            at(x, UNARY, out);
        }
        View::Bot => out.push_str("bot"),
        View::Var(v) => out.push_str(v),
    }
}

pub(super) fn print(f: &Formula) -> String {
    let mut out = String::new();
    write(f, &mut out);
    out
}
