use std::fmt;

use super::{Concept, RoleExpr};

/// Canonical fully parenthesized rendering; accepted by [`super::parse_concept`].
pub fn print_concept(c: &Concept) -> String {
    c.to_string()
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Atom(n) => f.write_str(n),
            Concept::Top => f.write_str("Top"),
            Concept::Bottom => f.write_str("Bottom"),
            Concept::Not(c) => write!(f, "not {c}"),
            Concept::And(a, b) => write!(f, "({a} and {b})"),
            Concept::Or(a, b) => write!(f, "({a} or {b})"),
            Concept::Exists(r, c) => write!(f, "(some {} . {c})", Restricted(r)),
            Concept::Forall(r, c) => write!(f, "(all {} . {c})", Restricted(r)),
            Concept::AtLeast(n, r, c) => write!(f, "(>= {n} {} . {c})", Restricted(r)),
            Concept::AtMost(n, r, c) => write!(f, "(<= {n} {} . {c})", Restricted(r)),
        }
    }
}

// Binding strength: `|` < `&` < `o` < atoms and `inv(...)`.
const UNION: u8 = 1;
const INTERSECTION: u8 = 2;
const CHAIN: u8 = 3;
const PRIMARY: u8 = 4;

fn precedence(r: &RoleExpr) -> u8 {
    match r {
        RoleExpr::Atomic(_) | RoleExpr::Inverse(_) => PRIMARY,
        RoleExpr::Chain(ps) | RoleExpr::Union(ps) | RoleExpr::Intersection(ps) if ps.len() == 1 => {
            precedence(&ps[0])
        }
        RoleExpr::Chain(_) => CHAIN,
        RoleExpr::Intersection(_) => INTERSECTION,
        RoleExpr::Union(_) => UNION,
        RoleExpr::Dnf(d) => precedence(&d.to_surface()),
    }
}

/// Role in restriction position: composite roles are wrapped in parentheses.
struct Restricted<'a>(&'a RoleExpr);

impl fmt::Display for Restricted<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if precedence(self.0) == PRIMARY {
            write!(f, "{}", self.0)
        } else {
            write!(f, "({})", self.0)
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, r: &RoleExpr, above: u8) -> fmt::Result {
    if precedence(r) <= above {
        write!(f, "({r})")
    } else {
        write!(f, "{r}")
    }
}

fn write_joined(
    f: &mut fmt::Formatter<'_>,
    parts: &[RoleExpr],
    sep: &str,
    level: u8,
) -> fmt::Result {
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write_operand(f, p, level)?;
    }
    Ok(())
}

impl fmt::Display for RoleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoleExpr::Atomic(n) => f.write_str(n),
            RoleExpr::Inverse(r) => write!(f, "inv({r})"),
            RoleExpr::Chain(ps) => write_joined(f, ps, " o ", CHAIN),
            RoleExpr::Intersection(ps) => write_joined(f, ps, " & ", INTERSECTION),
            RoleExpr::Union(ps) => write_joined(f, ps, " | ", UNION),
            RoleExpr::Dnf(d) => write!(f, "{}", d.to_surface()),
        }
    }
}
