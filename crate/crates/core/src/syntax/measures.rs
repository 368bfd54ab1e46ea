//! Structural measures used by the termination argument and the size bounds.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;

use super::{Concept, RoleDnf, RoleExpr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measures {
    /// Maximal role depth; a restriction over a chain of length `m` adds `m`.
    pub depth: usize,
    /// Number of `and`/`or` constructors.
    pub and_or_size: usize,
    /// Total number of symbols: constructors, concept names, role names and role operators.
    pub size_c0: usize,
    /// Largest at-least bound (`some` counts as `>= 1`); zero when there is none.
    pub max_n: BigUint,
}

pub fn measures(c: &Concept) -> Measures {
    Measures {
        depth: depth(c),
        and_or_size: and_or_size(c),
        size_c0: size(c),
        max_n: max_n(c),
    }
}

/// Length of the chains in a role: composition adds up, Boolean operators take the maximum.
pub(crate) fn role_length(r: &RoleExpr) -> usize {
    match r {
        RoleExpr::Atomic(_) => 1,
        RoleExpr::Inverse(r) => role_length(r),
        RoleExpr::Chain(ps) => ps.iter().map(role_length).sum(),
        RoleExpr::Union(ps) | RoleExpr::Intersection(ps) => {
            ps.iter().map(role_length).max().unwrap_or(0)
        }
        RoleExpr::Dnf(d) => d.max_chain_length(),
    }
}

fn role_symbols(r: &RoleExpr) -> usize {
    match r {
        RoleExpr::Atomic(_) => 1,
        RoleExpr::Inverse(r) => 1 + role_symbols(r),
        RoleExpr::Chain(ps) | RoleExpr::Union(ps) | RoleExpr::Intersection(ps) => {
            ps.iter().map(role_symbols).sum::<usize>() + ps.len().saturating_sub(1)
        }
        RoleExpr::Dnf(d) => role_symbols(&d.to_surface()),
    }
}

pub(crate) fn depth(c: &Concept) -> usize {
    match c {
        Concept::Atom(_) | Concept::Top | Concept::Bottom => 0,
        Concept::Not(c) => depth(c),
        Concept::And(a, b) | Concept::Or(a, b) => depth(a).max(depth(b)),
        Concept::Exists(r, c)
        | Concept::Forall(r, c)
        | Concept::AtLeast(_, r, c)
        | Concept::AtMost(_, r, c) => role_length(r) + depth(c),
    }
}

pub(crate) fn and_or_size(c: &Concept) -> usize {
    match c {
        Concept::Atom(_) | Concept::Top | Concept::Bottom => 0,
        Concept::Not(c) => and_or_size(c),
        Concept::And(a, b) | Concept::Or(a, b) => 1 + and_or_size(a) + and_or_size(b),
        Concept::Exists(_, c)
        | Concept::Forall(_, c)
        | Concept::AtLeast(_, _, c)
        | Concept::AtMost(_, _, c) => and_or_size(c),
    }
}

fn size(c: &Concept) -> usize {
    match c {
        Concept::Atom(_) | Concept::Top | Concept::Bottom => 1,
        Concept::Not(c) => 1 + size(c),
        Concept::And(a, b) | Concept::Or(a, b) => 1 + size(a) + size(b),
        Concept::Exists(r, c)
        | Concept::Forall(r, c)
        | Concept::AtLeast(_, r, c)
        | Concept::AtMost(_, r, c) => 1 + role_symbols(r) + size(c),
    }
}

fn max_n(c: &Concept) -> BigUint {
    match c {
        Concept::Atom(_) | Concept::Top | Concept::Bottom => BigUint::zero(),
        Concept::Not(c) => max_n(c),
        Concept::And(a, b) | Concept::Or(a, b) => max_n(a).max(max_n(b)),
        Concept::Exists(_, c) => max_n(c).max(BigUint::from(1u8)),
        Concept::Forall(_, c) | Concept::AtMost(_, _, c) => max_n(c),
        Concept::AtLeast(n, _, c) => max_n(c).max(n.clone()),
    }
}

/// All syntactic subconcepts of `c`, including `c` itself.
pub fn subconcepts(c: &Concept) -> BTreeSet<Concept> {
    let mut out = BTreeSet::new();
    let mut stack = vec![c];
    while let Some(c) = stack.pop() {
        if !out.insert(c.clone()) {
            continue;
        }
        match c {
            Concept::Atom(_) | Concept::Top | Concept::Bottom => {}
            Concept::Not(x)
            | Concept::Exists(_, x)
            | Concept::Forall(_, x)
            | Concept::AtLeast(_, _, x)
            | Concept::AtMost(_, _, x) => stack.push(x),
            Concept::And(a, b) | Concept::Or(a, b) => {
                stack.push(a);
                stack.push(b);
            }
        }
    }
    out
}

/// Which logic a concept belongs to, ordered from most to least tractable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fragment {
    /// Chains of atomic roles, plus same-length Boolean combinations of them.
    AlcqComp,
    /// Inverses and compositions under value and number restrictions.
    AlcnnCompInv,
    Unsupported,
}

impl std::fmt::Display for Fragment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Fragment::AlcqComp => "ALCQ_COMP",
            Fragment::AlcnnCompInv => "ALCNN_COMP_INV",
            Fragment::Unsupported => "UNSUPPORTED",
        })
    }
}

fn role_fragment(r: &RoleExpr) -> Fragment {
    if r.is_boolean() {
        return match crate::normalize::role_dnf(r) {
            Ok(_) => Fragment::AlcqComp,
            Err(_) => Fragment::Unsupported,
        };
    }
    match r {
        RoleExpr::Dnf(d) => dnf_fragment(d),
        r if r.contains_inverse() => Fragment::AlcnnCompInv,
        _ => Fragment::AlcqComp,
    }
}

fn dnf_fragment(d: &RoleDnf) -> Fragment {
    if d.chain_length().is_some() {
        Fragment::AlcqComp
    } else {
        Fragment::Unsupported
    }
}

/// The least tractable fragment over all roles occurring in `c`.
pub fn classify_fragment(c: &Concept) -> Fragment {
    match c {
        Concept::Atom(_) | Concept::Top | Concept::Bottom => Fragment::AlcqComp,
        Concept::Not(c) => classify_fragment(c),
        Concept::And(a, b) | Concept::Or(a, b) => classify_fragment(a).max(classify_fragment(b)),
        Concept::Exists(r, c)
        | Concept::Forall(r, c)
        | Concept::AtLeast(_, r, c)
        | Concept::AtMost(_, r, c) => role_fragment(r).max(classify_fragment(c)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_concept, RoleChain};

    fn p(s: &str) -> Concept {
        parse_concept(s).unwrap()
    }

    #[test]
    fn depth_examples() {
        let m = measures(&p("(>= 2 (R o S) . A)"));
        assert_eq!(m.depth, 2);
        let m = measures(&p("A"));
        assert_eq!((m.depth, m.and_or_size), (0, 0));
        assert_eq!(measures(&p("not A")).depth, 0);
        assert_eq!(measures(&p("((A and B) or C)")).and_or_size, 2);
        assert_eq!(measures(&p("(some R . (all (S o T) . A))")).depth, 3);
    }

    #[test]
    fn size_and_max_n() {
        // and, >=, R, A, <=, S, o, T, B
        let m = measures(&p("((>= 3 R . A) and (<= 7 (S o T) . B))"));
        assert_eq!(m.size_c0, 9);
        assert_eq!(m.max_n, BigUint::from(3u8));
        assert!(m.depth <= m.size_c0);
        assert_eq!(measures(&p("(some R . A)")).max_n, BigUint::from(1u8));
    }

    #[test]
    fn subconcept_examples() {
        let s = subconcepts(&p("(A and B)"));
        assert_eq!(s, [p("(A and B)"), p("A"), p("B")].into_iter().collect());
        assert_eq!(subconcepts(&p("A")).len(), 1);
        let c = Concept::at_least(1, RoleExpr::Chain(vec![RoleExpr::atomic("R")]), p("A"));
        assert_eq!(subconcepts(&c), [c.clone(), p("A")].into_iter().collect());
    }

    #[test]
    fn fragment_examples() {
        assert_eq!(
            classify_fragment(&p("(>= 2 (R o S) . Top)")),
            Fragment::AlcqComp
        );
        assert_eq!(
            classify_fragment(&p("(<= 1 (inv(R) o R) . Top)")),
            Fragment::AlcnnCompInv
        );
        let r: RoleChain = vec!["R".into()];
        let rs: RoleChain = vec!["R".into(), "S".into()];
        let mixed = Concept::at_least(
            1,
            RoleExpr::Dnf(RoleDnf::new(vec![vec![r], vec![rs]])),
            Concept::Top,
        );
        assert_eq!(classify_fragment(&mixed), Fragment::Unsupported);
        assert_eq!(
            classify_fragment(&p("(>= 1 ((R o S) | T) . A)")),
            Fragment::Unsupported
        );
        assert_eq!(
            classify_fragment(&p("(>= 1 (R & S | T) . A)")),
            Fragment::AlcqComp
        );
        assert_eq!(
            classify_fragment(&p("(>= 1 (inv(R) | S) . A)")),
            Fragment::Unsupported
        );
    }
}
