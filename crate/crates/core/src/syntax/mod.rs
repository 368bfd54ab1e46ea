//! Concept and role abstract syntax.
//!
//! Concepts cover the Boolean constructors, value/existential restrictions and
//! qualified number restrictions. Roles cover atomic names, inverses,
//! composition chains and Boolean combinations; [`RoleDnf`] is the normalized
//! union-of-intersections form consumed by the tableau.

mod measures;
mod parser;
mod printer;

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigUint;

pub(crate) use measures::{and_or_size, depth, role_length};
pub use measures::{classify_fragment, measures, subconcepts, Fragment, Measures};
pub use parser::{parse_concept, parse_role, ParseError, ParseErrorKind};
pub use printer::print_concept;

/// Interned-ish name of a concept or role.
pub type Name = Arc<str>;

/// A composition chain of atomic role names, `R1 o R2 o ... o Rm`.
pub type RoleChain = Vec<Name>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Atom(Name),
    Top,
    Bottom,
    Not(Arc<Concept>),
    And(Arc<Concept>, Arc<Concept>),
    Or(Arc<Concept>, Arc<Concept>),
    Exists(RoleExpr, Arc<Concept>),
    Forall(RoleExpr, Arc<Concept>),
    /// `>= n R . C`. Unqualified restrictions use `Top` as qualifier.
    AtLeast(BigUint, RoleExpr, Arc<Concept>),
    /// `<= n R . C`.
    AtMost(BigUint, RoleExpr, Arc<Concept>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RoleExpr {
    Atomic(Name),
    Inverse(Box<RoleExpr>),
    /// Left-flattened composition; built through [`RoleExpr::chain`].
    Chain(Vec<RoleExpr>),
    /// Surface `|`; operands are never themselves unions when parsed.
    Union(Vec<RoleExpr>),
    /// Surface `&`.
    Intersection(Vec<RoleExpr>),
    Dnf(RoleDnf),
}

/// A role in disjunctive normal form: a union of intersections of chains of
/// atomic roles. Well-formed instances have a single common chain length.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RoleDnf {
    pub disjuncts: Vec<Vec<RoleChain>>,
}

impl RoleDnf {
    pub fn new(disjuncts: Vec<Vec<RoleChain>>) -> Self {
        RoleDnf { disjuncts }
    }

    /// A single chain viewed as a one-disjunct, one-conjunct DNF.
    pub fn from_chain(chain: RoleChain) -> Self {
        RoleDnf {
            disjuncts: vec![vec![chain]],
        }
    }

    fn chains(&self) -> impl Iterator<Item = &RoleChain> {
        self.disjuncts.iter().flatten()
    }

    /// The common chain length, or `None` when lengths differ, a chain is
    /// empty, or there are no chains at all.
    pub fn chain_length(&self) -> Option<usize> {
        let mut lengths = self.chains().map(Vec::len);
        let first = lengths.next()?;
        if first == 0 || lengths.any(|l| l != first) {
            return None;
        }
        Some(first)
    }

    pub fn max_chain_length(&self) -> usize {
        self.chains().map(Vec::len).max().unwrap_or(0)
    }

    /// `Some(chain)` when this DNF is a single plain chain.
    pub fn as_single_chain(&self) -> Option<&RoleChain> {
        match self.disjuncts.as_slice() {
            [conjuncts] => match conjuncts.as_slice() {
                [chain] => Some(chain),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn role_names(&self) -> impl Iterator<Item = &Name> {
        self.chains().flatten()
    }

    /// Equivalent surface expression built from unions, intersections and chains.
    pub fn to_surface(&self) -> RoleExpr {
        let chain = |c: &RoleChain| RoleExpr::chain(c.iter().map(|n| RoleExpr::Atomic(n.clone())));
        let disjuncts: Vec<RoleExpr> = self
            .disjuncts
            .iter()
            .map(|conj| RoleExpr::intersection(conj.iter().map(chain)))
            .collect();
        RoleExpr::union(disjuncts)
    }
}

impl RoleExpr {
    pub fn atomic(name: &str) -> Self {
        RoleExpr::Atomic(name.into())
    }

    pub fn inverse(r: RoleExpr) -> Self {
        RoleExpr::Inverse(Box::new(r))
    }

    /// Composition of `parts`, splicing nested chains. A single part is returned as is.
    pub fn chain(parts: impl IntoIterator<Item = RoleExpr>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                RoleExpr::Chain(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            RoleExpr::Chain(flat)
        }
    }

    /// `R1 o R2 o ...` over atomic names.
    pub fn chain_of(names: &[&str]) -> Self {
        RoleExpr::chain(names.iter().map(|n| RoleExpr::atomic(n)))
    }

    pub fn union(parts: impl IntoIterator<Item = RoleExpr>) -> Self {
        let mut parts: Vec<RoleExpr> = parts.into_iter().collect();
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            RoleExpr::Union(parts)
        }
    }

    pub fn intersection(parts: impl IntoIterator<Item = RoleExpr>) -> Self {
        let mut parts: Vec<RoleExpr> = parts.into_iter().collect();
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            RoleExpr::Intersection(parts)
        }
    }

    pub fn contains_inverse(&self) -> bool {
        match self {
            RoleExpr::Atomic(_) | RoleExpr::Dnf(_) => false,
            RoleExpr::Inverse(_) => true,
            RoleExpr::Chain(ps) | RoleExpr::Union(ps) | RoleExpr::Intersection(ps) => {
                ps.iter().any(RoleExpr::contains_inverse)
            }
        }
    }

    pub fn is_boolean(&self) -> bool {
        match self {
            RoleExpr::Union(_) | RoleExpr::Intersection(_) => true,
            RoleExpr::Dnf(d) => d.as_single_chain().is_none(),
            RoleExpr::Atomic(_) => false,
            RoleExpr::Inverse(r) => r.is_boolean(),
            RoleExpr::Chain(ps) => ps.iter().any(RoleExpr::is_boolean),
        }
    }

    pub fn collect_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            RoleExpr::Atomic(n) => {
                out.insert(n.clone());
            }
            RoleExpr::Inverse(r) => r.collect_names(out),
            RoleExpr::Chain(ps) | RoleExpr::Union(ps) | RoleExpr::Intersection(ps) => {
                ps.iter().for_each(|p| p.collect_names(out))
            }
            RoleExpr::Dnf(d) => out.extend(d.role_names().cloned()),
        }
    }
}

impl Concept {
    pub fn atom(name: &str) -> Self {
        Concept::Atom(name.into())
    }

    pub fn negate(c: Concept) -> Self {
        Concept::Not(Arc::new(c))
    }

    pub fn and(a: Concept, b: Concept) -> Self {
        Concept::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Concept, b: Concept) -> Self {
        Concept::Or(Arc::new(a), Arc::new(b))
    }

    pub fn exists(r: RoleExpr, c: Concept) -> Self {
        Concept::Exists(r, Arc::new(c))
    }

    pub fn forall(r: RoleExpr, c: Concept) -> Self {
        Concept::Forall(r, Arc::new(c))
    }

    pub fn at_least(n: u64, r: RoleExpr, c: Concept) -> Self {
        Concept::AtLeast(BigUint::from(n), r, Arc::new(c))
    }

    pub fn at_most(n: u64, r: RoleExpr, c: Concept) -> Self {
        Concept::AtMost(BigUint::from(n), r, Arc::new(c))
    }

    /// Left-nested conjunction; the empty conjunction is `Top`.
    pub fn and_all(parts: impl IntoIterator<Item = Concept>) -> Self {
        parts
            .into_iter()
            .reduce(Concept::and)
            .unwrap_or(Concept::Top)
    }

    /// Left-nested disjunction; the empty disjunction is `Bottom`.
    pub fn or_all(parts: impl IntoIterator<Item = Concept>) -> Self {
        parts
            .into_iter()
            .reduce(Concept::or)
            .unwrap_or(Concept::Bottom)
    }

    /// `a => b`, written as `not a or b`.
    pub fn implies(a: Concept, b: Concept) -> Self {
        Concept::or(Concept::negate(a), b)
    }

    /// The operands of the top-level conjunction spine.
    pub fn conjuncts(&self) -> Vec<&Concept> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(c) = stack.pop() {
            match c {
                Concept::And(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                other => out.push(other),
            }
        }
        out
    }

    pub fn role(&self) -> Option<&RoleExpr> {
        match self {
            Concept::Exists(r, _)
            | Concept::Forall(r, _)
            | Concept::AtLeast(_, r, _)
            | Concept::AtMost(_, r, _) => Some(r),
            _ => None,
        }
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        self.collect_signature(&mut sig);
        sig
    }

    fn collect_signature(&self, sig: &mut Signature) {
        match self {
            Concept::Atom(n) => {
                sig.concepts.insert(n.clone());
            }
            Concept::Top | Concept::Bottom => {}
            Concept::Not(c) => c.collect_signature(sig),
            Concept::And(a, b) | Concept::Or(a, b) => {
                a.collect_signature(sig);
                b.collect_signature(sig);
            }
            Concept::Exists(r, c)
            | Concept::Forall(r, c)
            | Concept::AtLeast(_, r, c)
            | Concept::AtMost(_, r, c) => {
                r.collect_names(&mut sig.roles);
                c.collect_signature(sig);
            }
        }
    }
}

/// Concept and role names occurring in an expression.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub concepts: BTreeSet<Name>,
    pub roles: BTreeSet<Name>,
}

impl Signature {
    pub fn merge(&mut self, other: &Signature) {
        self.concepts.extend(other.concepts.iter().cloned());
        self.roles.extend(other.roles.iter().cloned());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_flattens_and_collapses() {
        let r = RoleExpr::chain([RoleExpr::chain_of(&["R", "S"]), RoleExpr::atomic("T")]);
        assert_eq!(r, RoleExpr::chain_of(&["R", "S", "T"]));
        assert_eq!(
            RoleExpr::chain([RoleExpr::atomic("R")]),
            RoleExpr::atomic("R")
        );
    }

    #[test]
    fn empty_lattice_operations() {
        assert_eq!(Concept::and_all(Vec::new()), Concept::Top);
        assert_eq!(Concept::or_all(Vec::new()), Concept::Bottom);
        let a = Concept::atom("A");
        assert_eq!(Concept::or_all([a.clone()]), a);
    }

    #[test]
    fn conjunct_spine() {
        let c = Concept::and_all(["A", "B", "C"].map(Concept::atom));
        let names: Vec<String> = c.conjuncts().iter().map(|c| c.to_string()).collect();
        assert_eq!(names, ["A", "B", "C"]);
    }

    #[test]
    fn dnf_chain_length() {
        let r: RoleChain = vec!["R".into()];
        let rs: RoleChain = vec!["R".into(), "S".into()];
        assert_eq!(RoleDnf::new(vec![vec![rs.clone()]]).chain_length(), Some(2));
        assert_eq!(RoleDnf::new(vec![vec![r], vec![rs]]).chain_length(), None);
    }
}
