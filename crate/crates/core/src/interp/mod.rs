//! Finite interpretations and the set-based semantic evaluator.
//!
//! Names missing from an interpretation denote empty extensions.

mod format;
mod oracle;

use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexSet;
use num_traits::ToPrimitive;

use crate::abox::ABox;
use crate::syntax::{Concept, Name, RoleExpr};

pub use format::{parse_interpretation, InterpError};
pub use oracle::{enumerate_model, enumerate_model_with_budget, OracleError, DEFAULT_STEP_BUDGET};

/// Index of a domain element.
pub type Element = usize;

pub type ElementSet = BTreeSet<Element>;
pub type Relation = BTreeSet<(Element, Element)>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interpretation {
    domain: IndexSet<String>,
    concepts: BTreeMap<Name, ElementSet>,
    roles: BTreeMap<Name, Relation>,
    assignment: BTreeMap<String, Element>,
}

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a domain element, returning the existing index if the name is known.
    pub fn add_element(&mut self, name: &str) -> Element {
        match self.domain.get_index_of(name) {
            Some(i) => i,
            None => self.domain.insert_full(name.to_string()).0,
        }
    }

    pub fn element(&self, name: &str) -> Option<Element> {
        self.domain.get_index_of(name)
    }

    pub fn element_name(&self, e: Element) -> &str {
        &self.domain[e]
    }

    pub fn domain_size(&self) -> usize {
        self.domain.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        0..self.domain.len()
    }

    pub fn add_concept_member(&mut self, concept: &str, e: Element) {
        assert!(e < self.domain.len(), "element out of range");
        self.concepts.entry(concept.into()).or_default().insert(e);
    }

    /// Declares a concept name with whatever extension it already has (possibly empty).
    pub fn declare_concept(&mut self, concept: &str) {
        self.concepts.entry(concept.into()).or_default();
    }

    pub fn add_role_pair(&mut self, role: &str, from: Element, to: Element) {
        assert!(
            from < self.domain.len() && to < self.domain.len(),
            "element out of range"
        );
        self.roles
            .entry(role.into())
            .or_default()
            .insert((from, to));
    }

    pub fn declare_role(&mut self, role: &str) {
        self.roles.entry(role.into()).or_default();
    }

    pub fn assign(&mut self, individual: &str, e: Element) {
        assert!(e < self.domain.len(), "element out of range");
        self.assignment.insert(individual.to_string(), e);
    }

    pub fn assignment(&self) -> &BTreeMap<String, Element> {
        &self.assignment
    }

    pub fn set_assignment(&mut self, assignment: BTreeMap<String, Element>) {
        self.assignment = assignment;
    }

    pub fn concept_names(&self) -> impl Iterator<Item = (&Name, &ElementSet)> {
        self.concepts.iter()
    }

    pub fn role_names(&self) -> impl Iterator<Item = (&Name, &Relation)> {
        self.roles.iter()
    }

    pub fn concept_ext(&self, name: &str) -> ElementSet {
        self.concepts.get(name).cloned().unwrap_or_default()
    }

    pub fn role_ext(&self, name: &str) -> Relation {
        self.roles.get(name).cloned().unwrap_or_default()
    }

    /// Names of the elements in `set`, in domain order.
    pub fn names<'a>(&'a self, set: &ElementSet) -> Vec<&'a str> {
        set.iter().map(|&e| self.element_name(e)).collect()
    }

    fn all_elements(&self) -> ElementSet {
        self.elements().collect()
    }
}

fn compose(left: &Relation, right: &Relation) -> Relation {
    let mut by_source: BTreeMap<Element, Vec<Element>> = BTreeMap::new();
    for &(a, b) in right {
        by_source.entry(a).or_default().push(b);
    }
    let mut out = Relation::new();
    for &(a, b) in left {
        if let Some(targets) = by_source.get(&b) {
            out.extend(targets.iter().map(|&c| (a, c)));
        }
    }
    out
}

/// The extension of a role expression.
pub fn eval_role(i: &Interpretation, r: &RoleExpr) -> Relation {
    match r {
        RoleExpr::Atomic(n) => i.roles.get(n).cloned().unwrap_or_default(),
        RoleExpr::Inverse(r) => eval_role(i, r).into_iter().map(|(a, b)| (b, a)).collect(),
        RoleExpr::Chain(ps) => {
            let mut parts = ps.iter();
            let Some(first) = parts.next() else {
                return i.elements().map(|e| (e, e)).collect();
            };
            parts.fold(eval_role(i, first), |acc, p| {
                compose(&acc, &eval_role(i, p))
            })
        }
        RoleExpr::Union(ps) => ps.iter().flat_map(|p| eval_role(i, p)).collect(),
        RoleExpr::Intersection(ps) => {
            let mut parts = ps.iter().map(|p| eval_role(i, p));
            let first = parts.next().unwrap_or_default();
            parts.fold(first, |acc, p| acc.intersection(&p).copied().collect())
        }
        RoleExpr::Dnf(d) => eval_role(i, &d.to_surface()),
    }
}

fn qualified_counts(i: &Interpretation, r: &RoleExpr, c: &Concept) -> BTreeMap<Element, usize> {
    let rel = eval_role(i, r);
    let filler = eval_concept(i, c);
    let mut counts = BTreeMap::new();
    for (a, b) in rel {
        if filler.contains(&b) {
            *counts.entry(a).or_insert(0) += 1;
        }
    }
    counts
}

/// The extension of a concept.
pub fn eval_concept(i: &Interpretation, c: &Concept) -> ElementSet {
    match c {
        Concept::Atom(n) => i.concepts.get(n).cloned().unwrap_or_default(),
        Concept::Top => i.all_elements(),
        Concept::Bottom => ElementSet::new(),
        Concept::Not(x) => {
            let inner = eval_concept(i, x);
            i.elements().filter(|e| !inner.contains(e)).collect()
        }
        Concept::And(a, b) => {
            let a = eval_concept(i, a);
            eval_concept(i, b).intersection(&a).copied().collect()
        }
        Concept::Or(a, b) => {
            let mut a = eval_concept(i, a);
            a.extend(eval_concept(i, b));
            a
        }
        Concept::Exists(r, x) => qualified_counts(i, r, x).into_keys().collect(),
        Concept::Forall(r, x) => {
            let bad = qualified_counts(i, r, &Concept::Not(x.clone()));
            i.elements().filter(|e| !bad.contains_key(e)).collect()
        }
        Concept::AtLeast(n, r, x) => {
            let counts = qualified_counts(i, r, x);
            i.elements()
                .filter(|e| at_least(counts.get(e).copied().unwrap_or(0), n))
                .collect()
        }
        Concept::AtMost(n, r, x) => {
            let counts = qualified_counts(i, r, x);
            i.elements()
                .filter(|e| !at_least(counts.get(e).copied().unwrap_or(0), &(n + 1u8)))
                .collect()
        }
    }
}

fn at_least(count: usize, n: &num_bigint::BigUint) -> bool {
    n.to_usize().is_some_and(|n| count >= n)
}

/// Whether `i` (with its assignment) satisfies every assertion of `a`.
pub fn check_abox_model(i: &Interpretation, a: &ABox) -> bool {
    let assignment = i.assignment();
    check_with_assignment(i, a, &|name| assignment.get(name).copied())
}

fn check_with_assignment(
    i: &Interpretation,
    a: &ABox,
    lookup: &dyn Fn(&str) -> Option<Element>,
) -> bool {
    let mut cache: BTreeMap<&Concept, ElementSet> = BTreeMap::new();
    for (ind, concept) in a.concept_assertions() {
        let Some(e) = lookup(&ind.to_string()) else {
            return false;
        };
        let ext = cache
            .entry(concept)
            .or_insert_with(|| eval_concept(i, concept));
        if !ext.contains(&e) {
            return false;
        }
    }
    let mut role_cache: BTreeMap<&Name, Relation> = BTreeMap::new();
    for (from, role, to) in a.role_assertions() {
        let (Some(x), Some(y)) = (lookup(&from.to_string()), lookup(&to.to_string())) else {
            return false;
        };
        let rel = role_cache.entry(role).or_insert_with(|| i.role_ext(role));
        if !rel.contains(&(x, y)) {
            return false;
        }
    }
    for (p, q) in a.inequalities() {
        match (lookup(&p.to_string()), lookup(&q.to_string())) {
            (Some(x), Some(y)) if x != y => {}
            _ => return false,
        }
    }
    a.individuals()
        .all(|ind| lookup(&ind.to_string()).is_some())
}

/// Searches for an assignment of the individuals of `a` that extends `base`
/// and makes `i` a model of `a`. Individuals of `base` that no longer occur in
/// `a` are dropped from the result.
pub fn extend_assignment(
    i: &Interpretation,
    a: &ABox,
    base: &BTreeMap<String, Element>,
) -> Option<BTreeMap<String, Element>> {
    let individuals: Vec<String> = a.individuals().map(|x| x.to_string()).collect();
    let mut current: BTreeMap<String, Element> = individuals
        .iter()
        .filter_map(|n| base.get(n).map(|&e| (n.clone(), e)))
        .collect();
    let open: Vec<&String> = individuals
        .iter()
        .filter(|n| !current.contains_key(*n))
        .collect();

    let concept_ext: Vec<(String, ElementSet)> = a
        .concept_assertions()
        .map(|(x, c)| (x.to_string(), eval_concept(i, c)))
        .collect();
    let edges: Vec<(String, Relation, String)> = a
        .role_assertions()
        .map(|(x, r, y)| (x.to_string(), i.role_ext(r), y.to_string()))
        .collect();
    let distinct: Vec<(String, String)> = a
        .inequalities()
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect();

    let consistent = |m: &BTreeMap<String, Element>| {
        concept_ext
            .iter()
            .all(|(x, ext)| m.get(x).is_none_or(|e| ext.contains(e)))
            && edges.iter().all(|(x, rel, y)| match (m.get(x), m.get(y)) {
                (Some(&a), Some(&b)) => rel.contains(&(a, b)),
                _ => true,
            })
            && distinct.iter().all(|(x, y)| match (m.get(x), m.get(y)) {
                (Some(a), Some(b)) => a != b,
                _ => true,
            })
    };

    fn search(
        k: usize,
        open: &[&String],
        domain: usize,
        current: &mut BTreeMap<String, Element>,
        consistent: &dyn Fn(&BTreeMap<String, Element>) -> bool,
    ) -> bool {
        if !consistent(current) {
            return false;
        }
        if k == open.len() {
            return true;
        }
        for e in 0..domain {
            current.insert(open[k].clone(), e);
            if search(k + 1, open, domain, current, consistent) {
                return true;
            }
        }
        current.remove(open[k]);
        false
    }

    search(0, &open, i.domain_size(), &mut current, &consistent).then_some(current)
}
