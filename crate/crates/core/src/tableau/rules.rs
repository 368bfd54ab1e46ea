//! Completion rules: preconditions and their effects.

use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use super::TableauError;
use crate::abox::{as_name_chain, ABox, Individual};
use crate::normalize::complement_nnf;
use crate::syntax::{role_length, Concept, Fragment, RoleChain, RoleDnf, RoleExpr};

pub const DEFAULT_MAX_INDIVIDUALS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleKind {
    And,
    Or,
    Geq,
    Leq,
    Choose,
    GeqExt,
    LeqExt,
    ChooseExt,
}

impl RuleKind {
    /// Rules with a single outcome.
    pub fn is_deterministic(self) -> bool {
        matches!(self, RuleKind::And | RuleKind::Geq)
    }

    /// Scheduling class: deterministic rules first, then OR, CHOOSE, LEQ, GEQ_EXT.
    pub(crate) fn priority(self) -> u8 {
        match self {
            RuleKind::And | RuleKind::Geq => 0,
            RuleKind::Or => 1,
            RuleKind::Choose | RuleKind::ChooseExt => 2,
            RuleKind::Leq | RuleKind::LeqExt => 3,
            RuleKind::GeqExt => 4,
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleKind::And => "AND",
            RuleKind::Or => "OR",
            RuleKind::Geq => "GEQ",
            RuleKind::Leq => "LEQ",
            RuleKind::Choose => "CHOOSE",
            RuleKind::GeqExt => "GEQ_EXT",
            RuleKind::LeqExt => "LEQ_EXT",
            RuleKind::ChooseExt => "CHOOSE_EXT",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleAux {
    None,
    /// How many qualified successors are missing, and a maximum set of
    /// pairwise distinct ones that already exist.
    Deficit {
        missing: usize,
        existing: Vec<Individual>,
    },
    /// Candidate merges as `(from, into)`; `from` is always the newer individual.
    Merges(Vec<(Individual, Individual)>),
    Successor(Individual),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleInstance {
    pub kind: RuleKind,
    pub individual: Individual,
    pub concept: Arc<Concept>,
    pub aux: RuleAux,
}

impl fmt::Display for RuleInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.kind, self.individual, self.concept)
    }
}

pub(crate) enum RoleShape<'a> {
    Chain(RoleChain),
    Complex(&'a RoleDnf),
}

pub(crate) fn role_shape(r: &RoleExpr) -> Result<RoleShape<'_>, TableauError> {
    if let Some(chain) = as_name_chain(r) {
        return Ok(RoleShape::Chain(chain));
    }
    match r {
        RoleExpr::Dnf(d) if d.chain_length().is_some() => Ok(RoleShape::Complex(d)),
        other => Err(TableauError::Fragment {
            fragment: Fragment::Unsupported,
            detail: format!("role {other} is not a chain or a same-length DNF"),
        }),
    }
}

fn not_nnf(c: &Concept) -> TableauError {
    TableauError::Fragment {
        fragment: Fragment::Unsupported,
        detail: format!("{c} is not in negation normal form"),
    }
}

/// Instances of every rule whose precondition holds for `c(x)`.
pub(crate) fn rules_for(
    a: &ABox,
    x: Individual,
    c: &Arc<Concept>,
) -> Result<Vec<RuleInstance>, TableauError> {
    let instance = |kind, aux| RuleInstance {
        kind,
        individual: x,
        concept: c.clone(),
        aux,
    };
    let mut out = Vec::new();
    match &**c {
        Concept::Atom(_) | Concept::Top | Concept::Bottom => {}
        Concept::Not(inner) => {
            if !matches!(**inner, Concept::Atom(_)) {
                return Err(not_nnf(c));
            }
        }
        Concept::And(l, r) => {
            if !a.has_concept(x, l) || !a.has_concept(x, r) {
                out.push(instance(RuleKind::And, RuleAux::None));
            }
        }
        Concept::Or(l, r) => {
            if !a.has_concept(x, l) && !a.has_concept(x, r) {
                out.push(instance(RuleKind::Or, RuleAux::None));
            }
        }
        Concept::AtLeast(n, r, q) => {
            let complex = matches!(role_shape(r)?, RoleShape::Complex(_));
            let (p, existing) = a.max_distinct_qualified(x, r, q);
            let missing = match n.to_usize() {
                Some(n) => n.saturating_sub(p),
                None => usize::MAX,
            };
            if missing > 0 {
                let kind = if complex {
                    RuleKind::GeqExt
                } else {
                    RuleKind::Geq
                };
                out.push(instance(
                    kind,
                    RuleAux::Deficit {
                        missing,
                        existing: existing.into_iter().collect(),
                    },
                ));
            }
            push_chooses(a, x, r, q, complex, &mut out, &instance);
        }
        Concept::AtMost(n, r, q) => {
            let complex = matches!(role_shape(r)?, RoleShape::Complex(_));
            let qualified = a.qualified_successors(x, r, q);
            if n.to_usize().is_some_and(|n| qualified.len() > n) {
                let mut pairs = Vec::new();
                for (i, &older) in qualified.iter().enumerate() {
                    for &newer in &qualified[i + 1..] {
                        if !a.are_distinct(older, newer) {
                            pairs.push((newer, older));
                        }
                    }
                }
                if !pairs.is_empty() {
                    let kind = if complex {
                        RuleKind::LeqExt
                    } else {
                        RuleKind::Leq
                    };
                    out.push(instance(kind, RuleAux::Merges(pairs)));
                }
            }
            push_chooses(a, x, r, q, complex, &mut out, &instance);
        }
        Concept::Exists(..) | Concept::Forall(..) => return Err(not_nnf(c)),
    }
    Ok(out)
}

fn push_chooses(
    a: &ABox,
    x: Individual,
    r: &RoleExpr,
    q: &Concept,
    complex: bool,
    out: &mut Vec<RuleInstance>,
    instance: &dyn Fn(RuleKind, RuleAux) -> RuleInstance,
) {
    if *q == Concept::Top {
        return;
    }
    let negated = complement_nnf(q);
    let kind = if complex {
        RuleKind::ChooseExt
    } else {
        RuleKind::Choose
    };
    for y in a.successors(x, r) {
        if !a.has_concept(y, q) && !a.has_concept(y, &negated) {
            out.push(instance(kind, RuleAux::Successor(y)));
        }
    }
}

/// Every applicable rule instance, ordered by focus level, individual and concept.
pub fn applicable_rules(a: &ABox) -> Result<Vec<RuleInstance>, TableauError> {
    let mut individuals: Vec<Individual> = a.individuals().collect();
    individuals.sort_by_key(|&x| (a.level(x), x));
    let mut out = Vec::new();
    for x in individuals {
        for c in a.label(x) {
            out.extend(rules_for(a, x, c)?);
        }
    }
    Ok(out)
}

/// Applies a rule with the default individual limit.
pub fn apply_rule(a: &ABox, ri: &RuleInstance) -> Result<Vec<ABox>, TableauError> {
    apply_rule_limited(a, ri, DEFAULT_MAX_INDIVIDUALS)
}

/// Applies a rule, returning one ABox per alternative in a fixed order.
pub fn apply_rule_limited(
    a: &ABox,
    ri: &RuleInstance,
    max_individuals: usize,
) -> Result<Vec<ABox>, TableauError> {
    let x = ri.individual;
    if !a.has_concept(x, &ri.concept) || !rules_for(a, x, &ri.concept)?.contains(ri) {
        return Err(TableauError::NotApplicable {
            kind: ri.kind,
            individual: x,
            concept: ri.concept.to_string(),
        });
    }
    let with = |additions: &[(Individual, Concept)]| {
        let mut b = a.clone();
        for (y, c) in additions {
            b.assert_concept(*y, c.clone());
        }
        b
    };
    Ok(match (&*ri.concept, &ri.aux) {
        (Concept::And(l, r), _) => vec![with(&[(x, (**l).clone()), (x, (**r).clone())])],
        (Concept::Or(l, r), _) => vec![with(&[(x, (**l).clone())]), with(&[(x, (**r).clone())])],
        (Concept::AtLeast(_, r, q), RuleAux::Deficit { missing, existing }) => {
            let needed = missing
                .checked_mul(role_length(r).max(1))
                .and_then(|k| k.checked_add(a.individual_count()));
            if needed.is_none_or(|k| k > max_individuals) {
                return Err(TableauError::ResourceLimit(format!(
                    "{} would exceed {max_individuals} individuals",
                    ri
                )));
            }
            match role_shape(r)? {
                RoleShape::Chain(chain) => {
                    let disjunct = [chain];
                    vec![add_successors(
                        a,
                        x,
                        &[&disjunct[..]].repeat(*missing),
                        q,
                        existing,
                    )]
                }
                RoleShape::Complex(dnf) => multisets(dnf.disjuncts.len(), *missing)
                    .into_iter()
                    .map(|choice| {
                        let picks: Vec<&[RoleChain]> =
                            choice.iter().map(|&i| &dnf.disjuncts[i][..]).collect();
                        add_successors(a, x, &picks, q, existing)
                    })
                    .collect(),
            }
        }
        (Concept::AtMost(..), RuleAux::Merges(pairs)) => pairs
            .iter()
            .map(|&(from, into)| a.merge(from, into))
            .collect::<Result<_, _>>()?,
        (Concept::AtLeast(_, _, q) | Concept::AtMost(_, _, q), RuleAux::Successor(y)) => {
            vec![
                with(&[(*y, (**q).clone())]),
                with(&[(*y, complement_nnf(q))]),
            ]
        }
        _ => unreachable!("rule instance does not match its concept"),
    })
}

/// One fresh endpoint per entry of `picks`. Each conjunct chain of the entry
/// gets its own intermediate individuals and ends in that shared endpoint.
fn add_successors(
    a: &ABox,
    x: Individual,
    picks: &[&[RoleChain]],
    q: &Concept,
    existing: &[Individual],
) -> ABox {
    let mut b = a.clone();
    let level = a.level(x).unwrap_or(0);
    let mut endpoints = Vec::with_capacity(picks.len());
    for conjuncts in picks {
        let m = conjuncts.first().map_or(1, Vec::len);
        let mut lasts = Vec::with_capacity(conjuncts.len());
        for chain in conjuncts.iter() {
            let mut prev = x;
            for (k, role) in chain[..m - 1].iter().enumerate() {
                let next = b.fresh(level + k + 1);
                b.assert_role(role, prev, next);
                prev = next;
            }
            lasts.push((prev, &chain[m - 1]));
        }
        let end = b.fresh(level + m);
        for (prev, role) in lasts {
            b.assert_role(role, prev, end);
        }
        b.assert_concept(end, q.clone());
        endpoints.push(end);
    }
    for (i, &zi) in endpoints.iter().enumerate() {
        for &zj in &endpoints[i + 1..] {
            b.assert_distinct(zi, zj);
        }
        for &y in existing {
            b.assert_distinct(y, zi);
        }
    }
    b
}

/// Non-decreasing index sequences of length `k` over `0..n`, in lexicographic order.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn go(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            go(n, k, i, current, out);
            current.pop();
        }
    }
    go(n, k, 0, &mut current, &mut out);
    out
}

/// Whether neither `q(y)` nor its complement is asserted.
pub(crate) fn choose_pending(a: &ABox, y: Individual, q: &Concept) -> bool {
    *q != Concept::Top && !a.has_concept(y, q) && !a.has_concept(y, &complement_nnf(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_concept;

    const X: Individual = Individual::ROOT;

    fn p(s: &str) -> Concept {
        crate::normalize::canonicalize_roles(&crate::normalize::nnf(&parse_concept(s).unwrap()))
            .unwrap()
    }

    fn only(a: &ABox) -> RuleInstance {
        let rules = applicable_rules(a).unwrap();
        assert_eq!(rules.len(), 1, "{rules:?}");
        rules.into_iter().next().unwrap()
    }

    #[test]
    fn and_rule() {
        let a = ABox::initial(p("(A and B)"));
        let ri = only(&a);
        assert_eq!(ri.kind, RuleKind::And);
        let out = apply_rule(&a, &ri).unwrap();
        assert_eq!(out.len(), 1);
        assert!(applicable_rules(&out[0]).unwrap().is_empty());
        assert!(matches!(
            apply_rule(&out[0], &ri),
            Err(TableauError::NotApplicable { .. })
        ));
    }

    #[test]
    fn geq_adds_distinct_successors() {
        let a = ABox::initial(p("(>= 2 R . A)"));
        let ri = only(&a);
        assert_eq!(ri.kind, RuleKind::Geq);
        let b = apply_rule(&a, &ri).unwrap().remove(0);
        assert_eq!(
            b.to_string(),
            "(>= 2 R . A)(x0)\nA(v1)\nA(v2)\nR(x0,v1)\nR(x0,v2)\nv1 != v2\n"
        );
    }

    #[test]
    fn geq_on_chain_allocates_intermediate_first() {
        let a = ABox::initial(p("(>= 1 (R o S) . A)"));
        let b = apply_rule(&a, &only(&a)).unwrap().remove(0);
        assert_eq!(
            b.to_string(),
            "(>= 1 (R o S) . A)(x0)\nA(v2)\nR(x0,v1)\nS(v1,v2)\n"
        );
        assert_eq!(b.level(Individual(2)), Some(2));
    }

    #[test]
    fn geq_ext_shares_the_endpoint() {
        let a = ABox::initial(p("(>= 1 (R & S) . Top)"));
        let ri = only(&a);
        assert_eq!(ri.kind, RuleKind::GeqExt);
        let out = apply_rule(&a, &ri).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(
            out[0].to_string(),
            "(>= 1 (R & S) . Top)(x0)\nR(x0,v1)\nS(x0,v1)\n"
        );
    }

    #[test]
    fn geq_ext_branches_over_disjunct_multisets() {
        let a = ABox::initial(p("(>= 2 (R | S) . Top)"));
        let out = apply_rule(&a, &only(&a)).unwrap();
        assert_eq!(out.len(), 3);
        assert!(out[1].to_string().contains("R(x0,v1)\nS(x0,v2)"));
    }

    #[test]
    fn choose_is_offered_for_unlabelled_successors() {
        let mut a = ABox::initial(p("(<= 1 R . A)"));
        a.assert_role("R", X, Individual(1));
        let ri = only(&a);
        assert_eq!(ri.kind, RuleKind::Choose);
        assert_eq!(ri.aux, RuleAux::Successor(Individual(1)));
        let out = apply_rule(&a, &ri).unwrap();
        assert!(out[0].has_concept(Individual(1), &p("A")));
        assert!(out[1].has_concept(Individual(1), &p("not A")));
    }

    #[test]
    fn leq_merges_newer_into_older() {
        let (y, z) = (Individual(1), Individual(2));
        let mut a = ABox::initial(p("(<= 1 R . A)"));
        a.assert_role("R", X, y);
        a.assert_role("R", X, z);
        a.assert_concept(y, p("A"));
        a.assert_concept(z, p("A"));
        let ri = only(&a);
        assert_eq!(ri.aux, RuleAux::Merges(vec![(z, y)]));
        let out = apply_rule(&a, &ri).unwrap();
        assert_eq!(out.len(), 1);
        assert!(!out[0].contains(z));
    }

    #[test]
    fn complete_abox_has_no_rules() {
        let a = ABox::initial(p("(A or B)"));
        let b = apply_rule(&a, &only(&a)).unwrap().remove(0);
        assert!(applicable_rules(&b).unwrap().is_empty());
    }

    #[test]
    fn non_nnf_is_rejected() {
        let a = ABox::initial(parse_concept("(some R . A)").unwrap());
        assert!(matches!(
            applicable_rules(&a),
            Err(TableauError::Fragment { .. })
        ));
    }

    #[test]
    fn multiset_enumeration() {
        assert_eq!(multisets(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(multisets(3, 1).len(), 3);
    }
}
