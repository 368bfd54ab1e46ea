//! Bounded exhaustive model search.
//!
//! Domain sizes are tried in ascending order. For each size the concept and
//! role bits are assigned depth-first, `false` before `true`, so candidate
//! interpretations are visited in lexicographic bitmask order. The witness is
//! always element `d0`. After every assignment the membership of `d0` is
//! evaluated in three-valued logic over the partial interpretation, which
//! prunes a subtree as soon as its outcome is decided.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use super::Interpretation;
use crate::syntax::{Concept, Name, RoleExpr, Signature};

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("model search exceeded its budget of {budget} steps")]
    ResourceLimit { budget: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tv {
    False,
    Unknown,
    True,
}

impl Tv {
    fn and(self, o: Tv) -> Tv {
        match (self, o) {
            (Tv::False, _) | (_, Tv::False) => Tv::False,
            (Tv::True, Tv::True) => Tv::True,
            _ => Tv::Unknown,
        }
    }

    fn or(self, o: Tv) -> Tv {
        match (self, o) {
            (Tv::True, _) | (_, Tv::True) => Tv::True,
            (Tv::False, Tv::False) => Tv::False,
            _ => Tv::Unknown,
        }
    }

    fn not(self) -> Tv {
        match self {
            Tv::False => Tv::True,
            Tv::True => Tv::False,
            Tv::Unknown => Tv::Unknown,
        }
    }

    fn of(bit: Option<bool>) -> Tv {
        match bit {
            None => Tv::Unknown,
            Some(true) => Tv::True,
            Some(false) => Tv::False,
        }
    }
}

#[derive(Clone, Copy)]
enum Var {
    Concept(usize, usize),
    Role(usize, usize, usize),
}

struct Search<'a> {
    root: &'a Concept,
    size: usize,
    concept_ids: BTreeMap<&'a str, usize>,
    role_ids: BTreeMap<&'a str, usize>,
    concept_bits: Vec<Option<bool>>,
    role_bits: Vec<Option<bool>>,
    vars: Vec<Var>,
    steps: u64,
    budget: u64,
}

impl<'a> Search<'a> {
    fn bit(&self, v: Var) -> Option<bool> {
        match v {
            Var::Concept(k, e) => self.concept_bits[k * self.size + e],
            Var::Role(r, a, b) => self.role_bits[(r * self.size + a) * self.size + b],
        }
    }

    fn set(&mut self, v: Var, value: Option<bool>) {
        match v {
            Var::Concept(k, e) => self.concept_bits[k * self.size + e] = value,
            Var::Role(r, a, b) => self.role_bits[(r * self.size + a) * self.size + b] = value,
        }
    }

    fn atomic(&self, name: &str, a: usize, b: usize) -> Tv {
        match self.role_ids.get(name) {
            Some(&r) => Tv::of(self.bit(Var::Role(r, a, b))),
            None => Tv::False,
        }
    }

    fn names_chain(&self, names: &[Name], a: usize, b: usize) -> Tv {
        match names {
            [] => Tv::of(Some(a == b)),
            [only] => self.atomic(only, a, b),
            [first, rest @ ..] => (0..self.size).fold(Tv::False, |acc, m| {
                if acc == Tv::True {
                    return acc;
                }
                let head = self.atomic(first, a, m);
                if head == Tv::False {
                    return acc;
                }
                acc.or(head.and(self.names_chain(rest, m, b)))
            }),
        }
    }

    fn chain(&self, parts: &[RoleExpr], a: usize, b: usize) -> Tv {
        match parts {
            [] => Tv::of(Some(a == b)),
            [only] => self.role(only, a, b),
            [first, rest @ ..] => (0..self.size).fold(Tv::False, |acc, m| {
                if acc == Tv::True {
                    return acc;
                }
                let head = self.role(first, a, m);
                if head == Tv::False {
                    return acc;
                }
                acc.or(head.and(self.chain(rest, m, b)))
            }),
        }
    }

    fn role(&self, r: &RoleExpr, a: usize, b: usize) -> Tv {
        match r {
            RoleExpr::Atomic(n) => self.atomic(n, a, b),
            RoleExpr::Inverse(r) => self.role(r, b, a),
            RoleExpr::Chain(ps) => self.chain(ps, a, b),
            RoleExpr::Union(ps) => ps
                .iter()
                .fold(Tv::False, |acc, p| acc.or(self.role(p, a, b))),
            RoleExpr::Intersection(ps) => ps
                .iter()
                .fold(Tv::True, |acc, p| acc.and(self.role(p, a, b))),
            RoleExpr::Dnf(d) => d.disjuncts.iter().fold(Tv::False, |acc, conj| {
                acc.or(conj
                    .iter()
                    .fold(Tv::True, |acc, ch| acc.and(self.names_chain(ch, a, b))))
            }),
        }
    }

    /// Definite and possible counts of qualified successors of `e`.
    fn counts(&self, r: &RoleExpr, c: &Concept, e: usize) -> (usize, usize) {
        let mut definite = 0;
        let mut possible = 0;
        for b in 0..self.size {
            let edge = self.role(r, e, b);
            if edge == Tv::False {
                continue;
            }
            match edge.and(self.concept(c, b)) {
                Tv::True => {
                    definite += 1;
                    possible += 1;
                }
                Tv::Unknown => possible += 1,
                Tv::False => {}
            }
        }
        (definite, possible)
    }

    fn concept(&self, c: &Concept, e: usize) -> Tv {
        match c {
            Concept::Atom(n) => match self.concept_ids.get(&**n) {
                Some(&k) => Tv::of(self.bit(Var::Concept(k, e))),
                None => Tv::False,
            },
            Concept::Top => Tv::True,
            Concept::Bottom => Tv::False,
            Concept::Not(x) => self.concept(x, e).not(),
            Concept::And(a, b) => match self.concept(a, e) {
                Tv::False => Tv::False,
                l => l.and(self.concept(b, e)),
            },
            Concept::Or(a, b) => match self.concept(a, e) {
                Tv::True => Tv::True,
                l => l.or(self.concept(b, e)),
            },
            Concept::Exists(r, x) => at_least(self.counts(r, x, e), &BigUint::from(1u8)),
            Concept::Forall(r, x) => {
                let negated = Concept::Not(x.clone());
                at_most(self.counts(r, &negated, e), &BigUint::default())
            }
            Concept::AtLeast(n, r, x) => at_least(self.counts(r, x, e), n),
            Concept::AtMost(n, r, x) => at_most(self.counts(r, x, e), n),
        }
    }

    fn dfs(&mut self, k: usize) -> Result<bool, OracleError> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(OracleError::ResourceLimit {
                budget: self.budget,
            });
        }
        match self.concept(self.root, 0) {
            Tv::False => return Ok(false),
            Tv::True => return Ok(true),
            Tv::Unknown => {}
        }
        let Some(&var) = self.vars.get(k) else {
            return Ok(false);
        };
        for value in [false, true] {
            self.set(var, Some(value));
            if self.dfs(k + 1)? {
                return Ok(true);
            }
        }
        self.set(var, None);
        Ok(false)
    }

    fn witness(&self, sig: &Signature) -> Interpretation {
        let mut i = Interpretation::new();
        for e in 0..self.size {
            i.add_element(&format!("d{e}"));
        }
        for (name, &k) in &self.concept_ids {
            i.declare_concept(name);
            for e in 0..self.size {
                if self.bit(Var::Concept(k, e)) == Some(true) {
                    i.add_concept_member(name, e);
                }
            }
        }
        for (name, &r) in &self.role_ids {
            i.declare_role(name);
            for a in 0..self.size {
                for b in 0..self.size {
                    if self.bit(Var::Role(r, a, b)) == Some(true) {
                        i.add_role_pair(name, a, b);
                    }
                }
            }
        }
        debug_assert!(sig
            .concepts
            .iter()
            .all(|n| self.concept_ids.contains_key(&**n)));
        i
    }
}

fn at_least((definite, possible): (usize, usize), n: &BigUint) -> Tv {
    match n.to_usize() {
        Some(n) if definite >= n => Tv::True,
        Some(n) if possible >= n => Tv::Unknown,
        _ => Tv::False,
    }
}

fn at_most((definite, possible): (usize, usize), n: &BigUint) -> Tv {
    at_least((definite, possible), &(n + 1u8)).not()
}

/// Searches for an interpretation with at most `max_domain` elements in
/// which `c` is non-empty, using the default step budget.
pub fn enumerate_model(
    c: &Concept,
    signature: &Signature,
    max_domain: usize,
) -> Result<Option<Interpretation>, OracleError> {
    enumerate_model_with_budget(c, signature, max_domain, DEFAULT_STEP_BUDGET)
}

/// As [`enumerate_model`]; the budget is shared by all domain sizes tried.
pub fn enumerate_model_with_budget(
    c: &Concept,
    signature: &Signature,
    max_domain: usize,
    budget: u64,
) -> Result<Option<Interpretation>, OracleError> {
    let mut sig = signature.clone();
    sig.merge(&c.signature());
    let concept_ids: BTreeMap<&str, usize> = sig
        .concepts
        .iter()
        .enumerate()
        .map(|(k, n)| (&**n, k))
        .collect();
    let role_ids: BTreeMap<&str, usize> = sig
        .roles
        .iter()
        .enumerate()
        .map(|(k, n)| (&**n, k))
        .collect();
    let mut steps = 0;
    for size in 1..=max_domain {
        let mut vars = Vec::new();
        for e in 0..size {
            vars.extend((0..concept_ids.len()).map(|k| Var::Concept(k, e)));
            for r in 0..role_ids.len() {
                vars.extend((0..size).map(|b| Var::Role(r, e, b)));
            }
        }
        let mut search = Search {
            root: c,
            size,
            concept_ids: concept_ids.clone(),
            role_ids: role_ids.clone(),
            concept_bits: vec![None; concept_ids.len() * size],
            role_bits: vec![None; role_ids.len() * size * size],
            vars,
            steps,
            budget,
        };
        if search.dfs(0)? {
            search
                .concept_bits
                .iter_mut()
                .for_each(|b| *b = Some(b.unwrap_or(false)));
            search
                .role_bits
                .iter_mut()
                .for_each(|b| *b = Some(b.unwrap_or(false)));
            return Ok(Some(search.witness(&sig)));
        }
        steps = search.steps;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::eval_concept;
    use crate::syntax::parse_concept;

    fn run(text: &str, max: usize) -> Option<Interpretation> {
        let c = parse_concept(text).unwrap();
        let found = enumerate_model(&c, &c.signature(), max).unwrap();
        if let Some(i) = &found {
            assert!(eval_concept(i, &c).contains(&0));
        }
        found
    }

    #[test]
    fn contradiction_has_no_model() {
        assert!(run("(A and not A)", 3).is_none());
    }

    #[test]
    fn pigeonhole() {
        assert!(run("(>= 2 R . Top)", 1).is_none());
        let i = run("(>= 2 R . Top)", 3).unwrap();
        assert_eq!(i.role_ext("R").iter().filter(|(a, _)| *a == 0).count(), 2);
    }

    #[test]
    fn single_atom() {
        let i = run("A", 1).unwrap();
        assert_eq!(i.domain_size(), 1);
        assert_eq!(i.concept_ext("A"), [0].into());
    }

    #[test]
    fn budget_is_reported() {
        let c = parse_concept("((>= 3 R . A) and (all R . (>= 2 S . not A)))").unwrap();
        assert_eq!(
            enumerate_model_with_budget(&c, &c.signature(), 4, 10),
            Err(OracleError::ResourceLimit { budget: 10 })
        );
    }

    #[test]
    fn lexicographic_first_witness_is_minimal() {
        let i = run("(A or B)", 2).unwrap();
        assert_eq!(i.domain_size(), 1);
        assert!(i.concept_ext("A").is_empty());
        assert_eq!(i.concept_ext("B"), [0].into());
    }
}
