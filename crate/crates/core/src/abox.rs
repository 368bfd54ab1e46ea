//! ABoxes: concept, role and inequality assertions over generated individuals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::normalize::role_dnf;
use crate::syntax::{Concept, Name, RoleChain, RoleDnf, RoleExpr};

/// An ABox individual. `Individual(0)` is the root `x0`; the others print as `v<k>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Individual(pub u32);

impl Individual {
    pub const ROOT: Individual = Individual(0);

    pub fn is_root(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Individual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_root() {
            write!(f, "x0")
        } else {
            write!(f, "v{}", self.0)
        }
    }
}

impl FromStr for Individual {
    type Err = AboxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AboxError::BadIndividualName(s.to_string());
        match s {
            "x0" => Ok(Individual::ROOT),
            _ => {
                let n: u32 = s
                    .strip_prefix('v')
                    .ok_or_else(bad)?
                    .parse()
                    .map_err(|_| bad())?;
                if n == 0 {
                    return Err(bad());
                }
                Ok(Individual(n))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AboxError {
    #[error("cannot merge {from} into {into}: {reason}")]
    IllegalMerge {
        from: Individual,
        into: Individual,
        reason: &'static str,
    },
    #[error("not an individual name: {0:?}")]
    BadIndividualName(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Clash {
    Atomic {
        individual: Individual,
        name: Name,
    },
    Bottom {
        individual: Individual,
    },
    AtMost {
        individual: Individual,
        concept: Arc<Concept>,
        distinct: usize,
    },
}

impl fmt::Display for Clash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clash::Atomic { individual, name } => {
                write!(f, "{name}({individual}) and not {name}({individual})")
            }
            Clash::Bottom { individual } => write!(f, "Bottom({individual})"),
            Clash::AtMost {
                individual,
                concept,
                distinct,
            } => write!(
                f,
                "{concept}({individual}) with {distinct} distinct successors"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ABox {
    labels: BTreeMap<Individual, BTreeSet<Arc<Concept>>>,
    edges: BTreeMap<Individual, BTreeSet<(Name, Individual)>>,
    inequalities: BTreeSet<(Individual, Individual)>,
    levels: BTreeMap<Individual, usize>,
    next_fresh: u32,
}

fn ordered(a: Individual, b: Individual) -> (Individual, Individual) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl ABox {
    pub fn empty() -> Self {
        ABox {
            next_fresh: 1,
            ..Default::default()
        }
    }

    /// `{c0(x0)}`.
    pub fn initial(c0: Concept) -> Self {
        let mut a = ABox::empty();
        a.add_individual(Individual::ROOT, 0);
        a.assert_concept(Individual::ROOT, c0);
        a
    }

    pub fn add_individual(&mut self, x: Individual, level: usize) {
        self.levels.entry(x).or_insert(level);
        self.labels.entry(x).or_default();
        self.next_fresh = self.next_fresh.max(x.0 + 1);
    }

    /// A new individual with the next unused counter value.
    pub fn fresh(&mut self, level: usize) -> Individual {
        let x = Individual(self.next_fresh.max(1));
        self.add_individual(x, level);
        x
    }

    /// Returns whether the assertion is new. `Top` is never stored.
    pub fn assert_concept(&mut self, x: Individual, c: Concept) -> bool {
        self.assert_concept_arc(x, Arc::new(c))
    }

    pub fn assert_concept_arc(&mut self, x: Individual, c: Arc<Concept>) -> bool {
        if !self.levels.contains_key(&x) {
            self.add_individual(x, 0);
        }
        if *c == Concept::Top {
            return false;
        }
        self.labels.entry(x).or_default().insert(c)
    }

    /// Adds `role(from, to)`; an unseen `to` gets the level after `from`.
    pub fn assert_role(&mut self, role: &str, from: Individual, to: Individual) -> bool {
        if !self.levels.contains_key(&from) {
            self.add_individual(from, 0);
        }
        let level = self.levels[&from] + 1;
        if !self.levels.contains_key(&to) {
            self.add_individual(to, level);
        }
        self.edges
            .entry(from)
            .or_default()
            .insert((role.into(), to))
    }

    pub fn assert_distinct(&mut self, a: Individual, b: Individual) -> bool {
        assert_ne!(a, b, "inequalities are irreflexive");
        self.inequalities.insert(ordered(a, b))
    }

    pub fn individuals(&self) -> impl Iterator<Item = Individual> + '_ {
        self.levels.keys().copied()
    }

    pub fn individual_count(&self) -> usize {
        self.levels.len()
    }

    pub fn contains(&self, x: Individual) -> bool {
        self.levels.contains_key(&x)
    }

    pub fn level(&self, x: Individual) -> Option<usize> {
        self.levels.get(&x).copied()
    }

    pub fn max_level(&self) -> usize {
        self.levels.values().copied().max().unwrap_or(0)
    }

    pub fn next_fresh(&self) -> u32 {
        self.next_fresh
    }

    pub fn has_concept(&self, x: Individual, c: &Concept) -> bool {
        *c == Concept::Top || self.labels.get(&x).is_some_and(|l| l.contains(c))
    }

    pub fn label(&self, x: Individual) -> impl Iterator<Item = &Arc<Concept>> {
        self.labels.get(&x).into_iter().flatten()
    }

    pub fn concept_assertions(&self) -> impl Iterator<Item = (Individual, &Arc<Concept>)> {
        self.labels
            .iter()
            .flat_map(|(&x, l)| l.iter().map(move |c| (x, c)))
    }

    pub fn role_assertions(&self) -> impl Iterator<Item = (Individual, &Name, Individual)> {
        self.edges
            .iter()
            .flat_map(|(&x, es)| es.iter().map(move |(r, y)| (x, r, *y)))
    }

    pub fn inequalities(&self) -> impl Iterator<Item = (Individual, Individual)> + '_ {
        self.inequalities.iter().copied()
    }

    pub fn are_distinct(&self, a: Individual, b: Individual) -> bool {
        self.inequalities.contains(&ordered(a, b))
    }

    pub fn assertion_count(&self) -> usize {
        self.labels.values().map(BTreeSet::len).sum::<usize>()
            + self.edges.values().map(BTreeSet::len).sum::<usize>()
            + self.inequalities.len()
    }

    /// Distinct direct successors of `x`, over any role.
    pub fn out_degree(&self, x: Individual) -> usize {
        self.edges
            .get(&x)
            .map(|es| es.iter().map(|(_, y)| *y).collect::<BTreeSet<_>>().len())
            .unwrap_or(0)
    }

    fn direct(&self, x: Individual, role: &str) -> impl Iterator<Item = Individual> + '_ {
        let role: Name = role.into();
        self.edges
            .get(&x)
            .into_iter()
            .flatten()
            .filter(move |(r, _)| *r == role)
            .map(|(_, y)| *y)
    }

    pub fn chain_successors(&self, x: Individual, chain: &[Name]) -> BTreeSet<Individual> {
        let mut frontier: BTreeSet<Individual> = [x].into();
        for role in chain {
            frontier = frontier
                .iter()
                .flat_map(|&u| self.direct(u, role))
                .collect();
            if frontier.is_empty() {
                break;
            }
        }
        frontier
    }

    /// Successors through a DNF role: some disjunct whose every conjunct chain
    /// reaches the same endpoint.
    pub fn complex_successors(&self, x: Individual, r: &RoleDnf) -> BTreeSet<Individual> {
        let mut out = BTreeSet::new();
        for conjuncts in &r.disjuncts {
            let mut common: Option<BTreeSet<Individual>> = None;
            for chain in conjuncts {
                let reach = self.chain_successors(x, chain);
                common = Some(match common {
                    None => reach,
                    Some(c) => c.intersection(&reach).copied().collect(),
                });
            }
            out.extend(common.unwrap_or_default());
        }
        out
    }

    /// Successors through any role expression of the tableau fragment.
    /// Roles outside it (inverses, mixed lengths) have no successors.
    pub fn successors(&self, x: Individual, r: &RoleExpr) -> BTreeSet<Individual> {
        match r {
            RoleExpr::Atomic(n) => self.direct(x, n).collect(),
            RoleExpr::Dnf(d) => self.complex_successors(x, d),
            other => match as_name_chain(other) {
                Some(chain) => self.chain_successors(x, &chain),
                None => role_dnf(other)
                    .map(|d| self.complex_successors(x, &d))
                    .unwrap_or_default(),
            },
        }
    }

    pub fn qualified_successors(
        &self,
        x: Individual,
        r: &RoleExpr,
        c: &Concept,
    ) -> Vec<Individual> {
        self.successors(x, r)
            .into_iter()
            .filter(|&y| self.has_concept(y, c))
            .collect()
    }

    /// The largest set of `c`-asserted `r`-successors of `x` that are pairwise asserted distinct.
    pub fn max_distinct_qualified(
        &self,
        x: Individual,
        r: &RoleExpr,
        c: &Concept,
    ) -> (usize, BTreeSet<Individual>) {
        let candidates = self.qualified_successors(x, r, c);
        let clique = max_clique(&candidates, |a, b| self.are_distinct(a, b));
        (clique.len(), clique.into_iter().collect())
    }

    pub fn has_clash(&self) -> Option<Clash> {
        for (&x, label) in &self.labels {
            for c in label {
                match &**c {
                    Concept::Bottom => return Some(Clash::Bottom { individual: x }),
                    Concept::Not(inner) if matches!(**inner, Concept::Atom(_)) => {
                        if label.contains(inner) {
                            let Concept::Atom(name) = &**inner else {
                                unreachable!()
                            };
                            return Some(Clash::Atomic {
                                individual: x,
                                name: name.clone(),
                            });
                        }
                    }
                    Concept::AtMost(n, r, q) => {
                        let (distinct, _) = self.max_distinct_qualified(x, r, q);
                        if n.to_usize().is_some_and(|n| distinct > n) {
                            return Some(Clash::AtMost {
                                individual: x,
                                concept: c.clone(),
                                distinct,
                            });
                        }
                    }
                    _ => {}
                }
            }
        }
        None
    }

    /// Replaces `from` by `into` everywhere and removes `from`.
    pub fn merge(&self, from: Individual, into: Individual) -> Result<ABox, AboxError> {
        let illegal = |reason| AboxError::IllegalMerge { from, into, reason };
        if from == into {
            return Err(illegal("an individual cannot be merged with itself"));
        }
        if from.is_root() || into.is_root() {
            return Err(illegal("the root is never merged"));
        }
        let (Some(lf), Some(li)) = (self.level(from), self.level(into)) else {
            return Err(illegal("unknown individual"));
        };
        if lf != li {
            return Err(illegal("levels differ"));
        }
        if self.are_distinct(from, into) {
            return Err(illegal("the individuals are asserted distinct"));
        }
        let rename = |x: Individual| if x == from { into } else { x };
        let mut out = self.clone();
        out.levels.remove(&from);
        let moved = out.labels.remove(&from).unwrap_or_default();
        out.labels.entry(into).or_default().extend(moved);
        let old_edges = std::mem::take(&mut out.edges);
        for (x, es) in old_edges {
            let target = out.edges.entry(rename(x)).or_default();
            target.extend(es.into_iter().map(|(r, y)| (r, rename(y))));
        }
        out.inequalities = self
            .inequalities
            .iter()
            .map(|&(a, b)| ordered(rename(a), rename(b)))
            .collect();
        Ok(out)
    }
}

/// Role expressions that denote a plain chain of atomic roles.
pub(crate) fn as_name_chain(r: &RoleExpr) -> Option<RoleChain> {
    match r {
        RoleExpr::Atomic(n) => Some(vec![n.clone()]),
        RoleExpr::Chain(ps) => {
            let mut out = Vec::new();
            for p in ps {
                out.extend(as_name_chain(p)?);
            }
            Some(out)
        }
        RoleExpr::Dnf(d) => d.as_single_chain().cloned(),
        _ => None,
    }
}

/// Exact maximum clique by branch and bound.
pub(crate) fn max_clique<T: Copy>(items: &[T], adjacent: impl Fn(T, T) -> bool) -> Vec<T> {
    let n = items.len();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i != j && adjacent(items[i], items[j]))
                .collect()
        })
        .collect();

    fn expand(
        current: &mut Vec<usize>,
        candidates: &[usize],
        adj: &[Vec<bool>],
        best: &mut Vec<usize>,
    ) {
        if current.len() > best.len() {
            *best = current.clone();
        }
        for (k, &v) in candidates.iter().enumerate() {
            if current.len() + candidates.len() - k <= best.len() {
                return;
            }
            let next: Vec<usize> = candidates[k + 1..]
                .iter()
                .copied()
                .filter(|&u| adj[v][u])
                .collect();
            current.push(v);
            expand(current, &next, adj, best);
            current.pop();
        }
    }

    let mut best = Vec::new();
    let all: Vec<usize> = (0..n).collect();
    expand(&mut Vec::new(), &all, &adj, &mut best);
    best.into_iter().map(|i| items[i]).collect()
}

impl fmt::Display for ABox {
    /// One assertion per line: concept assertions, then role assertions, then inequalities.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, c) in self.concept_assertions() {
            writeln!(f, "{c}({x})")?;
        }
        for (x, r, y) in self.role_assertions() {
            writeln!(f, "{r}({x},{y})")?;
        }
        for (a, b) in self.inequalities() {
            writeln!(f, "{a} != {b}")?;
        }
        Ok(())
    }
}
