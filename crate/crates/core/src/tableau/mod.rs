//! The completion-rule engine, satisfiability search, subsumption and classification.

mod metric;
mod rules;
mod search;

use std::fmt;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::abox::{ABox, AboxError, Individual};
use crate::interp::Interpretation;
use crate::normalize::{canonicalize_roles, nnf};
use crate::par;
use crate::syntax::{classify_fragment, depth, measures, subconcepts, Concept, Fragment};

pub use metric::{compute_metric, compute_metric_uncorrected, Metric};
pub use rules::{
    applicable_rules, apply_rule, apply_rule_limited, RuleAux, RuleInstance, RuleKind,
    DEFAULT_MAX_INDIVIDUALS,
};

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error("concept is outside the decidable fragment ({fragment}): {detail}")]
    Fragment { fragment: Fragment, detail: String },
    #[error("resource limit reached: {0}")]
    ResourceLimit(String),
    #[error("{kind} is not applicable to {concept}({individual})")]
    NotApplicable {
        kind: RuleKind,
        individual: Individual,
        concept: String,
    },
    #[error("metric did not decrease under {rule}: {before} then {after}")]
    MetricViolation {
        rule: String,
        before: Metric,
        after: Metric,
    },
    #[error("size bound violated: {0}")]
    BoundViolation(String),
    #[error("ABox is not complete")]
    NotComplete,
    #[error("ABox contains a clash: {0}")]
    HasClash(String),
    #[error(transparent)]
    Abox(#[from] AboxError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_steps: u64,
    pub max_individuals: usize,
    /// Fail with [`TableauError::MetricViolation`] unless every rule application decreases the metric.
    pub check_metric: bool,
    /// Fail with [`TableauError::BoundViolation`] when out-degree or depth exceed their bounds.
    pub check_bounds: bool,
    pub trace: bool,
    /// Explore don't-know alternatives concurrently. The verdict and model are
    /// the same as in sequential mode unless a resource limit is hit.
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_steps: DEFAULT_MAX_STEPS,
            max_individuals: DEFAULT_MAX_INDIVIDUALS,
            check_metric: false,
            check_bounds: false,
            trace: false,
            parallel: false,
        }
    }
}

impl SearchConfig {
    /// Metric and size-bound checks on.
    pub fn checked() -> Self {
        SearchConfig {
            check_metric: true,
            check_bounds: true,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub branches: u64,
    pub max_individuals: usize,
    pub rule_applications: u64,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub satisfiable: bool,
    /// Canonical model of the complete ABox, present iff satisfiable.
    pub model: Option<Interpretation>,
    pub abox: Option<ABox>,
    pub stats: Stats,
    pub trace: Option<Vec<String>>,
}

/// A concept ready for the tableau, with the bounds derived from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prepared {
    pub concept: Concept,
    /// Role depth of the input; no individual lies deeper.
    pub depth: usize,
    /// Bound on the number of direct successors of any individual.
    pub degree_bound: usize,
}

fn largest_count(c: &Concept) -> usize {
    let counts = subconcepts(c).into_iter().filter_map(|s| match s {
        Concept::AtLeast(n, ..) => Some(n.to_usize().unwrap_or(usize::MAX)),
        Concept::AtMost(n, ..) => Some(n.to_usize().map_or(usize::MAX, |n| n.saturating_add(1))),
        _ => None,
    });
    counts.max().unwrap_or(1).max(1)
}

/// Checks the fragment, then rewrites to negation normal form with canonical roles.
pub fn prepare(c0: &Concept) -> Result<Prepared, TableauError> {
    let fragment = classify_fragment(c0);
    if fragment != Fragment::AlcqComp {
        return Err(TableauError::Fragment {
            fragment,
            detail: "inverse roles or mixed-length role combinations".into(),
        });
    }
    let concept = canonicalize_roles(&nnf(c0)).map_err(|e| TableauError::Fragment {
        fragment: Fragment::Unsupported,
        detail: e.to_string(),
    })?;
    let m0 = depth(&concept);
    let degree_bound = measures(c0)
        .size_c0
        .saturating_mul(largest_count(&concept))
        .saturating_mul(m0);
    Ok(Prepared {
        concept,
        depth: m0,
        degree_bound,
    })
}

pub fn is_satisfiable(c0: &Concept) -> Result<Verdict, TableauError> {
    is_satisfiable_with(c0, &SearchConfig::default())
}

pub fn is_satisfiable_with(c0: &Concept, cfg: &SearchConfig) -> Result<Verdict, TableauError> {
    let prepared = prepare(c0)?;
    let search = search::Search::new(cfg, prepared.depth, prepared.degree_bound);
    let found = search.explore(ABox::initial(prepared.concept), "0".into())?;
    let model = found.as_ref().map(extract_model).transpose()?;
    Ok(Verdict {
        satisfiable: found.is_some(),
        model,
        abox: found,
        stats: search.stats(),
        trace: cfg.trace.then(|| search.take_trace()),
    })
}

/// The canonical interpretation of a complete, clash-free ABox.
pub fn extract_model(a: &ABox) -> Result<Interpretation, TableauError> {
    if let Some(clash) = a.has_clash() {
        return Err(TableauError::HasClash(clash.to_string()));
    }
    if !applicable_rules(a)?.is_empty() {
        return Err(TableauError::NotComplete);
    }
    let mut i = Interpretation::new();
    for x in a.individuals() {
        let name = x.to_string();
        let e = i.add_element(&name);
        i.assign(&name, e);
    }
    let element =
        |i: &Interpretation, x: Individual| i.element(&x.to_string()).expect("individual");
    for (x, c) in a.concept_assertions() {
        match &**c {
            Concept::Atom(n) => {
                let e = element(&i, x);
                i.add_concept_member(n, e);
            }
            Concept::Not(inner) => {
                if let Concept::Atom(n) = &**inner {
                    i.declare_concept(n);
                }
            }
            _ => {}
        }
    }
    for (x, r, y) in a.role_assertions() {
        let (ex, ey) = (element(&i, x), element(&i, y));
        i.add_role_pair(r, ex, ey);
    }
    Ok(i)
}

/// Whether `c` is subsumed by `d`, i.e. `c and not d` is unsatisfiable.
pub fn subsumes(c: &Concept, d: &Concept) -> Result<bool, TableauError> {
    subsumes_with(c, d, &SearchConfig::default())
}

pub fn subsumes_with(c: &Concept, d: &Concept, cfg: &SearchConfig) -> Result<bool, TableauError> {
    let test = Concept::and(c.clone(), Concept::negate(d.clone()));
    Ok(!is_satisfiable_with(&test, cfg)?.satisfiable)
}

/// Satisfiability of many concepts, concurrently when `cfg.parallel` is set.
pub fn satisfiable_batch(
    concepts: &[Concept],
    cfg: &SearchConfig,
) -> Vec<Result<Verdict, TableauError>> {
    par::map(concepts.iter().collect(), cfg.parallel, |c| {
        is_satisfiable_with(c, cfg)
    })
}

/// Named concepts grouped into equivalence classes, with the direct
/// subsumptions between classes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Hierarchy {
    /// Each class lists its names in input order; classes are ordered by their first name's position.
    pub classes: Vec<Vec<String>>,
    /// `(lower, upper)` class indices for every direct subsumption.
    pub edges: Vec<(usize, usize)>,
}

impl fmt::Display for Hierarchy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for class in &self.classes {
            writeln!(f, "class {}", class.join(" "))?;
        }
        for &(lower, upper) in &self.edges {
            writeln!(f, "{} < {}", self.classes[lower][0], self.classes[upper][0])?;
        }
        Ok(())
    }
}

pub fn classify(
    named: &[(String, Concept)],
    cfg: &SearchConfig,
) -> Result<Hierarchy, TableauError> {
    let n = named.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let results = par::map(pairs.clone(), cfg.parallel, |(i, j)| {
        subsumes_with(&named[i].1, &named[j].1, cfg)
    });
    let mut below = vec![vec![false; n]; n];
    for ((i, j), r) in pairs.into_iter().zip(results) {
        below[i][j] = r?;
    }
    for (i, row) in below.iter_mut().enumerate() {
        row[i] = true;
    }

    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if class_of[i] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (i..n).filter(|&j| below[i][j] && below[j][i]).collect();
        for &j in &members {
            class_of[j] = classes.len();
        }
        classes.push(members);
    }
    let rep = |k: usize| classes[k][0];
    let strictly = |a: usize, b: usize| a != b && below[rep(a)][rep(b)];
    let k = classes.len();
    let mut edges = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if strictly(a, b)
                && !(0..k).any(|c| c != a && c != b && strictly(a, c) && strictly(c, b))
            {
                edges.push((a, b));
            }
        }
    }
    let classes = classes
        .into_iter()
        .map(|members| members.into_iter().map(|i| named[i].0.clone()).collect())
        .collect();
    Ok(Hierarchy { classes, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{check_abox_model, eval_concept};
    use crate::syntax::parse_concept;

    fn p(s: &str) -> Concept {
        parse_concept(s).unwrap()
    }

    fn sat(s: &str) -> bool {
        let v = is_satisfiable_with(&p(s), &SearchConfig::checked()).unwrap();
        if let (Some(m), Some(a)) = (&v.model, &v.abox) {
            assert!(check_abox_model(m, a));
            assert!(eval_concept(m, &p(s)).contains(&m.element("x0").unwrap()));
        }
        v.satisfiable
    }

    #[test]
    fn basic_verdicts() {
        assert!(!sat("(A and not A)"));
        assert!(sat("(A or not A)"));
        assert!(!sat("((>= 2 R . A) and (<= 1 R . Top))"));
        assert!(sat("((>= 2 R . A) and (<= 2 R . Top))"));
        assert!(!sat("((some R . A) and (all R . not A))"));
        assert!(!sat("(>= 1 R . Bottom)"));
        assert!(!sat("not (>= 0 R . A)"));
    }

    #[test]
    fn confluent_model() {
        let v = is_satisfiable(&p(
            "(((>= 2 R . Top) and (<= 0 R . (<= 0 S . Top))) and (<= 1 (R o S) . Top))",
        ))
        .unwrap();
        assert!(v.satisfiable);
        assert_eq!(v.model.unwrap().domain_size(), 4);
    }

    #[test]
    fn extracted_model_of_geq() {
        let v = is_satisfiable(&p("(>= 2 R . A)")).unwrap();
        let m = v.model.unwrap();
        assert_eq!(m.domain_size(), 3);
        assert_eq!(m.role_ext("R"), [(0, 1), (0, 2)].into());
        assert_eq!(m.concept_ext("A"), [1, 2].into());
    }

    #[test]
    fn extraction_errors() {
        let mut a = ABox::initial(p("A"));
        a.assert_concept(Individual::ROOT, p("not A"));
        assert!(matches!(extract_model(&a), Err(TableauError::HasClash(_))));
        let b = ABox::initial(p("(A and B)"));
        assert_eq!(extract_model(&b), Err(TableauError::NotComplete));
        let c = ABox::initial(p("A"));
        assert_eq!(extract_model(&c).unwrap().concept_ext("A"), [0].into());
    }

    #[test]
    fn fragment_is_enforced() {
        assert!(matches!(
            is_satisfiable(&p("(some inv(R) . A)")),
            Err(TableauError::Fragment { .. })
        ));
    }

    #[test]
    fn step_limit() {
        let cfg = SearchConfig {
            max_steps: 2,
            ..Default::default()
        };
        assert!(matches!(
            is_satisfiable_with(&p("((A and B) and (C and D))"), &cfg),
            Err(TableauError::ResourceLimit(_))
        ));
    }

    #[test]
    fn subsumption_examples() {
        assert!(subsumes(&p("(A and B)"), &p("A")).unwrap());
        assert!(subsumes(&p("(>= 3 R . C)"), &p("(>= 2 R . C)")).unwrap());
        assert!(!subsumes(&p("A"), &p("B")).unwrap());
    }

    #[test]
    fn classification() {
        let named = |v: &[(&str, &str)]| -> Vec<(String, Concept)> {
            v.iter().map(|(n, c)| (n.to_string(), p(c))).collect()
        };
        let h = classify(
            &named(&[("X", "(A and B)"), ("Y", "A")]),
            &SearchConfig::default(),
        )
        .unwrap();
        assert_eq!(
            h.classes,
            vec![vec!["X".to_string()], vec!["Y".to_string()]]
        );
        assert_eq!(h.edges, vec![(0, 1)]);
        let h = classify(&named(&[("X", "A"), ("Y", "A")]), &SearchConfig::default()).unwrap();
        assert_eq!(h.classes, vec![vec!["X".to_string(), "Y".to_string()]]);
        assert!(h.edges.is_empty());
        assert_eq!(
            classify(&[], &SearchConfig::default()).unwrap(),
            Hierarchy::default()
        );
        let h = classify(
            &named(&[("X", "((A and B) and C)"), ("Y", "(A and B)"), ("Z", "A")]),
            &SearchConfig::default(),
        )
        .unwrap();
        assert_eq!(h.edges, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn parallel_search_agrees() {
        let c = p("(((A or B) or C) and ((not A and not B) or (>= 2 R . (D or E))))");
        let seq = is_satisfiable(&c).unwrap();
        let cfg = SearchConfig {
            parallel: true,
            ..Default::default()
        };
        let parallel = is_satisfiable_with(&c, &cfg).unwrap();
        assert_eq!(seq.satisfiable, parallel.satisfiable);
        assert_eq!(seq.model, parallel.model);
    }
}
