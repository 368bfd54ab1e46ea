//! The termination metric: one triple per role level, compared lexicographically.
//!
//! Per level `l` the triple holds the number of individuals at `l`, the
//! weight of pending Boolean and choice work at `l`, and the total at-least
//! deficit of constraints on individuals at `l`.
//!
//! Pending choice work is counted on the level of the successor the choice
//! would label: each distinct pair `(q, y)` where `y` is a successor of some
//! number restriction with qualifier `q` and neither `q(y)` nor `~q(y)` is
//! asserted contributes `1 + |q|`, where `|q|` is the and/or size.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use super::rules::choose_pending;
use crate::abox::{ABox, Individual};
use crate::syntax::{and_or_size, Concept};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Metric {
    /// `(individuals, boolean_and_choice_weight, at_least_deficit)` per level, from level 0.
    pub levels: Vec<(usize, usize, usize)>,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (a, b, c)) in self.levels.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "({a},{b},{c})")?;
        }
        Ok(())
    }
}

fn boolean_weight(a: &ABox, x: Individual, c: &Concept) -> usize {
    match c {
        Concept::And(l, r) if !a.has_concept(x, l) || !a.has_concept(x, r) => and_or_size(c),
        Concept::Or(l, r) if !a.has_concept(x, l) && !a.has_concept(x, r) => and_or_size(c),
        _ => 0,
    }
}

fn deficit(a: &ABox, x: Individual, c: &Concept) -> usize {
    match c {
        Concept::AtLeast(n, r, q) => {
            let (s, _) = a.max_distinct_qualified(x, r, q);
            n.to_usize().map_or(usize::MAX, |n| n.saturating_sub(s))
        }
        _ => 0,
    }
}

fn compute(a: &ABox, m0: usize, with_choices: bool) -> Metric {
    let width = m0.max(a.max_level()) + 1;
    let mut levels = vec![(0usize, 0usize, 0usize); width];
    let mut pending: BTreeSet<(Arc<Concept>, Individual)> = BTreeSet::new();
    for x in a.individuals() {
        let l = a.level(x).unwrap_or(0);
        levels[l].0 += 1;
        for c in a.label(x) {
            levels[l].1 = levels[l].1.saturating_add(boolean_weight(a, x, c));
            levels[l].2 = levels[l].2.saturating_add(deficit(a, x, c));
            if let (true, Concept::AtLeast(_, r, q) | Concept::AtMost(_, r, q)) =
                (with_choices, &**c)
            {
                for y in a.successors(x, r) {
                    if choose_pending(a, y, q) {
                        pending.insert((q.clone(), y));
                    }
                }
            }
        }
    }
    for (q, y) in pending {
        let l = a.level(y).unwrap_or(0);
        levels[l].1 = levels[l].1.saturating_add(1 + and_or_size(&q));
    }
    Metric { levels }
}

/// The termination metric of `a` for a root concept of role depth `m0`.
pub fn compute_metric(a: &ABox, m0: usize) -> Metric {
    compute(a, m0, true)
}

/// The metric without the pending-choice term.
pub fn compute_metric_uncorrected(a: &ABox, m0: usize) -> Metric {
    compute(a, m0, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::nnf;
    use crate::syntax::parse_concept;
    use crate::tableau::{applicable_rules, apply_rule, RuleKind};

    fn p(s: &str) -> Concept {
        nnf(&parse_concept(s).unwrap())
    }

    #[test]
    fn single_conjunction() {
        let a = ABox::initial(p("(A and B)"));
        assert_eq!(compute_metric(&a, 0).levels, vec![(1, 1, 0)]);
        let rules = applicable_rules(&a).unwrap();
        let b = apply_rule(&a, &rules[0]).unwrap().remove(0);
        assert_eq!(compute_metric(&b, 0).levels, vec![(1, 0, 0)]);
    }

    #[test]
    fn at_least_deficit() {
        let a = ABox::initial(p("(>= 2 R . A)"));
        assert_eq!(compute_metric(&a, 1).levels, vec![(1, 0, 2), (0, 0, 0)]);
    }

    fn run_until_choose(a: ABox) -> (ABox, crate::tableau::RuleInstance) {
        let mut a = a;
        loop {
            let rules = applicable_rules(&a).unwrap();
            if let Some(ri) = rules.iter().find(|r| r.kind == RuleKind::Choose) {
                return (a, ri.clone());
            }
            a = apply_rule(&a, &rules[0]).unwrap().remove(0);
        }
    }

    #[test]
    fn choice_on_compound_qualifier_needs_the_correction() {
        let a = ABox::initial(p("((<= 1 R . (A and B)) and (>= 1 R . Top))"));
        let (before, choose) = run_until_choose(a);
        let after = apply_rule(&before, &choose).unwrap().remove(0);
        assert!(
            compute_metric_uncorrected(&after, 1) > compute_metric_uncorrected(&before, 1),
            "the uncorrected metric grows here"
        );
        for branch in apply_rule(&before, &choose).unwrap() {
            assert!(compute_metric(&branch, 1) < compute_metric(&before, 1));
        }
    }

    #[test]
    fn display() {
        let m = Metric {
            levels: vec![(1, 2, 3), (0, 0, 1)],
        };
        assert_eq!(m.to_string(), "(1,2,3) (0,0,1)");
    }
}
