//! Depth-first search over don't-know alternatives.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use super::metric::compute_metric;
use super::rules::{applicable_rules, apply_rule_limited, RuleAux, RuleInstance};
use super::{SearchConfig, Stats, TableauError};
use crate::abox::ABox;
use crate::par;

pub(crate) struct Search<'a> {
    pub cfg: &'a SearchConfig,
    pub depth_bound: usize,
    pub degree_bound: usize,
    steps: AtomicU64,
    branches: AtomicU64,
    max_individuals: AtomicUsize,
    trace: Mutex<Vec<String>>,
}

/// The rule to apply next: lowest scheduling class, then lowest focus level.
fn select<'r>(a: &ABox, rules: &'r [RuleInstance]) -> Option<&'r RuleInstance> {
    rules
        .iter()
        .enumerate()
        .min_by_key(|(k, r)| (r.kind.priority(), a.level(r.individual), *k))
        .map(|(_, r)| r)
}

fn assertion_lines(a: &ABox) -> BTreeSet<String> {
    a.to_string().lines().map(String::from).collect()
}

fn delta(before: &ABox, after: &ABox, ri: &RuleInstance, alternative: usize) -> String {
    let old = assertion_lines(before);
    let added: Vec<String> = after
        .to_string()
        .lines()
        .filter(|l| !old.contains(*l))
        .map(String::from)
        .collect();
    let mut out = String::new();
    if let RuleAux::Merges(pairs) = &ri.aux {
        let (from, into) = pairs[alternative];
        out.push_str(&format!("merge {from} into {into}"));
        if !added.is_empty() {
            out.push_str("; ");
        }
    }
    out.push_str(&added.join(", "));
    out
}

impl<'a> Search<'a> {
    pub fn new(cfg: &'a SearchConfig, depth_bound: usize, degree_bound: usize) -> Self {
        Search {
            cfg,
            depth_bound,
            degree_bound,
            steps: AtomicU64::new(0),
            branches: AtomicU64::new(0),
            max_individuals: AtomicUsize::new(0),
            trace: Mutex::new(Vec::new()),
        }
    }

    pub fn stats(&self) -> Stats {
        Stats {
            branches: self.branches.load(Ordering::Relaxed),
            max_individuals: self.max_individuals.load(Ordering::Relaxed),
            rule_applications: self.steps.load(Ordering::Relaxed),
        }
    }

    pub fn take_trace(&self) -> Vec<String> {
        std::mem::take(&mut *self.trace.lock().expect("trace lock"))
    }

    fn check_bounds(&self, a: &ABox) -> Result<(), TableauError> {
        for x in a.individuals() {
            let level = a.level(x).unwrap_or(0);
            if level > self.depth_bound {
                return Err(TableauError::BoundViolation(format!(
                    "{x} has level {level}, above the role depth {}",
                    self.depth_bound
                )));
            }
            let degree = a.out_degree(x);
            if degree > self.degree_bound {
                return Err(TableauError::BoundViolation(format!(
                    "{x} has {degree} successors, above the bound {}",
                    self.degree_bound
                )));
            }
        }
        Ok(())
    }

    fn step(&self, a: &ABox, ri: &RuleInstance, branch: &str) -> Result<Vec<ABox>, TableauError> {
        let done = self.steps.fetch_add(1, Ordering::Relaxed) + 1;
        if done > self.cfg.max_steps {
            return Err(TableauError::ResourceLimit(format!(
                "more than {} rule applications",
                self.cfg.max_steps
            )));
        }
        let out = apply_rule_limited(a, ri, self.cfg.max_individuals)?;
        let before = self
            .cfg
            .check_metric
            .then(|| compute_metric(a, self.depth_bound));
        for (k, b) in out.iter().enumerate() {
            self.max_individuals
                .fetch_max(b.individual_count(), Ordering::Relaxed);
            if let Some(before) = &before {
                let after = compute_metric(b, self.depth_bound);
                if after >= before.clone() {
                    return Err(TableauError::MetricViolation {
                        rule: ri.to_string(),
                        before: before.clone(),
                        after,
                    });
                }
            }
            if self.cfg.check_bounds {
                self.check_bounds(b)?;
            }
            if self.cfg.trace {
                let id = if out.len() == 1 {
                    branch.to_string()
                } else {
                    format!("{branch}.{}", k + 1)
                };
                let line = format!("{id} {ri} -> {}", delta(a, b, ri, k));
                self.trace.lock().expect("trace lock").push(line);
            }
        }
        Ok(out)
    }

    /// The first complete clash-free ABox reachable from `a`, in branch order.
    pub fn explore(&self, mut a: ABox, branch: String) -> Result<Option<ABox>, TableauError> {
        self.branches.fetch_add(1, Ordering::Relaxed);
        loop {
            if a.has_clash().is_some() {
                return Ok(None);
            }
            let rules = applicable_rules(&a)?;
            let Some(ri) = select(&a, &rules) else {
                return Ok(Some(a));
            };
            let mut alternatives = self.step(&a, ri, &branch)?;
            if alternatives.len() == 1 {
                a = alternatives.pop().expect("one alternative");
                continue;
            }
            let labelled: Vec<(String, ABox)> = alternatives
                .into_iter()
                .enumerate()
                .map(|(k, b)| (format!("{branch}.{}", k + 1), b))
                .collect();
            let found = par::find_map_first(labelled, self.cfg.parallel, |(id, b)| {
                self.explore(b, id).transpose()
            });
            return found.transpose();
        }
    }
}
