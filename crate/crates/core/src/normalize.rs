//! Rewriting systems: negation normal form with number restrictions only,
//! complement, inverse pushing, value-restriction unfolding and role DNF.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::syntax::{Concept, RoleChain, RoleDnf, RoleExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoleDnfError {
    #[error("role chains of different lengths in a Boolean role combination")]
    MixedLength,
    #[error("inverse role inside a Boolean role combination")]
    InverseInDnf,
    #[error("intersection under composition cannot be put in DNF")]
    IntersectionUnderComposition,
}

/// Negation normal form where `some`/`all` are replaced by `>= 1` / `<= 0`
/// restrictions and negation only occurs in front of concept names.
pub fn nnf(c: &Concept) -> Concept {
    match c {
        Concept::Atom(_) | Concept::Top | Concept::Bottom => c.clone(),
        Concept::Not(inner) => nnf_negated(inner),
        Concept::And(a, b) => Concept::and(nnf(a), nnf(b)),
        Concept::Or(a, b) => Concept::or(nnf(a), nnf(b)),
        Concept::Exists(r, q) => Concept::AtLeast(BigUint::one(), r.clone(), Arc::new(nnf(q))),
        Concept::Forall(r, q) => {
            Concept::AtMost(BigUint::zero(), r.clone(), Arc::new(nnf_negated(q)))
        }
        Concept::AtLeast(n, r, q) => Concept::AtLeast(n.clone(), r.clone(), Arc::new(nnf(q))),
        Concept::AtMost(n, r, q) => Concept::AtMost(n.clone(), r.clone(), Arc::new(nnf(q))),
    }
}

/// NNF of `not c`.
fn nnf_negated(c: &Concept) -> Concept {
    match c {
        Concept::Atom(_) => Concept::Not(Arc::new(c.clone())),
        Concept::Top => Concept::Bottom,
        Concept::Bottom => Concept::Top,
        Concept::Not(inner) => nnf(inner),
        Concept::And(a, b) => Concept::or(nnf_negated(a), nnf_negated(b)),
        Concept::Or(a, b) => Concept::and(nnf_negated(a), nnf_negated(b)),
        // not some R.C = all R.not C = <= 0 R.C
        Concept::Exists(r, q) => Concept::AtMost(BigUint::zero(), r.clone(), Arc::new(nnf(q))),
        // not all R.C = some R.not C = >= 1 R.not C
        Concept::Forall(r, q) => {
            Concept::AtLeast(BigUint::one(), r.clone(), Arc::new(nnf_negated(q)))
        }
        Concept::AtLeast(n, r, q) => {
            if n.is_zero() {
                Concept::Bottom
            } else {
                Concept::AtMost(n - 1u8, r.clone(), Arc::new(nnf(q)))
            }
        }
        Concept::AtMost(n, r, q) => Concept::AtLeast(n + 1u8, r.clone(), Arc::new(nnf(q))),
    }
}

/// `~c`: the NNF of `not c`.
pub fn complement_nnf(c: &Concept) -> Concept {
    nnf_negated(c)
}

/// Rewrites a role so that inverses apply to atomic roles only, using
/// `inv(R o S) = inv(S) o inv(R)` and `inv(inv(R)) = R`.
pub fn push_inverses(r: &RoleExpr) -> RoleExpr {
    push(r, false)
}

fn push(r: &RoleExpr, inverted: bool) -> RoleExpr {
    match r {
        RoleExpr::Atomic(_) if inverted => RoleExpr::Inverse(Box::new(r.clone())),
        RoleExpr::Atomic(_) => r.clone(),
        RoleExpr::Inverse(inner) => push(inner, !inverted),
        RoleExpr::Chain(ps) => {
            let mut parts: Vec<RoleExpr> = ps.iter().map(|p| push(p, inverted)).collect();
            if inverted {
                parts.reverse();
            }
            RoleExpr::chain(parts)
        }
        RoleExpr::Union(ps) => RoleExpr::Union(ps.iter().map(|p| push(p, inverted)).collect()),
        RoleExpr::Intersection(ps) => {
            RoleExpr::Intersection(ps.iter().map(|p| push(p, inverted)).collect())
        }
        RoleExpr::Dnf(_) if !inverted => r.clone(),
        RoleExpr::Dnf(d) => push(&d.to_surface(), true),
    }
}

/// Replaces composition under `some`/`all` by nested restrictions over the
/// chain's components. Number restrictions keep their roles.
pub fn unfold_value_restrictions(c: &Concept) -> Concept {
    match c {
        Concept::Atom(_) | Concept::Top | Concept::Bottom => c.clone(),
        Concept::Not(x) => Concept::negate(unfold_value_restrictions(x)),
        Concept::And(a, b) => {
            Concept::and(unfold_value_restrictions(a), unfold_value_restrictions(b))
        }
        Concept::Or(a, b) => {
            Concept::or(unfold_value_restrictions(a), unfold_value_restrictions(b))
        }
        Concept::Exists(r, q) => unfold_chain(r, unfold_value_restrictions(q), Concept::exists),
        Concept::Forall(r, q) => unfold_chain(r, unfold_value_restrictions(q), Concept::forall),
        Concept::AtLeast(n, r, q) => {
            Concept::AtLeast(n.clone(), r.clone(), Arc::new(unfold_value_restrictions(q)))
        }
        Concept::AtMost(n, r, q) => {
            Concept::AtMost(n.clone(), r.clone(), Arc::new(unfold_value_restrictions(q)))
        }
    }
}

fn unfold_chain(r: &RoleExpr, body: Concept, wrap: fn(RoleExpr, Concept) -> Concept) -> Concept {
    match push_inverses(r) {
        RoleExpr::Chain(parts) => parts.into_iter().rev().fold(body, |acc, p| wrap(p, acc)),
        other => wrap(other, body),
    }
}

/// Applies [`push_inverses`] to every role of a concept, including number restrictions.
pub fn push_inverses_in_concept(c: &Concept) -> Concept {
    map_roles(c, &push_inverses)
}

fn map_roles(c: &Concept, f: &dyn Fn(&RoleExpr) -> RoleExpr) -> Concept {
    match c {
        Concept::Atom(_) | Concept::Top | Concept::Bottom => c.clone(),
        Concept::Not(x) => Concept::negate(map_roles(x, f)),
        Concept::And(a, b) => Concept::and(map_roles(a, f), map_roles(b, f)),
        Concept::Or(a, b) => Concept::or(map_roles(a, f), map_roles(b, f)),
        Concept::Exists(r, q) => Concept::Exists(f(r), Arc::new(map_roles(q, f))),
        Concept::Forall(r, q) => Concept::Forall(f(r), Arc::new(map_roles(q, f))),
        Concept::AtLeast(n, r, q) => Concept::AtLeast(n.clone(), f(r), Arc::new(map_roles(q, f))),
        Concept::AtMost(n, r, q) => Concept::AtMost(n.clone(), f(r), Arc::new(map_roles(q, f))),
    }
}

/// Puts a Boolean combination of atomic-role chains into DNF by distributivity.
/// Composition distributes over union; all resulting chains must share one length.
pub fn role_dnf(r: &RoleExpr) -> Result<RoleDnf, RoleDnfError> {
    let disjuncts = dnf_disjuncts(r)?;
    let dnf = RoleDnf::new(disjuncts);
    match dnf.chain_length() {
        Some(_) => Ok(dnf),
        None => Err(RoleDnfError::MixedLength),
    }
}

fn push_unique<T: PartialEq>(v: &mut Vec<T>, x: T) {
    if !v.contains(&x) {
        v.push(x);
    }
}

fn dnf_disjuncts(r: &RoleExpr) -> Result<Vec<Vec<RoleChain>>, RoleDnfError> {
    Ok(match r {
        RoleExpr::Atomic(n) => vec![vec![vec![n.clone()]]],
        RoleExpr::Inverse(_) => return Err(RoleDnfError::InverseInDnf),
        RoleExpr::Dnf(d) => d.disjuncts.clone(),
        RoleExpr::Chain(ps) => {
            let mut acc: Vec<RoleChain> = vec![Vec::new()];
            for p in ps {
                let part = dnf_disjuncts(p)?;
                if part.iter().any(|conj| conj.len() != 1) {
                    return Err(RoleDnfError::IntersectionUnderComposition);
                }
                let mut next = Vec::new();
                for prefix in &acc {
                    for conj in &part {
                        let mut chain = prefix.clone();
                        chain.extend(conj[0].iter().cloned());
                        push_unique(&mut next, chain);
                    }
                }
                acc = next;
            }
            acc.into_iter().map(|c| vec![c]).collect()
        }
        RoleExpr::Union(ps) => {
            let mut out = Vec::new();
            for p in ps {
                for d in dnf_disjuncts(p)? {
                    push_unique(&mut out, d);
                }
            }
            out
        }
        RoleExpr::Intersection(ps) => {
            let mut acc: Vec<Vec<RoleChain>> = vec![Vec::new()];
            for p in ps {
                let part = dnf_disjuncts(p)?;
                let mut next = Vec::new();
                for left in &acc {
                    for right in &part {
                        let mut conj = left.clone();
                        for chain in right {
                            push_unique(&mut conj, chain.clone());
                        }
                        push_unique(&mut next, conj);
                    }
                }
                acc = next;
            }
            acc
        }
    })
}

/// Normal form for tableau roles: a plain chain becomes `Atomic`/`Chain`,
/// anything else a [`RoleExpr::Dnf`].
pub fn canonical_role(r: &RoleExpr) -> Result<RoleExpr, RoleDnfError> {
    let dnf = role_dnf(r)?;
    Ok(match dnf.as_single_chain() {
        Some(chain) => RoleExpr::chain(chain.iter().map(|n| RoleExpr::Atomic(n.clone()))),
        None => RoleExpr::Dnf(dnf),
    })
}

/// Applies [`canonical_role`] to every role in `c`.
pub fn canonicalize_roles(c: &Concept) -> Result<Concept, RoleDnfError> {
    Ok(match c {
        Concept::Atom(_) | Concept::Top | Concept::Bottom => c.clone(),
        Concept::Not(x) => Concept::negate(canonicalize_roles(x)?),
        Concept::And(a, b) => Concept::and(canonicalize_roles(a)?, canonicalize_roles(b)?),
        Concept::Or(a, b) => Concept::or(canonicalize_roles(a)?, canonicalize_roles(b)?),
        Concept::Exists(r, q) => {
            Concept::Exists(canonical_role(r)?, Arc::new(canonicalize_roles(q)?))
        }
        Concept::Forall(r, q) => {
            Concept::Forall(canonical_role(r)?, Arc::new(canonicalize_roles(q)?))
        }
        Concept::AtLeast(n, r, q) => Concept::AtLeast(
            n.clone(),
            canonical_role(r)?,
            Arc::new(canonicalize_roles(q)?),
        ),
        Concept::AtMost(n, r, q) => Concept::AtMost(
            n.clone(),
            canonical_role(r)?,
            Arc::new(canonicalize_roles(q)?),
        ),
    })
}

/// True when `c` is in the negation normal form produced by [`nnf`].
pub fn is_nnf(c: &Concept) -> bool {
    match c {
        Concept::Atom(_) | Concept::Top | Concept::Bottom => true,
        Concept::Not(x) => matches!(**x, Concept::Atom(_)),
        Concept::And(a, b) | Concept::Or(a, b) => is_nnf(a) && is_nnf(b),
        Concept::Exists(..) | Concept::Forall(..) => false,
        Concept::AtLeast(_, _, q) | Concept::AtMost(_, _, q) => is_nnf(q),
    }
}
