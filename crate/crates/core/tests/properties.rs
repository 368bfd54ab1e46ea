mod common;

use std::collections::BTreeSet;

use alcq::abox::{ABox, Individual};
use alcq::encoder::translate_to_alcni;
use alcq::interp::{enumerate_model_with_budget, eval_concept, eval_role};
use alcq::normalize::{
    complement_nnf, is_nnf, nnf, push_inverses, push_inverses_in_concept, role_dnf,
    unfold_value_restrictions,
};
use alcq::syntax::{parse_concept, Signature};
use alcq::tableau::{applicable_rules, apply_rule, is_satisfiable_with, prepare, SearchConfig};
use alcq::{Concept, RoleExpr};
use common::{random_concept, random_interpretation, random_role, FRAGMENT, SMALL, TINY};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn same_on_samples(seed: u64, a: &Concept, b: &Concept) -> Result<(), TestCaseError> {
    let mut r = rng(seed ^ 0x9e37);
    for _ in 0..20 {
        let size = r.gen_range(1..=4);
        let i = random_interpretation(&mut r, &SMALL, size);
        prop_assert_eq!(
            eval_concept(&i, a),
            eval_concept(&i, b),
            "{} vs {}\n{}",
            a,
            b,
            i
        );
    }
    Ok(())
}

fn atomic_occurrences(r: &RoleExpr) -> usize {
    match r {
        RoleExpr::Atomic(_) => 1,
        RoleExpr::Inverse(inner) => atomic_occurrences(inner),
        RoleExpr::Chain(parts) | RoleExpr::Union(parts) | RoleExpr::Intersection(parts) => {
            parts.iter().map(atomic_occurrences).sum()
        }
        RoleExpr::Dnf(d) => d.max_chain_length(),
    }
}

fn no_inverse_above_atoms(r: &RoleExpr) -> bool {
    match r {
        RoleExpr::Atomic(_) => true,
        RoleExpr::Inverse(inner) => matches!(**inner, RoleExpr::Atomic(_)),
        RoleExpr::Chain(parts) | RoleExpr::Union(parts) | RoleExpr::Intersection(parts) => {
            parts.iter().all(no_inverse_above_atoms)
        }
        RoleExpr::Dnf(_) => true,
    }
}

fn no_composite_value_restriction(c: &Concept) -> bool {
    match c {
        Concept::Atom(_) | Concept::Top | Concept::Bottom => true,
        Concept::Not(x) => no_composite_value_restriction(x),
        Concept::And(a, b) | Concept::Or(a, b) => {
            no_composite_value_restriction(a) && no_composite_value_restriction(b)
        }
        Concept::Exists(r, x) | Concept::Forall(r, x) => {
            !matches!(r, RoleExpr::Chain(_)) && no_composite_value_restriction(x)
        }
        Concept::AtLeast(_, _, x) | Concept::AtMost(_, _, x) => no_composite_value_restriction(x),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let c = random_concept(&mut rng(seed), &SMALL);
        let printed = c.to_string();
        let parsed = parse_concept(&printed).expect("printed concepts parse");
        prop_assert_eq!(parsed.to_string(), printed.clone());
        prop_assert_eq!(parse_concept(&parsed.to_string()).unwrap(), parsed);
        same_on_samples(seed, &c, &parse_concept(&printed).unwrap())?;
    }

    #[test]
    fn nnf_preserves_meaning(seed in any::<u64>()) {
        let c = random_concept(&mut rng(seed), &SMALL);
        let n = nnf(&c);
        prop_assert!(is_nnf(&n), "{}", n);
        prop_assert_eq!(nnf(&n), n.clone());
        same_on_samples(seed, &c, &n)?;
        same_on_samples(seed, &Concept::negate(c.clone()), &complement_nnf(&c))?;
    }

    #[test]
    fn inverses_reach_atoms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (role, _) = random_role(&mut r, &SMALL, 2);
        let wrapped = RoleExpr::inverse(role);
        let pushed = push_inverses(&wrapped);
        prop_assert!(no_inverse_above_atoms(&pushed), "{}", pushed);
        prop_assert_eq!(atomic_occurrences(&pushed), atomic_occurrences(&wrapped));
        for _ in 0..10 {
            let size = r.gen_range(1..=4);
            let i = random_interpretation(&mut r, &SMALL, size);
            prop_assert_eq!(eval_role(&i, &wrapped), eval_role(&i, &pushed));
        }
    }

    #[test]
    fn translation_preserves_meaning(seed in any::<u64>()) {
        let c = random_concept(&mut rng(seed), &SMALL);
        let pushed = push_inverses_in_concept(&c);
        let unfolded = unfold_value_restrictions(&c);
        let translated = translate_to_alcni(&c);
        prop_assert!(no_composite_value_restriction(&translated), "{}", translated);
        same_on_samples(seed, &c, &pushed)?;
        same_on_samples(seed, &c, &unfolded)?;
        same_on_samples(seed, &c, &translated)?;
    }

    #[test]
    fn dnf_preserves_role_meaning(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (role, len) = random_role(&mut r, &FRAGMENT, 2);
        let dnf = role_dnf(&role).expect("same-length inverse-free roles");
        prop_assert_eq!(dnf.chain_length(), Some(len));
        let surface = dnf.to_surface();
        for _ in 0..10 {
            let size = r.gen_range(1..=4);
            let i = random_interpretation(&mut r, &SMALL, size);
            prop_assert_eq!(eval_role(&i, &role), eval_role(&i, &surface));
        }
    }

    #[test]
    fn largest_distinct_set_is_maximum(
        n in 0usize..7,
        qualified in proptest::collection::vec(any::<bool>(), 7),
        distinct in proptest::collection::vec(any::<bool>(), 21),
    ) {
        let mut a = ABox::initial(Concept::Top);
        let x = Individual::ROOT;
        let succ: Vec<Individual> = (0..n).map(|_| a.fresh(1)).collect();
        let q = Concept::atom("A");
        for (k, &y) in succ.iter().enumerate() {
            a.assert_role("R", x, y);
            if qualified[k] {
                a.assert_concept(y, q.clone());
            }
        }
        let mut pair = 0;
        for i in 0..n {
            for j in i + 1..n {
                if distinct[pair] {
                    a.assert_distinct(succ[i], succ[j]);
                }
                pair += 1;
            }
        }
        let (size, set) = a.max_distinct_qualified(x, &RoleExpr::atomic("R"), &q);
        let brute = (0u32..1 << n)
            .filter(|mask| {
                let chosen: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
                chosen.iter().all(|&k| qualified[k])
                    && chosen.iter().all(|&i| chosen.iter().all(|&j| i == j || a.are_distinct(succ[i], succ[j])))
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap_or(0);
        prop_assert_eq!(size, brute);
        prop_assert_eq!(set.len(), size);
    }

    #[test]
    fn clashes_persist(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_concept(&mut r, &TINY);
        prop_assume!(prepare(&c).is_ok());
        let mut a = ABox::initial(prepare(&c).unwrap().concept);
        for _ in 0..40 {
            let rules = applicable_rules(&a).unwrap();
            if rules.is_empty() {
                break;
            }
            let rule = &rules[r.gen_range(0..rules.len())];
            let branches = apply_rule(&a, rule).unwrap();
            if a.has_clash().is_some() {
                for b in &branches {
                    prop_assert!(b.has_clash().is_some(), "{} lost a clash", rule);
                }
            }
            let assertions: BTreeSet<String> = a.to_string().lines().map(String::from).collect();
            if branches.len() == 1 && !matches!(rule.kind, alcq::tableau::RuleKind::Leq | alcq::tableau::RuleKind::LeqExt) {
                let after: BTreeSet<String> = branches[0].to_string().lines().map(String::from).collect();
                prop_assert!(assertions.is_subset(&after), "{} dropped assertions", rule);
            }
            a = branches[r.gen_range(0..branches.len())].clone();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn oracle_is_monotone_in_the_bound(seed in any::<u64>()) {
        let c = random_concept(&mut rng(seed), &TINY);
        let sig = Signature::default();
        let mut found_before = false;
        for bound in 1..=3 {
            let Ok(found) = enumerate_model_with_budget(&c, &sig, bound, 200_000) else { break };
            if found_before {
                prop_assert!(found.is_some(), "model lost at bound {}", bound);
            }
            if let Some(m) = &found {
                prop_assert!(m.domain_size() <= bound);
                let d0 = m.element("d0").expect("witness");
                prop_assert!(eval_concept(m, &c).contains(&d0));
            }
            found_before = found.is_some();
        }
    }

    #[test]
    fn parallel_search_agrees(seed in any::<u64>()) {
        let c = random_concept(&mut rng(seed), &FRAGMENT);
        prop_assume!(prepare(&c).is_ok());
        let seq = is_satisfiable_with(&c, &SearchConfig { parallel: false, ..SearchConfig::default() }).unwrap();
        let par = is_satisfiable_with(&c, &SearchConfig { parallel: true, ..SearchConfig::default() }).unwrap();
        prop_assert_eq!(seq.satisfiable, par.satisfiable);
    }

    #[test]
    fn subsumption_is_reflexive_and_respects_conjunction(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_concept(&mut r, &TINY);
        let d = random_concept(&mut r, &TINY);
        prop_assume!(prepare(&c).is_ok() && prepare(&d).is_ok());
        let cfg = SearchConfig::default();
        prop_assert!(alcq::tableau::subsumes_with(&c, &c, &cfg).unwrap());
        prop_assert!(alcq::tableau::subsumes_with(&Concept::and(c.clone(), d.clone()), &d, &cfg).unwrap());
    }
}
