#![allow(dead_code)]

use alcq::{Concept, Interpretation, RoleExpr};
use rand::Rng;

/// Shape parameters for random concepts.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub atoms: &'static [&'static str],
    pub roles: &'static [&'static str],
    pub max_depth: usize,
    pub max_count: u64,
    /// Allow `inv(..)` anywhere.
    pub inverses: bool,
    /// Allow compositions and same-length `&`/`|` role combinations.
    pub complex_roles: bool,
    /// Upper bound on constructor count per conjunct.
    pub max_size: usize,
    /// Number of independently drawn top-level conjuncts.
    pub conjuncts: usize,
}

pub const SMALL: Shape = Shape {
    atoms: &["A", "B", "C"],
    roles: &["R", "S"],
    max_depth: 3,
    max_count: 3,
    inverses: true,
    complex_roles: true,
    max_size: 10,
    conjuncts: 1,
};

/// Concepts the tableau accepts.
pub const FRAGMENT: Shape = Shape {
    inverses: false,
    max_size: 6,
    conjuncts: 3,
    ..SMALL
};

/// Small enough for exhaustive enumeration at domain size 4.
pub const TINY: Shape = Shape {
    atoms: &["A", "B"],
    max_depth: 2,
    max_count: 2,
    max_size: 4,
    conjuncts: 2,
    ..FRAGMENT
};

fn atomic(rng: &mut impl Rng, shape: &Shape) -> RoleExpr {
    let r = RoleExpr::atomic(shape.roles[rng.gen_range(0..shape.roles.len())]);
    if shape.inverses && rng.gen_bool(0.25) {
        RoleExpr::inverse(r)
    } else {
        r
    }
}

fn chain(rng: &mut impl Rng, shape: &Shape, len: usize) -> RoleExpr {
    if len == 1 {
        atomic(rng, shape)
    } else {
        let parts: Vec<RoleExpr> = (0..len).map(|_| atomic(rng, shape)).collect();
        let c = RoleExpr::chain(parts);
        if shape.inverses && rng.gen_bool(0.2) {
            RoleExpr::inverse(c)
        } else {
            c
        }
    }
}

/// A random role of chain length at most `room`, with its length.
pub fn random_role(rng: &mut impl Rng, shape: &Shape, room: usize) -> (RoleExpr, usize) {
    let len = if shape.complex_roles && room >= 2 && rng.gen_bool(0.3) {
        2
    } else {
        1
    };
    let first = chain(rng, shape, len);
    if shape.complex_roles && rng.gen_bool(0.2) {
        let second = chain(rng, shape, len);
        if rng.gen_bool(0.5) {
            (RoleExpr::union([first, second]), len)
        } else {
            (RoleExpr::intersection([first, second]), len)
        }
    } else {
        (first, len)
    }
}

fn leaf(rng: &mut impl Rng, shape: &Shape) -> Concept {
    match rng.gen_range(0..20) {
        0 => Concept::Top,
        1 => Concept::Bottom,
        k => {
            let a = Concept::atom(shape.atoms[rng.gen_range(0..shape.atoms.len())]);
            if k % 3 == 0 {
                Concept::negate(a)
            } else {
                a
            }
        }
    }
}

fn node(rng: &mut impl Rng, shape: &Shape, room: usize, size: &mut usize) -> Concept {
    if *size >= shape.max_size || rng.gen_bool(0.3) {
        return leaf(rng, shape);
    }
    *size += 1;
    let kind = if room == 0 {
        rng.gen_range(0..3)
    } else {
        rng.gen_range(0..7)
    };
    match kind {
        0 => Concept::negate(node(rng, shape, room, size)),
        1 => Concept::and(node(rng, shape, room, size), node(rng, shape, room, size)),
        2 => Concept::or(node(rng, shape, room, size), node(rng, shape, room, size)),
        k => {
            let (r, len) = random_role(rng, shape, room);
            let body = node(rng, shape, room - len, size);
            let n = rng.gen_range(0..=shape.max_count);
            match k {
                3 => Concept::exists(r, body),
                4 => Concept::forall(r, body),
                5 => Concept::at_least(n, r, body),
                _ => Concept::at_most(n, r, body),
            }
        }
    }
}

pub fn random_concept(rng: &mut impl Rng, shape: &Shape) -> Concept {
    Concept::and_all((0..shape.conjuncts.max(1)).map(|_| {
        let mut size = 0;
        node(rng, shape, shape.max_depth, &mut size)
    }))
}

/// A random interpretation over `shape`'s names with `size` elements `e0..`.
pub fn random_interpretation(rng: &mut impl Rng, shape: &Shape, size: usize) -> Interpretation {
    let mut i = Interpretation::new();
    let elems: Vec<usize> = (0..size).map(|k| i.add_element(&format!("e{k}"))).collect();
    for a in shape.atoms {
        i.declare_concept(a);
        for &e in &elems {
            if rng.gen_bool(0.5) {
                i.add_concept_member(a, e);
            }
        }
    }
    for r in shape.roles {
        i.declare_role(r);
        for &x in &elems {
            for &y in &elems {
                if rng.gen_bool(0.4) {
                    i.add_role_pair(r, x, y);
                }
            }
        }
    }
    i
}
