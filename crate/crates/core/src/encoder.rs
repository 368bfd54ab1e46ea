//! The domino-tiling encoding: grid concepts over a 3-periodic type system,
//! tiling constraints, the start-individual concept, and finite torus models.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::interp::Interpretation;
use crate::normalize::{push_inverses_in_concept, unfold_value_restrictions};
use crate::syntax::{Concept, RoleExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncoderError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("a tiling system needs at least one tile")]
    NoTiles,
    #[error("tile {0:?} is declared twice")]
    DuplicateTile(String),
    #[error("unknown tile {0:?}")]
    UnknownTile(String),
    #[error("tile names must be identifiers: {0:?}")]
    BadTileName(String),
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `(a + b) mod 3`.
pub fn oplus(a: usize, b: usize) -> usize {
    (a + b) % 3
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilingSystem {
    pub tiles: Vec<String>,
    pub horizontal: BTreeSet<(String, String)>,
    pub vertical: BTreeSet<(String, String)>,
}

impl TilingSystem {
    pub fn new(
        tiles: Vec<String>,
        horizontal: BTreeSet<(String, String)>,
        vertical: BTreeSet<(String, String)>,
    ) -> Result<Self, EncoderError> {
        let ts = TilingSystem {
            tiles,
            horizontal,
            vertical,
        };
        ts.validate()?;
        Ok(ts)
    }

    pub fn validate(&self) -> Result<(), EncoderError> {
        if self.tiles.is_empty() {
            return Err(EncoderError::NoTiles);
        }
        let mut seen = BTreeSet::new();
        for t in &self.tiles {
            if !is_ident(t) {
                return Err(EncoderError::BadTileName(t.clone()));
            }
            if !seen.insert(t) {
                return Err(EncoderError::DuplicateTile(t.clone()));
            }
        }
        for (a, b) in self.horizontal.iter().chain(&self.vertical) {
            for t in [a, b] {
                if !seen.contains(t) {
                    return Err(EncoderError::UnknownTile(t.clone()));
                }
            }
        }
        Ok(())
    }

    /// Parses `tiles: D1 D2 ...`, `h: A B` and `v: A B` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, EncoderError> {
        let mut tiles = Vec::new();
        let mut horizontal = BTreeSet::new();
        let mut vertical = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, rest) = content
                .split_once(':')
                .ok_or_else(|| EncoderError::Syntax {
                    line,
                    message: format!("expected '<key>: ...', found {content:?}"),
                })?;
            let words: Vec<String> = rest.split_whitespace().map(String::from).collect();
            match (key.trim(), words.as_slice()) {
                ("tiles", _) => tiles.extend(words.iter().cloned()),
                ("h", [a, b]) => {
                    horizontal.insert((a.clone(), b.clone()));
                }
                ("v", [a, b]) => {
                    vertical.insert((a.clone(), b.clone()));
                }
                ("h" | "v", _) => {
                    return Err(EncoderError::Syntax {
                        line,
                        message: "a matching pair needs exactly two tiles".into(),
                    })
                }
                (other, _) => {
                    return Err(EncoderError::Syntax {
                        line,
                        message: format!("unknown key {other:?}"),
                    })
                }
            }
        }
        TilingSystem::new(tiles, horizontal, vertical)
    }
}

/// A tiling of the 3x3 torus; `cells[i][j]` is the tile at point `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusTiling {
    pub cells: [[String; 3]; 3],
}

impl TorusTiling {
    pub fn constant(tile: &str) -> Self {
        TorusTiling {
            cells: std::array::from_fn(|_| std::array::from_fn(|_| tile.to_string())),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &str {
        &self.cells[i % 3][j % 3]
    }

    /// Three lines of three tile names; line `j` lists the tiles at `(0,j) (1,j) (2,j)`.
    pub fn parse(text: &str) -> Result<Self, EncoderError> {
        let rows: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .map(|(k, l)| {
                (
                    k + 1,
                    l.split('#')
                        .next()
                        .unwrap_or("")
                        .split_whitespace()
                        .collect::<Vec<_>>(),
                )
            })
            .filter(|(_, w)| !w.is_empty())
            .collect();
        if rows.len() != 3 {
            return Err(EncoderError::Syntax {
                line: rows.get(3).map_or(text.lines().count(), |r| r.0),
                message: format!("expected 3 rows, found {}", rows.len()),
            });
        }
        let mut t = TorusTiling::constant("");
        for (j, (line, words)) in rows.iter().enumerate() {
            if words.len() != 3 {
                return Err(EncoderError::Syntax {
                    line: *line,
                    message: format!("expected 3 tiles, found {}", words.len()),
                });
            }
            for (i, w) in words.iter().enumerate() {
                t.cells[i][j] = w.to_string();
            }
        }
        Ok(t)
    }

    pub fn validate(&self, ts: &TilingSystem) -> Result<(), EncoderError> {
        for row in &self.cells {
            for t in row {
                if !ts.tiles.contains(t) {
                    return Err(EncoderError::UnknownTile(t.clone()));
                }
            }
        }
        Ok(())
    }
}

/// Whether every horizontal and vertical neighbour pair on the torus matches.
pub fn is_torus_compatible(ts: &TilingSystem, t: &TorusTiling) -> bool {
    (0..3).all(|i| {
        (0..3).all(|j| {
            let here = t.get(i, j).to_string();
            ts.horizontal
                .contains(&(here.clone(), t.get(oplus(i, 1), j).to_string()))
                && ts
                    .vertical
                    .contains(&(here, t.get(i, oplus(j, 1)).to_string()))
        })
    })
}

pub fn center_name(i: usize, j: usize) -> String {
    format!("C_{i}{j}")
}

pub fn point_name(i: usize, j: usize) -> String {
    format!("A_{i}{j}")
}

pub fn tile_atom(tile: &str) -> String {
    format!("Tile_{tile}")
}

fn center(i: usize, j: usize) -> Concept {
    Concept::atom(&center_name(i, j))
}

fn point(i: usize, j: usize) -> Concept {
    Concept::atom(&point_name(i, j))
}

fn r() -> RoleExpr {
    RoleExpr::atomic("R")
}

fn u() -> RoleExpr {
    RoleExpr::atomic("U")
}

fn inv(role: RoleExpr) -> RoleExpr {
    RoleExpr::inverse(role)
}

fn some(role: RoleExpr, c: Concept) -> Concept {
    Concept::exists(role, c)
}

fn all(role: RoleExpr, c: Concept) -> Concept {
    Concept::forall(role, c)
}

/// `not (some role . Top)`, in negation normal form.
fn none(role: RoleExpr) -> Concept {
    Concept::at_most(0, role, Concept::Top)
}

fn cells() -> impl Iterator<Item = (usize, usize)> {
    (0..3).flat_map(|i| (0..3).map(move |j| (i, j)))
}

/// Exactly one of `atoms`.
fn exactly_one(atoms: &[Concept]) -> Concept {
    Concept::or_all(atoms.iter().enumerate().map(|(k, a)| {
        Concept::and_all(
            std::iter::once(a.clone()).chain(
                atoms
                    .iter()
                    .enumerate()
                    .filter(|&(l, _)| l != k)
                    .map(|(_, b)| Concept::negate(b.clone())),
            ),
        )
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    /// Grid centres: exactly one centre type.
    pub c: Concept,
    /// Grid points: exactly one point type, and not a centre.
    pub a: Concept,
    pub c_grid: Concept,
    pub a_grid: Concept,
    /// Tiling constraints imposed on centres.
    pub c_d: Concept,
    pub d_start: Concept,
    pub d_start_prime: Concept,
    pub e_d: Concept,
}

/// `(U o R) o inv(U o R)`.
fn round_trip() -> RoleExpr {
    let ur = RoleExpr::chain([u(), r()]);
    RoleExpr::chain([ur.clone(), inv(ur)])
}

pub fn encode(ts: &TilingSystem) -> Result<Encoding, EncoderError> {
    ts.validate()?;
    let centers: Vec<Concept> = cells().map(|(i, j)| center(i, j)).collect();
    let points: Vec<Concept> = cells().map(|(i, j)| point(i, j)).collect();
    let c = exactly_one(&centers);
    let a = Concept::and(exactly_one(&points), Concept::negate(c.clone()));

    let a_grid = Concept::and_all(std::iter::once(a.clone()).chain(cells().map(|(i, j)| {
        Concept::implies(
            point(i, j),
            Concept::and_all([
                some(inv(r()), center(i, j)),
                some(inv(r()), center(oplus(i, 2), j)),
                some(inv(r()), center(i, oplus(j, 2))),
                some(inv(r()), center(oplus(i, 2), oplus(j, 2))),
            ]),
        )
    })));

    let c_grid = Concept::and_all(
        [
            c.clone(),
            Concept::at_most(4, r(), Concept::Top),
            all(r(), a_grid.clone()),
            Concept::at_most(9, RoleExpr::chain([r(), inv(r())]), Concept::Top),
        ]
        .into_iter()
        .chain(cells().map(|(i, j)| {
            Concept::implies(
                center(i, j),
                Concept::and_all([
                    some(r(), point(i, j)),
                    some(r(), point(oplus(i, 1), j)),
                    some(r(), point(i, oplus(j, 1))),
                    some(r(), point(oplus(i, 1), oplus(j, 1))),
                ]),
            )
        })),
    );

    let tile = |name: &str| Concept::atom(&tile_atom(name));
    let tiles: Vec<Concept> = ts.tiles.iter().map(|t| tile(t)).collect();
    let matching = |pairs: &BTreeSet<(String, String)>, from: &str| {
        Concept::or_all(
            pairs
                .iter()
                .filter(|(a, _)| a == from)
                .map(|(_, b)| tile(b)),
        )
    };
    let c_d = Concept::and_all(std::iter::once(all(r(), exactly_one(&tiles))).chain(
        cells().flat_map(|(i, j)| {
            let tile = &tile;
            let matching = &matching;
            ts.tiles.iter().map(move |k| {
                Concept::implies(
                    Concept::and(center(i, j), some(r(), Concept::and(point(i, j), tile(k)))),
                    Concept::and(
                        some(
                            r(),
                            Concept::and(point(oplus(i, 1), j), matching(&ts.horizontal, k)),
                        ),
                        some(
                            r(),
                            Concept::and(point(i, oplus(j, 1)), matching(&ts.vertical, k)),
                        ),
                    ),
                )
            })
        }),
    ));

    let reach_grid = some(RoleExpr::chain([u(), r()]), Concept::Top);
    let single_start = Concept::at_most(1, round_trip(), Concept::Top);
    let back_to_start = all(u(), all(r(), all(inv(r()), some(inv(u()), Concept::Top))));

    let d_start = Concept::and_all([
        reach_grid.clone(),
        single_start.clone(),
        none(inv(r())),
        none(inv(u())),
        all(u(), none(inv(r()))),
    ]);
    let d_start_prime = Concept::and_all([d_start.clone(), back_to_start.clone(), none(r())]);
    let e_d = Concept::and_all([
        reach_grid,
        single_start,
        none(r()),
        none(inv(r())),
        none(inv(u())),
        back_to_start,
        all(
            u(),
            Concept::and_all([c_grid.clone(), c_d.clone(), none(inv(r()))]),
        ),
    ]);

    Ok(Encoding {
        c,
        a,
        c_grid,
        a_grid,
        c_d,
        d_start,
        d_start_prime,
        e_d,
    })
}

/// Inverses pushed onto atomic roles, then compositions under `some`/`all` unfolded.
pub fn translate_to_alcni(c: &Concept) -> Concept {
    unfold_value_restrictions(&push_inverses_in_concept(c))
}

/// The 19-element torus: start `s`, centres `c_ij`, points `a_ij` carrying the tiling.
pub fn make_torus_model(
    ts: &TilingSystem,
    t: &TorusTiling,
) -> Result<Interpretation, EncoderError> {
    ts.validate()?;
    t.validate(ts)?;
    let mut m = Interpretation::new();
    let s = m.add_element("s");
    let mut c_el = BTreeMap::new();
    let mut a_el = BTreeMap::new();
    for (i, j) in cells() {
        c_el.insert((i, j), m.add_element(&format!("c_{i}{j}")));
    }
    for (i, j) in cells() {
        a_el.insert((i, j), m.add_element(&format!("a_{i}{j}")));
    }
    for name in &ts.tiles {
        m.declare_concept(&tile_atom(name));
    }
    for (i, j) in cells() {
        let (c, a) = (c_el[&(i, j)], a_el[&(i, j)]);
        m.add_concept_member(&center_name(i, j), c);
        m.add_concept_member(&point_name(i, j), a);
        m.add_concept_member(&tile_atom(t.get(i, j)), a);
        m.add_role_pair("U", s, c);
        for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            m.add_role_pair("R", c, a_el[&(oplus(i, di), oplus(j, dj))]);
        }
    }
    m.assign("s", s);
    Ok(m)
}
