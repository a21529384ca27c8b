//! The two fixed presentations: the Jacobi algebra of the local-P² quiver
//! with potential, and the Beilinson algebra of P² obtained by dropping the
//! `c` arrows.
//!
//! Paths are stored in written order: `c3 b2 a1` is the composite
//! `c3 ∘ b2 ∘ a1` of quiver arrows, so `a1` is traversed first. Modules are
//! right modules, so an arrow `x: s → t` acts by a matrix `V_t → V_s` and the
//! matrix of a written path applies the leftmost arrow first.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const VERTICES: [usize; 3] = [0, 1, 2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// One signed path of a formal sum. Entries of `path` index into the arrow
/// list of the owning presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub path: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub label: String,
    pub terms: Vec<Term>,
    pub source: usize,
    pub target: usize,
    /// Index of the arrow this relation is the cyclic derivative along,
    /// when it is one of the Y-side relations.
    pub derivative_of: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Y,
    P2,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Y => "y",
            Side::P2 => "p2",
        })
    }
}

#[derive(Debug)]
pub struct QuiverPresentation {
    pub side: Side,
    pub arrows: Vec<Arrow>,
    pub potential: Vec<Term>,
    pub relations: Vec<Relation>,
    /// Alternating symbol read off the signed terms `c_k b_j a_i` of W,
    /// indexed `[i][j][k]` from zero.
    epsilon: [[[i64; 3]; 3]; 3],
}

fn arrow(name: &str, source: usize, target: usize) -> Arrow {
    Arrow { name: name.to_string(), source, target }
}

fn y_arrows() -> Vec<Arrow> {
    let mut v = Vec::with_capacity(9);
    for i in 1..=3 {
        v.push(arrow(&format!("a{i}"), 0, 1));
    }
    for j in 1..=3 {
        v.push(arrow(&format!("b{j}"), 1, 2));
    }
    for k in 1..=3 {
        v.push(arrow(&format!("c{k}"), 2, 0));
    }
    v
}

/// `W = c3b2a1 − c2b3a1 + c1b3a2 − c3b1a2 + c2b1a3 − c1b2a3`.
const POTENTIAL: [(i64, [&str; 3]); 6] = [
    (1, ["c3", "b2", "a1"]),
    (-1, ["c2", "b3", "a1"]),
    (1, ["c1", "b3", "a2"]),
    (-1, ["c3", "b1", "a2"]),
    (1, ["c2", "b1", "a3"]),
    (-1, ["c1", "b2", "a3"]),
];

fn index_of(arrows: &[Arrow], name: &str) -> Result<usize> {
    arrows
        .iter()
        .position(|a| a.name == name)
        .ok_or_else(|| Error::UnknownArrow(name.to_string()))
}

fn digit(name: &str) -> usize {
    name[1..].parse::<usize>().expect("arrow names end in 1..=3") - 1
}

impl QuiverPresentation {
    /// Jacobi algebra of (Q, W) for local P².
    pub fn local_p2() -> &'static QuiverPresentation {
        static CELL: OnceLock<QuiverPresentation> = OnceLock::new();
        CELL.get_or_init(|| {
            let arrows = y_arrows();
            let potential = Self::parse_potential(&arrows);
            let epsilon = Self::epsilon_from(&arrows, &potential);
            let mut p = QuiverPresentation {
                side: Side::Y,
                arrows,
                potential,
                relations: Vec::new(),
                epsilon,
            };
            p.relations = (0..p.arrows.len())
                .map(|x| {
                    let name = &p.arrows[x].name;
                    let terms = p.cyclic_derivative(&p.potential, name).expect("known arrow");
                    p.relation(format!("dW/d{name}"), terms, Some(x))
                })
                .collect();
            p
        })
    }

    /// Beilinson algebra of P²: arrows `a`, `b` and the three relations
    /// `∂W/∂c_k`.
    pub fn beilinson() -> &'static QuiverPresentation {
        static CELL: OnceLock<QuiverPresentation> = OnceLock::new();
        CELL.get_or_init(|| {
            let y = Self::local_p2();
            let arrows: Vec<Arrow> = y.arrows[..6].to_vec();
            let mut p = QuiverPresentation {
                side: Side::P2,
                arrows,
                potential: Vec::new(),
                relations: Vec::new(),
                epsilon: y.epsilon,
            };
            p.relations = y.relations[6..]
                .iter()
                .map(|r| {
                    // Arrow indices below 6 coincide in both presentations.
                    assert!(r.terms.iter().all(|t| t.path.iter().all(|&a| a < 6)));
                    p.relation(r.label.clone(), r.terms.clone(), None)
                })
                .collect();
            p
        })
    }

    pub fn for_side(side: Side) -> &'static QuiverPresentation {
        match side {
            Side::Y => Self::local_p2(),
            Side::P2 => Self::beilinson(),
        }
    }

    fn parse_potential(arrows: &[Arrow]) -> Vec<Term> {
        POTENTIAL
            .iter()
            .map(|(coeff, names)| Term {
                coeff: *coeff,
                path: names.iter().map(|n| index_of(arrows, n).unwrap()).collect(),
            })
            .collect()
    }

    fn epsilon_from(arrows: &[Arrow], potential: &[Term]) -> [[[i64; 3]; 3]; 3] {
        let mut eps = [[[0; 3]; 3]; 3];
        for t in potential {
            let [c, b, a] = [t.path[0], t.path[1], t.path[2]].map(|x| digit(&arrows[x].name));
            eps[a][b][c] = t.coeff;
        }
        eps
    }

    fn relation(&self, label: String, terms: Vec<Term>, derivative_of: Option<usize>) -> Relation {
        let first = &terms[0];
        let source = self.path_source(&first.path);
        let target = self.path_target(&first.path);
        Relation { label, terms, source, target, derivative_of }
    }

    /// `ε_{ijk}` with indices in `1..=3`.
    pub fn epsilon(&self, i: usize, j: usize, k: usize) -> i64 {
        self.epsilon[i - 1][j - 1][k - 1]
    }

    pub fn arrow_index(&self, name: &str) -> Result<usize> {
        index_of(&self.arrows, name)
    }

    /// Quiver source of a written path (the source of its last letter).
    pub fn path_source(&self, path: &[usize]) -> usize {
        self.arrows[*path.last().expect("nonempty path")].source
    }

    pub fn path_target(&self, path: &[usize]) -> usize {
        self.arrows[path[0]].target
    }

    pub fn is_composable(&self, path: &[usize]) -> bool {
        path.windows(2).all(|w| self.arrows[w[1]].target == self.arrows[w[0]].source)
    }

    pub fn is_cycle(&self, path: &[usize]) -> bool {
        !path.is_empty() && self.is_composable(path) && self.path_source(path) == self.path_target(path)
    }

    /// Rotates each cycle so that `arrow` is its last letter, deletes it, and
    /// collects the signed remainders.
    pub fn cyclic_derivative(&self, potential: &[Term], arrow: &str) -> Result<Vec<Term>> {
        let x = self.arrow_index(arrow)?;
        let mut out = Vec::new();
        for term in potential {
            let n = term.path.len();
            for pos in (0..n).filter(|&p| term.path[p] == x) {
                let path: Vec<usize> = (1..n).map(|s| term.path[(pos + s) % n]).collect();
                out.push(Term { coeff: term.coeff, path });
            }
        }
        Ok(out)
    }

    pub fn format_sum(&self, terms: &[Term]) -> String {
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (n, t) in terms.iter().enumerate() {
            let word: String = t.path.iter().map(|&a| self.arrows[a].name.as_str()).collect();
            let mag = t.coeff.abs();
            let coeff = if mag == 1 { String::new() } else { mag.to_string() };
            match (n, t.coeff < 0) {
                (0, false) => s.push_str(&format!("{coeff}{word}")),
                (0, true) => s.push_str(&format!("-{coeff}{word}")),
                (_, false) => s.push_str(&format!(" + {coeff}{word}")),
                (_, true) => s.push_str(&format!(" - {coeff}{word}")),
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_of_presentations() {
        let y = QuiverPresentation::local_p2();
        assert_eq!(y.arrows.len(), 9);
        assert_eq!(y.relations.len(), 9);
        let p2 = QuiverPresentation::beilinson();
        assert_eq!(p2.arrows.len(), 6);
        assert_eq!(p2.relations.len(), 3);
    }

    #[test]
    fn potential_is_cyclic_and_relations_homogeneous() {
        let y = QuiverPresentation::local_p2();
        assert!(y.potential.iter().all(|t| y.is_cycle(&t.path)));
        for p in [y, QuiverPresentation::beilinson()] {
            for r in &p.relations {
                assert_eq!(r.terms.len(), 2, "{}", r.label);
                for t in &r.terms {
                    assert!(p.is_composable(&t.path));
                    assert_eq!(p.path_source(&t.path), r.source);
                    assert_eq!(p.path_target(&t.path), r.target);
                }
            }
        }
    }

    #[test]
    fn cyclic_derivatives() {
        let y = QuiverPresentation::local_p2();
        let da1 = y.cyclic_derivative(&y.potential, "a1").unwrap();
        assert_eq!(y.format_sum(&da1), "c3b2 - c2b3");
        let dc1 = y.cyclic_derivative(&y.potential, "c1").unwrap();
        assert_eq!(y.format_sum(&dc1), "b3a2 - b2a3");
        assert!(y.cyclic_derivative(&[], "a1").unwrap().is_empty());
        assert_eq!(y.cyclic_derivative(&y.potential, "d1"), Err(Error::UnknownArrow("d1".into())));
    }

    #[test]
    fn epsilon_is_alternating() {
        let y = QuiverPresentation::local_p2();
        assert_eq!(y.epsilon(1, 2, 3), 1);
        for i in 1..=3 {
            for j in 1..=3 {
                for k in 1..=3 {
                    assert_eq!(y.epsilon(i, j, k), -y.epsilon(j, i, k));
                    assert_eq!(y.epsilon(i, j, k), y.epsilon(j, k, i));
                }
            }
        }
    }
}
