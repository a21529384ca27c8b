//! Window vectors, heart membership, and the twist functors between
//! neighbouring hearts.
//!
//! A module in heart `n` is also in heart `n + 1` when its section spaces
//! fit into an exact Koszul sequence
//!
//! ```text
//!   0 → V_{n+3} → V_{n+2}³ → V_{n+1}³ → V_n → 0
//! ```
//!
//! whose middle maps are `κ₂` (built from the `b` arrows) and `κ₁ = (A₁ A₂ A₃)`.
//! The twist reads off the new top slot as `ker κ₂`. Going down is the same
//! sequence read with cokernels, built from the `a` arrows.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::quiver::QuiverPresentation;
use crate::rank::bareiss_rank;
use crate::rep::{QuiverModule, Representation};

fn arrows(rep: &Representation, letter: char) -> [Matrix; 3] {
    [1, 2, 3].map(|i| rep.matrix_by_name(&format!("{letter}{i}")).expect("fixed arrow names").clone())
}

/// `3 × 3` block matrix with block `(i, k) = Σ_j ε_{ijk} X_j`.
fn skew_blocks(xs: &[Matrix; 3], rows: usize, cols: usize) -> Matrix {
    let pres = QuiverPresentation::local_p2();
    let mut out = Matrix::zeros(3 * rows, 3 * cols);
    for i in 0..3 {
        for k in 0..3 {
            for (j, x) in xs.iter().enumerate() {
                let e = pres.epsilon(i + 1, j + 1, k + 1);
                if e != 0 {
                    let mut block = Matrix::zeros(rows, cols);
                    block.add_assign_scaled(x, e);
                    out.add_block(i * rows, k * cols, &block);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct KoszulMaps {
    /// `V_{n+1}³ → V_n`.
    pub kappa1: Matrix,
    /// `V_{n+2}³ → V_{n+1}³`.
    pub kappa2: Matrix,
}

pub fn koszul_maps(rep: &Representation) -> Result<KoszulMaps> {
    let [d0, d1, d2] = rep.dims();
    let kappa1 = Matrix::hstack(&arrows(rep, 'a'), d0);
    let kappa2 = skew_blocks(&arrows(rep, 'b'), d1, d2);
    if !kappa1.mul(&kappa2).is_zero() {
        return Err(Error::Postcondition("κ₁κ₂ ≠ 0; the b·a relations fail".into()));
    }
    Ok(KoszulMaps { kappa1, kappa2 })
}

/// Maps of the downward sequence: `λ₁ = (B₁; B₂; B₃): V_{n+2} → V_{n+1}³` and
/// `λ₂: V_{n+1}³ → V_n³` with blocks `Σ_j ε_{ijk} A_j`.
fn down_maps(rep: &Representation) -> (Matrix, Matrix) {
    let [d0, d1, d2] = rep.dims();
    let lambda1 = Matrix::vstack(&arrows(rep, 'b'), d2);
    let lambda2 = skew_blocks(&arrows(rep, 'a'), d0, d1);
    (lambda1, lambda2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwistDirection {
    Up,
    Down,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub target: i64,
    pub member: bool,
    /// Named ranks of the maps involved, with the rank each must reach.
    pub ranks: BTreeMap<String, (usize, usize)>,
    pub failures: Vec<String>,
}

impl Membership {
    pub fn diagnostics(&self) -> String {
        if self.failures.is_empty() {
            "exact".to_string()
        } else {
            self.failures.join("; ")
        }
    }
}

pub fn window_membership(rep: &Representation, dir: TwistDirection) -> Result<Membership> {
    let [d0, d1, d2] = rep.dims();
    let mut ranks = BTreeMap::new();
    let mut failures = Vec::new();
    let target = match dir {
        TwistDirection::Up => {
            let k = koszul_maps(rep)?;
            let r1 = bareiss_rank(&k.kappa1);
            let r2 = bareiss_rank(&k.kappa2);
            ranks.insert("kappa1".to_string(), (r1, d0));
            ranks.insert("kappa2".to_string(), (r2, (3 * d1).saturating_sub(d0)));
            if r1 != d0 {
                failures.push(format!("κ₁ not surjective: rank {r1} onto a {d0}-dim slot"));
            }
            if r1 + r2 != 3 * d1 {
                failures.push(format!("ker κ₁ ≠ im κ₂: dim ker κ₁ = {}, rank κ₂ = {r2}", 3 * d1 - r1));
            }
            rep.heart() + 1
        }
        TwistDirection::Down => {
            let (l1, l2) = down_maps(rep);
            let r1 = bareiss_rank(&l1);
            let r2 = bareiss_rank(&l2);
            ranks.insert("lambda1".to_string(), (r1, d2));
            ranks.insert("lambda2".to_string(), (r2, (3 * d1).saturating_sub(d2)));
            if r1 != d2 {
                failures.push(format!("λ₁ not injective: rank {r1} from a {d2}-dim slot"));
            }
            if r1 + r2 != 3 * d1 {
                failures.push(format!("ker λ₂ ≠ im λ₁: dim ker λ₂ = {}, rank λ₁ = {r1}", 3 * d1 - r2));
            }
            rep.heart() - 1
        }
    };
    Ok(Membership { target, member: failures.is_empty(), ranks, failures })
}

fn refuse(m: &Membership) -> Error {
    Error::Membership { target: m.target, diagnostics: m.diagnostics() }
}

fn postconditions(before: &Representation, after: &Representation, dir: TwistDirection) -> Result<()> {
    let check = after.check_relations();
    if !check.ok {
        return Err(Error::Postcondition(format!("twisted module violates {}", check.violated.join(", "))));
    }
    let [h0, h1, h2] = before.dims().map(|x| x as i64);
    let [g0, g1, g2] = after.dims().map(|x| x as i64);
    let ok = match dir {
        TwistDirection::Up => g0 == h1 && g1 == h2 && g2 == h0 - 3 * h1 + 3 * h2,
        TwistDirection::Down => g1 == h0 && g2 == h1 && g0 == 3 * h0 - 3 * h1 + h2,
    };
    if !ok {
        return Err(Error::Postcondition(format!(
            "dims {:?} -> {:?} break the window recursion",
            before.dims(),
            after.dims()
        )));
    }
    Ok(())
}

/// Re-present a module of heart `n` in heart `n + 1`.
pub fn twist_up(rep: &Representation) -> Result<Representation> {
    let m = window_membership(rep, TwistDirection::Up)?;
    if !m.member {
        return Err(refuse(&m));
    }
    let [_, d1, d2] = rep.dims();
    let kz = koszul_maps(rep)?;
    let kernel = kz.kappa2.kernel();
    let h3 = kernel.cols();
    let a = arrows(rep, 'a');
    let b = arrows(rep, 'b');
    let c = arrows(rep, 'c');
    let mut mats = Vec::with_capacity(9);
    mats.extend(b.iter().cloned());
    for j in 0..3 {
        mats.push(kernel.block(j * d2, 0, d2, h3));
    }
    for ak in &a {
        let stacked = Matrix::vstack(&[c[0].mul(ak), c[1].mul(ak), c[2].mul(ak)], d1);
        let coords = kernel
            .solve(&stacked)
            .ok_or_else(|| Error::Postcondition("C·A does not land in ker κ₂".into()))?;
        mats.push(coords);
    }
    let out = Representation::new(rep.heart() + 1, [d1, d2, h3], mats, rep.label().map(str::to_string))?;
    postconditions(rep, &out, TwistDirection::Up)?;
    Ok(out)
}

/// Re-present a module of heart `n` in heart `n − 1`.
pub fn twist_down(rep: &Representation) -> Result<Representation> {
    let m = window_membership(rep, TwistDirection::Down)?;
    if !m.member {
        return Err(refuse(&m));
    }
    let [d0, d1, _] = rep.dims();
    let (_, lambda2) = down_maps(rep);
    let q = lambda2.cokernel_projection();
    let hm1 = q.rows();
    let section = q
        .solve(&Matrix::identity(hm1))
        .ok_or_else(|| Error::Postcondition("cokernel projection is not surjective".into()))?;
    let a = arrows(rep, 'a');
    let b = arrows(rep, 'b');
    let c = arrows(rep, 'c');
    let mut mats = Vec::with_capacity(9);
    for i in 0..3 {
        mats.push(q.block(0, i * d0, hm1, d0));
    }
    mats.extend(a.iter().cloned());
    for bk in &b {
        let gamma = Matrix::hstack(&[bk.mul(&c[0]), bk.mul(&c[1]), bk.mul(&c[2])], d1);
        mats.push(gamma.mul(&section));
    }
    let out = Representation::new(rep.heart() - 1, [hm1, d0, d1], mats, rep.label().map(str::to_string))?;
    postconditions(rep, &out, TwistDirection::Down)?;
    Ok(out)
}

pub fn twist(rep: &Representation, dir: TwistDirection) -> Result<Representation> {
    match dir {
        TwistDirection::Up => twist_up(rep),
        TwistDirection::Down => twist_down(rep),
    }
}

/// Section dimensions `h_k = dim Hom(π*O(k), F)` over a finite range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowVector {
    pub base: i64,
    pub values: BTreeMap<i64, i64>,
    pub certified: BTreeSet<i64>,
}

impl WindowVector {
    pub fn new(base: i64) -> Self {
        WindowVector { base, values: BTreeMap::new(), certified: BTreeSet::new() }
    }

    /// The three slots of a module, certified by the module itself.
    pub fn from_module(rep: &Representation) -> Self {
        let mut w = WindowVector::new(rep.heart());
        w.certify_module(rep);
        w
    }

    fn certify_module(&mut self, rep: &Representation) {
        for (s, &d) in rep.dims().iter().enumerate() {
            let k = rep.heart() + s as i64;
            self.values.insert(k, d as i64);
            self.certified.insert(k);
        }
    }

    pub fn from_values(base: i64, values: &[i64], certified: bool) -> Self {
        let mut w = WindowVector::new(base);
        for (i, &h) in values.iter().enumerate() {
            let k = base + i as i64;
            w.values.insert(k, h);
            if certified {
                w.certified.insert(k);
            }
        }
        w
    }

    pub fn get(&self, k: i64) -> Option<i64> {
        self.values.get(&k).copied()
    }

    /// Start indices `k` of certified runs `h_k..h_{k+3}` violating
    /// `h_k = 3h_{k+1} − 3h_{k+2} + h_{k+3}`.
    pub fn check_recursion(&self) -> Vec<i64> {
        self.certified
            .iter()
            .copied()
            .filter(|&k| {
                let run: Option<Vec<i64>> =
                    (0..4).map(|i| self.certified.get(&(k + i)).and_then(|_| self.get(k + i))).collect();
                matches!(run, Some(h) if h[0] != 3 * h[1] - 3 * h[2] + h[3])
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("window vectors serialise")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Fill `h_k` from three adjacent values by the Koszul recursion. The new
/// value is advisory and left uncertified.
pub fn extend_window(wv: &WindowVector, k: i64) -> Result<WindowVector> {
    let mut out = wv.clone();
    if wv.get(k).is_some() {
        return Ok(out);
    }
    let above = (wv.get(k + 1), wv.get(k + 2), wv.get(k + 3));
    let below = (wv.get(k - 3), wv.get(k - 2), wv.get(k - 1));
    let h = match (above, below) {
        ((Some(a), Some(b), Some(c)), _) => 3 * a - 3 * b + c,
        (_, (Some(a), Some(b), Some(c))) => a - 3 * b + 3 * c,
        _ => return Err(Error::InsufficientWindow { target: k }),
    };
    out.values.insert(k, h);
    Ok(out)
}

/// Extend step by step until `[lo, hi]` is covered.
pub fn extend_to(wv: &WindowVector, lo: i64, hi: i64) -> Result<WindowVector> {
    let mut out = wv.clone();
    let (Some(&first), Some(&last)) = (wv.values.keys().next(), wv.values.keys().next_back()) else {
        return Err(Error::InsufficientWindow { target: lo });
    };
    for k in (last + 1)..=hi {
        out = extend_window(&out, k)?;
    }
    for k in (lo..first).rev() {
        out = extend_window(&out, k)?;
    }
    Ok(out)
}

/// Window vector over `[lo, hi]` certified by actual twists: every slot of
/// every heart the module is shown to lie in. Stops at the first refusal in
/// each direction.
pub fn certified_window(rep: &Representation, lo: i64, hi: i64) -> Result<WindowVector> {
    let mut w = WindowVector::from_module(rep);
    let mut cur = rep.clone();
    while cur.heart() + 2 < hi {
        match twist_up(&cur) {
            Ok(next) => {
                w.certify_module(&next);
                cur = next;
            }
            Err(Error::Membership { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    let mut cur = rep.clone();
    while cur.heart() > lo {
        match twist_down(&cur) {
            Ok(next) => {
                w.certify_module(&next);
                cur = next;
            }
            Err(Error::Membership { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{find_isomorphism, point_module, pushforward_module, simple_module};
    use crate::scalar::{rat, ratio};

    fn pt(x: [i64; 3], t: i64) -> Representation {
        point_module(x.map(rat), rat(t), 0).unwrap()
    }

    #[test]
    fn koszul_examples() {
        let p = pt([1, 1, 1], 1);
        let k = koszul_maps(&p).unwrap();
        assert_eq!(k.kappa2.shape(), (3, 3));
        assert_eq!(bareiss_rank(&k.kappa2), 2);
        let s0 = simple_module(0, 0).unwrap();
        let k = koszul_maps(&s0).unwrap();
        assert_eq!(k.kappa1.shape(), (1, 0));
        let o1 = pushforward_module(1, 0).unwrap();
        assert_eq!(bareiss_rank(&koszul_maps(&o1).unwrap().kappa1), 3);
    }

    #[test]
    fn membership_examples() {
        for heart in -2..3 {
            let p = point_module([rat(1), rat(2), rat(3)], ratio(1, 2), heart).unwrap();
            assert!(window_membership(&p, TwistDirection::Up).unwrap().member);
            assert!(window_membership(&p, TwistDirection::Down).unwrap().member);
        }
        let s0 = simple_module(0, 0).unwrap();
        let m = window_membership(&s0, TwistDirection::Up).unwrap();
        assert!(!m.member);
        assert!(m.diagnostics().contains("κ₁ not surjective"));
        assert!(window_membership(&pushforward_module(1, 0).unwrap(), TwistDirection::Up).unwrap().member);
        let s2 = simple_module(2, 0).unwrap();
        let m = window_membership(&s2, TwistDirection::Down).unwrap();
        assert!(!m.member);
        assert!(m.diagnostics().contains("λ₁ not injective"));
    }

    #[test]
    fn pushforward_membership_ranges() {
        for d in 0..4 {
            for n in 0..=d {
                let m = pushforward_module(d, n).unwrap();
                assert_eq!(window_membership(&m, TwistDirection::Up).unwrap().member, n < d, "d={d} n={n}");
                // i_*O(d) also lies in heart -1: its slots there are O(d+1), O(d), O(d-1).
                assert!(window_membership(&m, TwistDirection::Down).unwrap().member, "d={d} n={n}");
            }
            let below = twist_down(&pushforward_module(d, 0).unwrap()).unwrap();
            let shifted = pushforward_module(d + 1, 0).unwrap().with_heart(-1);
            assert!(find_isomorphism(&below, &shifted).unwrap().is_some(), "d={d}");
        }
    }

    #[test]
    fn twist_examples() {
        let p = pt([1, 2, 3], 2);
        let up = twist_up(&p).unwrap();
        assert_eq!(up.dims(), [1, 1, 1]);
        assert_eq!(up.heart(), 1);
        let back = twist_down(&up).unwrap();
        assert!(find_isomorphism(&p, &back).unwrap().is_some());

        let o1 = pushforward_module(1, 0).unwrap();
        let t = twist_up(&o1).unwrap();
        assert_eq!((t.dims(), t.heart()), ([1, 0, 0], 1));
        let down = twist_down(&pushforward_module(1, 1).unwrap()).unwrap();
        assert_eq!((down.dims(), down.heart()), ([3, 1, 0], 0));
        assert!(find_isomorphism(&down, &o1).unwrap().is_some());

        let s0 = simple_module(0, 0).unwrap();
        assert!(matches!(twist_up(&s0), Err(Error::Membership { target: 1, .. })));
    }

    #[test]
    fn twisted_pushforwards_match_constructor() {
        for d in 1..4 {
            for n in 0..d {
                let t = twist_up(&pushforward_module(d, n).unwrap()).unwrap();
                let direct = pushforward_module(d, n + 1).unwrap();
                assert_eq!(t.dims(), direct.dims());
                assert!(find_isomorphism(&t, &direct).unwrap().is_some(), "d={d} n={n}");
            }
        }
    }

    #[test]
    fn window_vectors() {
        let w = certified_window(&pt([1, 0, 0], 0), -8, 8).unwrap();
        assert!((-8..=8).all(|k| w.get(k) == Some(1) && w.certified.contains(&k)));
        assert!(w.check_recursion().is_empty());

        let o1 = WindowVector::from_module(&pushforward_module(1, 0).unwrap());
        assert_eq!(extend_window(&o1, 3).unwrap().get(3), Some(0));
        assert!(!extend_window(&o1, 3).unwrap().certified.contains(&3));

        let bad = WindowVector::from_values(0, &[1, 0, 0, 0], true);
        assert_eq!(bad.check_recursion(), vec![0]);
        assert!(matches!(extend_window(&WindowVector::from_values(0, &[1, 1], true), 5), Err(Error::InsufficientWindow { target: 5 })));

        let json = o1.to_json();
        assert_eq!(WindowVector::from_json(&json).unwrap(), o1);
    }

    #[test]
    fn extension_predicts_twisted_dims() {
        let o2 = pushforward_module(2, 0).unwrap();
        let w = extend_window(&WindowVector::from_module(&o2), 3).unwrap();
        let t = twist_up(&o2).unwrap();
        assert_eq!([1, 2, 3].map(|k| w.get(k).unwrap() as usize), t.dims());
    }
}
