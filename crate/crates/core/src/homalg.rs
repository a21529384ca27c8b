//! Hom complexes computing Ext between finite-dimensional modules.
//!
//! Y side: the four-term complex induced by the Ginzburg resolution,
//!
//! ```text
//!   ⊕_v Hom(M_v, N_v) → ⊕_x Hom(M_t(x), N_s(x)) → ⊕_x Hom(M_s(x), N_t(x)) → ⊕_v Hom(M_v, N_v)
//! ```
//!
//! with one degree-1 block per arrow `x: s → t` and one degree-2 block per
//! relation `∂W/∂x`. `d⁰` is the intertwiner defect, `d¹` linearises each
//! relation by the Leibniz rule, and `d²` is the signed dual of `d⁰`.
//! P² side: the three-term truncation with the `c` arrows removed and one
//! degree-2 block per Beilinson relation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::quiver::{QuiverPresentation, Side, VERTICES};
use crate::rank::rank;
use crate::rep::{p2_restrict, P2Representation, QuiverModule, Representation};
use crate::scalar::ScalarMode;

/// `Hom(M_source, N_target)`, stored as a row-major `n_target × m_source`
/// block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomBlock {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

impl HomBlock {
    pub fn dim(&self, m: [usize; 3], n: [usize; 3]) -> usize {
        m[self.source] * n[self.target]
    }
}

/// Block structure of each cohomological degree. Shared with the
/// determinant-character calculus so that numeric and symbolic sides read
/// the same layout.
pub fn term_layout(side: Side) -> Vec<Vec<HomBlock>> {
    let pres = QuiverPresentation::for_side(side);
    let vertex_blocks = || {
        VERTICES
            .iter()
            .map(|&v| HomBlock { label: format!("e{v}"), source: v, target: v })
            .collect::<Vec<_>>()
    };
    let arrow_blocks = pres
        .arrows
        .iter()
        .map(|a| HomBlock { label: a.name.clone(), source: a.target, target: a.source })
        .collect();
    let relation_blocks = pres
        .relations
        .iter()
        .map(|r| HomBlock { label: r.label.clone(), source: r.target, target: r.source })
        .collect();
    let mut layout = vec![vertex_blocks(), arrow_blocks, relation_blocks];
    if side == Side::Y {
        layout.push(vertex_blocks());
    }
    layout
}

#[derive(Clone, Debug)]
pub struct ComplexTerm {
    pub degree: usize,
    pub blocks: Vec<HomBlock>,
    pub dim: usize,
    offsets: Vec<usize>,
}

impl ComplexTerm {
    fn new(degree: usize, blocks: Vec<HomBlock>, m: [usize; 3], n: [usize; 3]) -> Self {
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for b in &blocks {
            offsets.push(dim);
            dim += b.dim(m, n);
        }
        ComplexTerm { degree, blocks, dim, offsets }
    }
}

#[derive(Clone, Debug)]
pub struct ExtComplex {
    pub side: Side,
    pub dims_m: [usize; 3],
    pub dims_n: [usize; 3],
    pub terms: Vec<ComplexTerm>,
    /// `differentials[i]` maps degree `i` to degree `i + 1`.
    pub differentials: Vec<Matrix>,
}

impl ExtComplex {
    pub fn term_dims(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.dim).collect()
    }

    pub fn ext_dims(&self, mode: ScalarMode) -> Result<ExtDims> {
        let ranks = self.differentials.iter().map(|d| rank(d, mode)).collect::<Result<Vec<_>>>()?;
        let dims = (0..self.terms.len())
            .map(|i| {
                let out = if i < ranks.len() { ranks[i] } else { 0 };
                let inc = if i > 0 { ranks[i - 1] } else { 0 };
                self.terms[i].dim - out - inc
            })
            .collect();
        Ok(ExtDims { side: self.side, dims })
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.terms.iter().map(|t| sign(t.degree) * t.dim as i64).sum()
    }
}

fn sign(degree: usize) -> i64 {
    if degree % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtDims {
    pub side: Side,
    pub dims: Vec<usize>,
}

impl ExtDims {
    pub fn alternating_sum(&self) -> i64 {
        self.dims.iter().enumerate().map(|(i, &d)| sign(i) * d as i64).sum()
    }
}

impl Serialize for Side {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Degree-0 differential: `(φ_v) ↦ (φ_s X^M_x − X^N_x φ_t)_x`.
pub fn intertwiner_defect<M: QuiverModule>(m: &M, n: &M) -> Matrix {
    let pres = m.presentation();
    let layout = term_layout(pres.side);
    let (md, nd) = (m.dims(), n.dims());
    let src = ComplexTerm::new(0, layout[0].clone(), md, nd);
    let dst = ComplexTerm::new(1, layout[1].clone(), md, nd);
    let mut d = Matrix::zeros(dst.dim, src.dim);
    for (x, a) in pres.arrows.iter().enumerate() {
        let row = dst.offsets[x];
        let (s, t) = (a.source, a.target);
        let right = Matrix::identity(nd[s]).kron(&m.arrow_matrix(x).transpose());
        d.add_block(row, src.offsets[s], &right);
        let left = n.arrow_matrix(x).kron(&Matrix::identity(md[t])).neg();
        d.add_block(row, src.offsets[t], &left);
    }
    d
}

/// Degree-1 differential: Leibniz linearisation of every relation.
fn relation_linearisation<M: QuiverModule>(m: &M, n: &M) -> Matrix {
    let pres = m.presentation();
    let layout = term_layout(pres.side);
    let (md, nd) = (m.dims(), n.dims());
    let src = ComplexTerm::new(1, layout[1].clone(), md, nd);
    let dst = ComplexTerm::new(2, layout[2].clone(), md, nd);
    let mut d = Matrix::zeros(dst.dim, src.dim);
    for (ri, rel) in pres.relations.iter().enumerate() {
        let row = dst.offsets[ri];
        for term in &rel.terms {
            let path = &term.path;
            for q in 0..path.len() {
                let y = path[q];
                let arrow = &pres.arrows[y];
                let right = if q == 0 {
                    Matrix::identity(md[arrow.target])
                } else {
                    m.path_matrix(&path[..q])
                };
                let left = if q + 1 == path.len() {
                    Matrix::identity(nd[arrow.source])
                } else {
                    n.path_matrix(&path[q + 1..])
                };
                let mut block = left.kron(&right.transpose());
                if term.coeff != 1 {
                    block = block.scale(&crate::scalar::rat(term.coeff));
                }
                d.add_block(row, src.offsets[y], &block);
            }
        }
    }
    d
}

/// Degree-2 differential of the Y-side complex:
/// `(χ_x) ↦ Σ_{s(x)=v} X^N_x χ_x − Σ_{t(x)=v} χ_x X^M_x`.
fn dual_defect<M: QuiverModule>(m: &M, n: &M) -> Matrix {
    let pres = m.presentation();
    let layout = term_layout(pres.side);
    let (md, nd) = (m.dims(), n.dims());
    let src = ComplexTerm::new(2, layout[2].clone(), md, nd);
    let dst = ComplexTerm::new(3, layout[3].clone(), md, nd);
    let mut d = Matrix::zeros(dst.dim, src.dim);
    for (ri, rel) in pres.relations.iter().enumerate() {
        let x = rel.derivative_of.expect("Y-side relations come from arrows");
        let a = &pres.arrows[x];
        let (s, t) = (a.source, a.target);
        let col = src.offsets[ri];
        let post = n.arrow_matrix(x).kron(&Matrix::identity(md[s]));
        d.add_block(dst.offsets[s], col, &post);
        let pre = Matrix::identity(nd[t]).kron(&m.arrow_matrix(x).transpose()).neg();
        d.add_block(dst.offsets[t], col, &pre);
    }
    d
}

fn build<M: QuiverModule>(m: &M, n: &M) -> Result<ExtComplex> {
    if m.heart() != n.heart() {
        return Err(Error::HeartMismatch(m.heart(), n.heart()));
    }
    let side = m.presentation().side;
    let (md, nd) = (m.dims(), n.dims());
    let terms: Vec<ComplexTerm> = term_layout(side)
        .into_iter()
        .enumerate()
        .map(|(deg, blocks)| ComplexTerm::new(deg, blocks, md, nd))
        .collect();
    let mut differentials = vec![intertwiner_defect(m, n), relation_linearisation(m, n)];
    if side == Side::Y {
        differentials.push(dual_defect(m, n));
    }
    for (i, pair) in differentials.windows(2).enumerate() {
        if !pair[1].mul(&pair[0]).is_zero() {
            return Err(Error::Postcondition(format!(
                "d{}∘d{} ≠ 0 on the {side} complex for dims {md:?}, {nd:?}",
                i + 1,
                i
            )));
        }
    }
    Ok(ExtComplex { side, dims_m: md, dims_n: nd, terms, differentials })
}

pub fn build_ext_complex_y(m: &Representation, n: &Representation) -> Result<ExtComplex> {
    build(m, n)
}

pub fn build_ext_complex_p2(m: &P2Representation, n: &P2Representation) -> Result<ExtComplex> {
    build(m, n)
}

pub fn ext_dims_y(m: &Representation, n: &Representation, mode: ScalarMode) -> Result<ExtDims> {
    build_ext_complex_y(m, n)?.ext_dims(mode)
}

pub fn ext_dims_p2(m: &P2Representation, n: &P2Representation, mode: ScalarMode) -> Result<ExtDims> {
    build_ext_complex_p2(m, n)?.ext_dims(mode)
}

/// `3[(m₀n₁ − m₁n₀) + (m₁n₂ − m₂n₁) + (m₂n₀ − m₀n₂)]`.
pub fn euler_form_y(m: [i64; 3], n: [i64; 3]) -> i64 {
    3 * ((m[0] * n[1] - m[1] * n[0]) + (m[1] * n[2] - m[2] * n[1]) + (m[2] * n[0] - m[0] * n[2]))
}

/// `Σ mᵢnᵢ − 3(m₁n₀ + m₂n₁) + 3m₂n₀`.
pub fn euler_form_p2(m: [i64; 3], n: [i64; 3]) -> i64 {
    let diag: i64 = (0..3).map(|i| m[i] * n[i]).sum();
    diag - 3 * (m[1] * n[0] + m[2] * n[1]) + 3 * m[2] * n[0]
}

pub fn dims_i64(d: [usize; 3]) -> [i64; 3] {
    d.map(|x| x as i64)
}

#[derive(Clone, Debug, Serialize)]
pub struct Cy3Report {
    pub forward: ExtDims,
    pub backward: ExtDims,
    pub ok: bool,
}

/// `e^i(M, N) = e^{3−i}(N, M)` for `i = 0..3`.
pub fn verify_cy3_duality(m: &Representation, n: &Representation, mode: ScalarMode) -> Result<Cy3Report> {
    let forward = ext_dims_y(m, n, mode)?;
    let backward = ext_dims_y(n, m, mode)?;
    let ok = (0..4).all(|i| forward.dims[i] == backward.dims[3 - i]);
    Ok(Cy3Report { forward, backward, ok })
}

#[derive(Clone, Debug, Serialize)]
pub struct TriangleReport {
    pub y: ExtDims,
    pub p2: ExtDims,
    pub predicted: Vec<usize>,
    pub holds: bool,
    /// Degrees where the prediction fails; connecting maps of the triangle
    /// may be nonzero there.
    pub flagged: Vec<usize>,
}

/// Compares `e^i_Y(M, M)` with `e^i_{P²}(πM, πM) + e^{3−i}_{P²}(πM, πM)`.
pub fn verify_pushforward_triangle(m: &Representation, mode: ScalarMode) -> Result<TriangleReport> {
    let y = ext_dims_y(m, m, mode)?;
    let pm = p2_restrict(m);
    let p2 = ext_dims_p2(&pm, &pm, mode)?;
    let at = |i: usize| p2.dims.get(i).copied().unwrap_or(0);
    let predicted: Vec<usize> = (0..4).map(|i| at(i) + at(3 - i)).collect();
    let flagged: Vec<usize> = (0..4).filter(|&i| predicted[i] != y.dims[i]).collect();
    Ok(TriangleReport { holds: flagged.is_empty(), y, p2, predicted, flagged })
}

/// Record printed by the `ext` command.
#[derive(Clone, Debug, Serialize)]
pub struct ExtReport {
    pub side: Side,
    #[serde(rename = "dims_M")]
    pub dims_m: [usize; 3],
    #[serde(rename = "dims_N")]
    pub dims_n: [usize; 3],
    pub term_dims: Vec<usize>,
    pub ext_dims: Vec<usize>,
    pub euler: i64,
    pub cy3_ok: Option<bool>,
}

pub fn ext_report_y(m: &Representation, n: &Representation, mode: ScalarMode) -> Result<ExtReport> {
    let cx = build_ext_complex_y(m, n)?;
    let ext = cx.ext_dims(mode)?;
    let cy3 = verify_cy3_duality(m, n, mode)?;
    Ok(ExtReport {
        side: Side::Y,
        dims_m: cx.dims_m,
        dims_n: cx.dims_n,
        term_dims: cx.term_dims(),
        euler: euler_form_y(dims_i64(cx.dims_m), dims_i64(cx.dims_n)),
        ext_dims: ext.dims,
        cy3_ok: Some(cy3.ok),
    })
}

pub fn ext_report_p2(m: &P2Representation, n: &P2Representation, mode: ScalarMode) -> Result<ExtReport> {
    let cx = build_ext_complex_p2(m, n)?;
    let ext = cx.ext_dims(mode)?;
    Ok(ExtReport {
        side: Side::P2,
        dims_m: cx.dims_m,
        dims_n: cx.dims_n,
        term_dims: cx.term_dims(),
        euler: euler_form_p2(dims_i64(cx.dims_m), dims_i64(cx.dims_n)),
        ext_dims: ext.dims,
        cy3_ok: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{point_module, pushforward_module, simple_module};
    use crate::scalar::rat;

    const R: ScalarMode = ScalarMode::Rational;

    fn pt(x: [i64; 3], t: i64) -> Representation {
        point_module(x.map(rat), rat(t), 0).unwrap()
    }

    #[test]
    fn term_dims_examples() {
        let s0 = simple_module(0, 0).unwrap();
        let c = build_ext_complex_y(&s0, &s0).unwrap();
        assert_eq!(c.term_dims(), vec![1, 0, 0, 1]);
        assert!(c.differentials.iter().all(|d| d.rows() * d.cols() == 0));
        let p = pt([1, 0, 0], 0);
        assert_eq!(build_ext_complex_y(&p, &p).unwrap().term_dims(), vec![3, 9, 9, 3]);
        let o1 = pushforward_module(1, 0).unwrap();
        assert_eq!(build_ext_complex_y(&o1, &o1).unwrap().term_dims(), vec![10, 9, 9, 10]);
    }

    #[test]
    fn p2_term_dims() {
        let s0 = p2_restrict(&simple_module(0, 0).unwrap());
        assert_eq!(build_ext_complex_p2(&s0, &s0).unwrap().term_dims(), vec![1, 0, 0]);
        let p = p2_restrict(&pt([1, 2, 0], 0));
        assert_eq!(build_ext_complex_p2(&p, &p).unwrap().term_dims(), vec![3, 6, 3]);
        let o1 = p2_restrict(&pushforward_module(1, 0).unwrap());
        assert_eq!(build_ext_complex_p2(&o1, &o1).unwrap().term_dims(), vec![10, 9, 0]);
    }

    #[test]
    fn zero_module_gives_zero_complex() {
        let z = Representation::zero(0);
        let e = ext_dims_y(&z, &z, R).unwrap();
        assert_eq!(e.dims, vec![0, 0, 0, 0]);
        let p = pt([1, 0, 0], 0);
        assert_eq!(ext_dims_y(&z, &p, R).unwrap().dims, vec![0, 0, 0, 0]);
    }

    #[test]
    fn heart_mismatch_is_rejected() {
        let a = simple_module(0, 0).unwrap();
        let b = simple_module(0, 1).unwrap();
        assert_eq!(build_ext_complex_y(&a, &b).unwrap_err(), Error::HeartMismatch(0, 1));
    }

    #[test]
    fn euler_forms() {
        assert_eq!(euler_form_y([1, 1, 1], [1, 1, 1]), 0);
        assert_eq!(euler_form_y([1, 0, 0], [3, 1, 0]), 3);
        assert_eq!(euler_form_y([3, 1, 0], [1, 0, 0]), -3);
        assert_eq!(euler_form_p2([1, 0, 0], [1, 0, 0]), 1);
        assert_eq!(euler_form_p2([1, 0, 0], [3, 1, 0]), 3);
        assert_eq!(euler_form_p2([3, 1, 0], [1, 0, 0]), 0);
    }

    #[test]
    fn layout_matches_closed_form_counts() {
        let m = [2, 5, 3];
        let n = [4, 1, 7];
        let y = term_layout(Side::Y);
        let dims: Vec<usize> = y.iter().map(|blocks| blocks.iter().map(|b| b.dim(m, n)).sum()).collect();
        assert_eq!(dims[0], dims[3]);
        let chi = dims[0] as i64 - dims[1] as i64 + dims[2] as i64 - dims[3] as i64;
        assert_eq!(chi, euler_form_y(dims_i64(m), dims_i64(n)));
        let p = term_layout(Side::P2);
        let dims: Vec<i64> = p.iter().map(|blocks| blocks.iter().map(|b| b.dim(m, n) as i64).sum()).collect();
        assert_eq!(dims[0] - dims[1] + dims[2], euler_form_p2(dims_i64(m), dims_i64(n)));
    }
}
