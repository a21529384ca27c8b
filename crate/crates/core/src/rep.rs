//! Finite-dimensional representations in a fixed heart, the constructor
//! library, and the JSON interchange format.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homalg;
use crate::matrix::Matrix;
use crate::quiver::{QuiverPresentation, Relation, Side};
use crate::rank::rank;
use crate::scalar::{format_fraction, parse_fraction, Rational, ScalarMode};

/// Common surface of Y-side and P²-side representations.
///
/// Slot `s` of a representation in heart `n` is `Hom(O(n + s), F)`; arrow
/// `x: s → t` acts by a `dims[s] × dims[t]` matrix, i.e. a map `V_t → V_s`.
pub trait QuiverModule {
    fn presentation(&self) -> &'static QuiverPresentation;
    fn heart(&self) -> i64;
    fn dims(&self) -> [usize; 3];
    fn matrices(&self) -> &[Matrix];
    fn label(&self) -> Option<&str>;

    fn arrow_matrix(&self, x: usize) -> &Matrix {
        &self.matrices()[x]
    }

    fn matrix_by_name(&self, name: &str) -> Result<&Matrix> {
        Ok(self.arrow_matrix(self.presentation().arrow_index(name)?))
    }

    /// Matrix of a written path: leftmost letter acts first.
    fn path_matrix(&self, path: &[usize]) -> Matrix {
        let pres = self.presentation();
        let start = pres.arrows[path[0]].target;
        let mut acc = Matrix::identity(self.dims()[start]);
        for &x in path {
            acc = self.arrow_matrix(x).mul(&acc);
        }
        acc
    }

    fn relation_matrix(&self, r: &Relation) -> Matrix {
        let d = self.dims();
        let mut out = Matrix::zeros(d[r.source], d[r.target]);
        for t in &r.terms {
            out.add_assign_scaled(&self.path_matrix(&t.path), t.coeff);
        }
        out
    }

    fn check_relations(&self) -> RelationCheck {
        let violated: Vec<String> = self
            .presentation()
            .relations
            .iter()
            .filter(|r| !self.relation_matrix(r).is_zero())
            .map(|r| r.label.clone())
            .collect();
        RelationCheck { ok: violated.is_empty(), violated }
    }

    fn is_zero_module(&self) -> bool {
        self.dims().iter().all(|&d| d == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub ok: bool,
    pub violated: Vec<String>,
}

fn validate_shapes(pres: &QuiverPresentation, dims: [usize; 3], matrices: &[Matrix]) -> Result<()> {
    if matrices.len() != pres.arrows.len() {
        return Err(Error::Shape(format!(
            "expected {} arrow matrices, got {}",
            pres.arrows.len(),
            matrices.len()
        )));
    }
    for (a, m) in pres.arrows.iter().zip(matrices) {
        let want = (dims[a.source], dims[a.target]);
        if m.shape() != want {
            return Err(Error::Shape(format!(
                "arrow {} must be {}x{}, got {}x{}",
                a.name,
                want.0,
                want.1,
                m.rows(),
                m.cols()
            )));
        }
    }
    Ok(())
}

macro_rules! module_type {
    ($name:ident, $side:expr) => {
        #[derive(Clone, Debug, PartialEq, Eq)]
        pub struct $name {
            heart: i64,
            dims: [usize; 3],
            matrices: Vec<Matrix>,
            label: Option<String>,
        }

        impl $name {
            /// Shape-checked constructor; relations are not checked here.
            pub fn new(heart: i64, dims: [usize; 3], matrices: Vec<Matrix>, label: Option<String>) -> Result<Self> {
                validate_shapes(QuiverPresentation::for_side($side), dims, &matrices)?;
                Ok($name { heart, dims, matrices, label })
            }

            pub fn zero(heart: i64) -> Self {
                let pres = QuiverPresentation::for_side($side);
                let matrices = pres.arrows.iter().map(|_| Matrix::zeros(0, 0)).collect();
                $name { heart, dims: [0; 3], matrices, label: None }
            }

            pub fn with_matrix(&self, name: &str, m: Matrix) -> Result<Self> {
                let x = self.presentation().arrow_index(name)?;
                let mut matrices = self.matrices.clone();
                matrices[x] = m;
                $name::new(self.heart, self.dims, matrices, self.label.clone())
            }

            pub fn with_label(mut self, label: impl Into<String>) -> Self {
                self.label = Some(label.into());
                self
            }

            pub fn with_heart(mut self, heart: i64) -> Self {
                self.heart = heart;
                self
            }

            pub fn direct_sum(&self, other: &Self) -> Result<Self> {
                if self.heart != other.heart {
                    return Err(Error::HeartMismatch(self.heart, other.heart));
                }
                let dims = [0, 1, 2].map(|i| self.dims[i] + other.dims[i]);
                let matrices = self
                    .matrices
                    .iter()
                    .zip(&other.matrices)
                    .map(|(a, b)| Matrix::block_diag(a, b))
                    .collect();
                let label = match (&self.label, &other.label) {
                    (Some(a), Some(b)) => Some(format!("{a} + {b}")),
                    _ => None,
                };
                Ok($name { heart: self.heart, dims, matrices, label })
            }
        }

        impl QuiverModule for $name {
            fn presentation(&self) -> &'static QuiverPresentation {
                QuiverPresentation::for_side($side)
            }
            fn heart(&self) -> i64 {
                self.heart
            }
            fn dims(&self) -> [usize; 3] {
                self.dims
            }
            fn matrices(&self) -> &[Matrix] {
                &self.matrices
            }
            fn label(&self) -> Option<&str> {
                self.label.as_deref()
            }
        }
    };
}

module_type!(Representation, Side::Y);
module_type!(P2Representation, Side::P2);

/// Dimension of global sections of O(m) on P².
pub fn h0_p2(m: i64) -> usize {
    if m < 0 {
        0
    } else {
        ((m + 1) * (m + 2) / 2) as usize
    }
}

/// Degree-`e` monomials in x0, x1, x2 as exponent triples, degree-lex with
/// x0 > x1 > x2.
pub fn monomials(e: i64) -> Vec<[u32; 3]> {
    if e < 0 {
        return Vec::new();
    }
    let e = e as u32;
    let mut out = Vec::new();
    for a in (0..=e).rev() {
        for b in (0..=e - a).rev() {
            out.push([a, b, e - a - b]);
        }
    }
    out
}

/// Multiplication by `x_var` from degree `e` forms to degree `e + 1` forms.
pub fn multiplication_matrix(e: i64, var: usize) -> Matrix {
    let src = monomials(e);
    let dst = monomials(e + 1);
    let mut m = Matrix::zeros(dst.len(), src.len());
    for (c, mono) in src.iter().enumerate() {
        let mut shifted = *mono;
        shifted[var] += 1;
        let r = dst.iter().position(|d| *d == shifted).expect("monomial of next degree");
        m[(r, c)] = Rational::one();
    }
    m
}

/// Skyscraper sheaf at the point with homogeneous coordinates `p` of the
/// zero section's plane and fiber coordinate `t`. The first nonzero
/// coordinate is scaled to 1.
pub fn point_module(p: [Rational; 3], t: Rational, heart: i64) -> Result<Representation> {
    let lead = p.iter().find(|x| !x.is_zero()).ok_or(Error::ZeroPoint)?.clone();
    let x = p.map(|c| c / &lead);
    let mut mats = Vec::with_capacity(9);
    for xi in &x {
        mats.push(Matrix::scalar(xi.clone()));
    }
    for xj in &x {
        mats.push(Matrix::scalar(xj.clone()));
    }
    for xk in &x {
        mats.push(Matrix::scalar(&t * xk));
    }
    let label = format!(
        "point({}:{}:{}; t={})",
        x[0],
        x[1],
        x[2],
        t
    );
    Representation::new(heart, [1, 1, 1], mats, Some(label))
}

/// `RHom(T^n, i_* O(d))` for the zero section `i: P² → Y`.
pub fn pushforward_module(d: i64, heart: i64) -> Result<Representation> {
    if heart < 0 || heart > d {
        return Err(Error::HeartOutOfRange {
            heart,
            reason: format!(
                "i_*O({d}) lies in hearts 0..={d} only; outside that range some H^i(O({d} - n - s)) with i > 0 is nonzero"
            ),
        });
    }
    let e = d - heart;
    let dims = [h0_p2(e), h0_p2(e - 1), h0_p2(e - 2)];
    let mut mats = Vec::with_capacity(9);
    for var in 0..3 {
        mats.push(multiplication_matrix(e - 1, var));
    }
    for var in 0..3 {
        mats.push(multiplication_matrix(e - 2, var));
    }
    for _ in 0..3 {
        mats.push(Matrix::zeros(dims[2], dims[0]));
    }
    Representation::new(heart, dims, mats, Some(format!("i_*O({d})")))
}

pub fn simple_module(vertex: usize, heart: i64) -> Result<Representation> {
    if vertex > 2 {
        return Err(Error::Shape(format!("vertex {vertex} does not exist")));
    }
    let mut dims = [0; 3];
    dims[vertex] = 1;
    let pres = QuiverPresentation::local_p2();
    let mats = pres.arrows.iter().map(|a| Matrix::zeros(dims[a.source], dims[a.target])).collect();
    Representation::new(heart, dims, mats, Some(format!("S{vertex}")))
}

pub fn direct_sum(a: &Representation, b: &Representation) -> Result<Representation> {
    a.direct_sum(b)
}

/// Forget the `c` arrows.
pub fn p2_restrict(rep: &Representation) -> P2Representation {
    P2Representation {
        heart: rep.heart,
        dims: rep.dims,
        matrices: rep.matrices[..6].to_vec(),
        label: rep.label.as_ref().map(|l| format!("pi_*({l})")),
    }
}

/// A morphism of representations: one linear map per vertex.
pub type Intertwiner = [Matrix; 3];

#[derive(Clone, Debug)]
pub struct HomSpace {
    pub dim: usize,
    pub basis: Vec<Intertwiner>,
}

/// Intertwiners `M → N`, as the kernel of the degree-0 differential.
pub fn hom_space<M: QuiverModule>(m: &M, n: &M) -> Result<HomSpace> {
    if m.heart() != n.heart() {
        return Err(Error::HeartMismatch(m.heart(), n.heart()));
    }
    let d0 = homalg::intertwiner_defect(m, n);
    let kernel = d0.kernel();
    let (md, nd) = (m.dims(), n.dims());
    let basis = (0..kernel.cols())
        .map(|c| {
            let mut offset = 0;
            [0, 1, 2].map(|v| {
                let (r, k) = (nd[v], md[v]);
                let entries = (0..r * k).map(|i| kernel[(offset + i, c)].clone()).collect();
                offset += r * k;
                Matrix::from_vec(r, k, entries)
            })
        })
        .collect::<Vec<_>>();
    Ok(HomSpace { dim: basis.len(), basis })
}

pub fn hom_dim<M: QuiverModule>(m: &M, n: &M, mode: ScalarMode) -> Result<usize> {
    if m.heart() != n.heart() {
        return Err(Error::HeartMismatch(m.heart(), n.heart()));
    }
    let d0 = homalg::intertwiner_defect(m, n);
    Ok(d0.cols() - rank(&d0, mode)?)
}

/// Searches the Hom space for an invertible intertwiner. Candidates are the
/// basis elements followed by a few fixed integer combinations; success is a
/// certificate of isomorphism, failure is reported as `false`.
pub fn find_isomorphism<M: QuiverModule>(m: &M, n: &M) -> Result<Option<Intertwiner>> {
    if m.dims() != n.dims() {
        return Ok(None);
    }
    let hom = hom_space(m, n)?;
    let is_invertible = |phi: &Intertwiner| phi.iter().all(|b| b.rank_rref() == b.rows());
    let mut candidates: Vec<Intertwiner> = hom.basis.clone();
    for seed in 1..=4i64 {
        let mut acc: Intertwiner = m.dims().map(|d| Matrix::zeros(d, d));
        for (k, b) in hom.basis.iter().enumerate() {
            let w = Rational::from_integer(((seed * 7 + k as i64 * 13) % 11 + 1).into());
            for v in 0..3 {
                acc[v] = acc[v].add(&b[v].scale(&w));
            }
        }
        candidates.push(acc);
    }
    Ok(candidates.into_iter().find(is_invertible))
}

/// On-disk form of a representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleFile {
    pub heart: i64,
    pub dims: [usize; 3],
    /// Arrow name to row-major entries, each a `p/q` string.
    pub matrices: BTreeMap<String, Vec<String>>,
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyModule {
    Y(Representation),
    P2(P2Representation),
}

impl ModuleFile {
    pub fn from_module<M: QuiverModule>(m: &M) -> Self {
        let pres = m.presentation();
        let matrices = pres
            .arrows
            .iter()
            .zip(m.matrices())
            .map(|(a, mat)| (a.name.clone(), mat.data().iter().map(format_fraction).collect()))
            .collect();
        ModuleFile { heart: m.heart(), dims: m.dims(), matrices, label: m.label().map(str::to_string) }
    }

    fn matrices_for(&self, pres: &QuiverPresentation) -> Result<Vec<Matrix>> {
        pres.arrows
            .iter()
            .map(|a| {
                let entries = self
                    .matrices
                    .get(&a.name)
                    .ok_or_else(|| Error::Parse(format!("missing matrix for arrow {}", a.name)))?;
                let (r, c) = (self.dims[a.source], self.dims[a.target]);
                if entries.len() != r * c {
                    return Err(Error::Shape(format!(
                        "arrow {} needs {} entries for a {r}x{c} matrix, found {}",
                        a.name,
                        r * c,
                        entries.len()
                    )));
                }
                let data = entries.iter().map(|s| parse_fraction(s)).collect::<Result<Vec<_>>>()?;
                Ok(Matrix::from_vec(r, c, data))
            })
            .collect()
    }

    /// A file with all nine arrows is a Y-side module; one with only the `a`
    /// and `b` arrows is a P²-side module.
    pub fn to_module(&self) -> Result<AnyModule> {
        let y = QuiverPresentation::local_p2();
        for name in self.matrices.keys() {
            y.arrow_index(name)?;
        }
        let has_c = ["c1", "c2", "c3"].iter().filter(|c| self.matrices.contains_key(**c)).count();
        match has_c {
            3 => Ok(AnyModule::Y(Representation::new(
                self.heart,
                self.dims,
                self.matrices_for(y)?,
                self.label.clone(),
            )?)),
            0 => Ok(AnyModule::P2(P2Representation::new(
                self.heart,
                self.dims,
                self.matrices_for(QuiverPresentation::beilinson())?,
                self.label.clone(),
            )?)),
            _ => Err(Error::Parse("either all or none of c1, c2, c3 must be present".into())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("module files serialise")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn pt(x: [i64; 3], t: i64) -> Representation {
        point_module(x.map(rat), rat(t), 0).unwrap()
    }

    #[test]
    fn point_modules() {
        let p = pt([1, 0, 0], 0);
        assert_eq!(p.dims(), [1, 1, 1]);
        assert_eq!(p.matrix_by_name("a1").unwrap(), &Matrix::from_i64(1, 1, &[1]));
        assert!(p.matrix_by_name("a2").unwrap().is_zero());
        assert!(p.matrix_by_name("c1").unwrap().is_zero());
        assert!(p.check_relations().ok);
        let q = pt([1, 1, 1], 1);
        assert!(q.matrices().iter().all(|m| m == &Matrix::from_i64(1, 1, &[1])));
        assert!(q.check_relations().ok);
        assert_eq!(point_module([rat(0), rat(0), rat(0)], rat(1), 0), Err(Error::ZeroPoint));
    }

    #[test]
    fn point_chart_normalisation() {
        let p = point_module([rat(0), rat(2), rat(4)], ratio(1, 3), 2).unwrap();
        assert_eq!(p.matrix_by_name("a2").unwrap(), &Matrix::from_i64(1, 1, &[1]));
        assert_eq!(p.matrix_by_name("a3").unwrap(), &Matrix::from_i64(1, 1, &[2]));
        assert_eq!(p.matrix_by_name("c3").unwrap()[(0, 0)], ratio(2, 3));
        assert_eq!(p.heart(), 2);
    }

    #[test]
    fn pushforward_dims_follow_h0() {
        assert_eq!(h0_p2(0), 1);
        assert_eq!(h0_p2(2), 6);
        assert_eq!(h0_p2(-1), 0);
        assert_eq!(pushforward_module(0, 0).unwrap().dims(), [1, 0, 0]);
        assert_eq!(pushforward_module(1, 0).unwrap().dims(), [3, 1, 0]);
        assert_eq!(pushforward_module(2, 0).unwrap().dims(), [6, 3, 1]);
        assert_eq!(pushforward_module(1, 1).unwrap().dims(), [1, 0, 0]);
        assert!(matches!(pushforward_module(1, 2), Err(Error::HeartOutOfRange { .. })));
        assert!(matches!(pushforward_module(1, -1), Err(Error::HeartOutOfRange { .. })));
    }

    #[test]
    fn pushforward_linear_forms() {
        let m = pushforward_module(1, 0).unwrap();
        for i in 0..3 {
            let mut col = Matrix::zeros(3, 1);
            col[(i, 0)] = rat(1);
            assert_eq!(m.arrow_matrix(i), &col, "A_{}", i + 1);
        }
        for d in 0..5 {
            assert!(pushforward_module(d, 0).unwrap().check_relations().ok);
        }
    }

    #[test]
    fn monomial_order_is_degree_lex() {
        assert_eq!(monomials(1), vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(monomials(2)[..3], [[2, 0, 0], [1, 1, 0], [1, 0, 1]]);
        assert_eq!(monomials(3).len(), 10);
    }

    #[test]
    fn broken_relations_are_reported() {
        let m = pushforward_module(1, 0).unwrap();
        let m2 = pushforward_module(2, 0).unwrap();
        // Replacing A1 in O(2) by a matrix that does not commute with the
        // other multiplications breaks the Beilinson relations.
        let mut a1 = m2.matrix_by_name("a1").unwrap().clone();
        a1[(5, 1)] = rat(1);
        let bad = m2.with_matrix("a1", a1).unwrap();
        let check = bad.check_relations();
        assert!(!check.ok);
        assert!(check.violated.iter().any(|l| l.starts_with("dW/dc")));
        assert!(matches!(m.with_matrix("a1", Matrix::zeros(2, 2)), Err(Error::Shape(_))));
    }

    #[test]
    fn simples_and_sums() {
        assert_eq!(simple_module(0, 0).unwrap().dims(), [1, 0, 0]);
        assert_eq!(simple_module(1, 0).unwrap().dims(), [0, 1, 0]);
        let s2 = simple_module(2, 5).unwrap();
        assert_eq!((s2.dims(), s2.heart()), ([0, 0, 1], 5));
        let s0 = simple_module(0, 0).unwrap();
        assert_eq!(direct_sum(&s0, &s0).unwrap().dims(), [2, 0, 0]);
        let pq = direct_sum(&pt([1, 0, 0], 0), &pt([1, 1, 1], 1)).unwrap();
        assert_eq!(pq.dims(), [2, 2, 2]);
        assert!(pq.check_relations().ok);
        assert_eq!(pq.matrix_by_name("a2").unwrap(), &Matrix::from_i64(2, 2, &[0, 0, 0, 1]));
        let s0h1 = simple_module(0, 1).unwrap();
        assert_eq!(direct_sum(&s0, &s0h1), Err(Error::HeartMismatch(0, 1)));
        assert!(Representation::zero(0).check_relations().ok);
    }

    #[test]
    fn hom_spaces() {
        let p = pt([1, 2, 3], 1);
        assert_eq!(hom_space(&p, &p).unwrap().dim, 1);
        assert_eq!(hom_space(&p, &pt([1, 2, 3], 2)).unwrap().dim, 0);
        assert_eq!(hom_space(&p, &pt([1, 1, 3], 1)).unwrap().dim, 0);
        let s0 = simple_module(0, 0).unwrap();
        let o1 = pushforward_module(1, 0).unwrap();
        let h = hom_space(&s0, &o1).unwrap();
        assert_eq!(h.dim, 3);
        assert_eq!(h.basis[0][0].shape(), (3, 1));
        assert_eq!(hom_dim(&s0, &o1, ScalarMode::Prime(2147483659)).unwrap(), 3);
        assert!(hom_space(&s0, &simple_module(0, 1).unwrap()).is_err());
    }

    #[test]
    fn p2_restriction() {
        let p = point_module([rat(1), rat(2), rat(0)], rat(7), 0).unwrap();
        let r = p2_restrict(&p);
        assert_eq!(r.dims(), p.dims());
        assert_eq!(r.matrices(), &p.matrices()[..6]);
        assert!(r.check_relations().ok);
        let o1 = p2_restrict(&pushforward_module(1, 0).unwrap());
        assert_eq!(o1.dims(), [3, 1, 0]);
        assert_eq!(p2_restrict(&simple_module(1, 0).unwrap()).dims(), [0, 1, 0]);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let p = point_module([rat(1), ratio(-2, 3), rat(5)], ratio(7, 2), -1).unwrap();
        let file = ModuleFile::from_module(&p);
        let text = file.to_json();
        let back = ModuleFile::from_json(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_json(), text);
        assert_eq!(back.to_module().unwrap(), AnyModule::Y(p.clone()));
        let p2 = p2_restrict(&p);
        let f2 = ModuleFile::from_module(&p2);
        assert_eq!(f2.to_module().unwrap(), AnyModule::P2(p2));
    }

    #[test]
    fn json_rejects_bad_input() {
        let mut f = ModuleFile::from_module(&pt([1, 0, 0], 0));
        f.matrices.remove("c2");
        assert!(matches!(f.to_module(), Err(Error::Parse(_))));
        let mut f = ModuleFile::from_module(&pt([1, 0, 0], 0));
        f.matrices.insert("a1".into(), vec!["1/1".into(), "0/1".into()]);
        assert!(matches!(f.to_module(), Err(Error::Shape(_))));
        let mut f = ModuleFile::from_module(&pt([1, 0, 0], 0));
        f.matrices.insert("a1".into(), vec!["0.5".into()]);
        assert!(matches!(f.to_module(), Err(Error::Parse(_))));
    }
}
