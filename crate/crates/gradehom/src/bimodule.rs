//! Bimodules over pairs of ungraded coefficient algebras, with tensor
//! products over the middle algebra. These feed the trivial extension and
//! truncated tensor algebra builders and the cotilting test, where the
//! coefficient algebra is the degree-zero part of a graded algebra and the
//! bimodule is one of its graded components or a dual.

use std::sync::Arc;

use crate::algebra::GradedAlgebra;
use crate::error::{GhError, GhResult};
use crate::field::Scalar;
use crate::matrix::Matrix;
use crate::module::{same_algebra, GradedModule};

/// A finite-dimensional (L, R)-bimodule given by its two action families on
/// a fixed basis. `left_act[b]` is the matrix of the left action of the b-th
/// basis element of L, `right_act[b]` of the right action of the b-th basis
/// element of R; the two families must commute with each other.
#[derive(Clone)]
pub struct Bimodule<K: Scalar> {
    left: Arc<GradedAlgebra<K>>,
    right: Arc<GradedAlgebra<K>>,
    dim: usize,
    left_act: Vec<Matrix<K>>,
    right_act: Vec<Matrix<K>>,
}

/// A tensor product C ⊗ C' over the middle algebra, presented as a quotient
/// of the full tensor space K^{dim C · dim C'}. The index pairing is
/// (u, v) ↦ u·dim C' + v; `proj` maps the full space onto the quotient basis
/// and `lift` is a section of it, so `proj · lift` is the identity.
pub struct TensorProduct<K: Scalar> {
    pub product: Bimodule<K>,
    pub proj: Matrix<K>,
    pub lift: Matrix<K>,
}

impl<K: Scalar> Bimodule<K> {
    pub fn new(
        left: Arc<GradedAlgebra<K>>,
        right: Arc<GradedAlgebra<K>>,
        dim: usize,
        left_act: Vec<Matrix<K>>,
        right_act: Vec<Matrix<K>>,
    ) -> GhResult<Self> {
        if left.field() != right.field() {
            return Err(GhError::Mismatch(
                "bimodule coefficient algebras live over different fields".into(),
            ));
        }
        if left_act.len() != left.dim() || right_act.len() != right.dim() {
            return Err(GhError::Invalid(format!(
                "bimodule action families have {} and {} matrices for algebras of dimension {} and {}",
                left_act.len(),
                right_act.len(),
                left.dim(),
                right.dim()
            )));
        }
        let spec = left.field();
        let check = |fam: &[Matrix<K>], side: &str| -> GhResult<Vec<Matrix<K>>> {
            fam.iter()
                .enumerate()
                .map(|(b, m)| {
                    if m.rows() != dim || m.cols() != dim {
                        return Err(GhError::Invalid(format!(
                            "{side} action of basis element {b} is {}x{}, expected {dim}x{dim}",
                            m.rows(),
                            m.cols()
                        )));
                    }
                    Ok(m.bind_field(&spec))
                })
                .collect()
        };
        let left_act = check(&left_act, "left")?;
        let right_act = check(&right_act, "right")?;
        Ok(Bimodule { left, right, dim, left_act, right_act })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_algebra(&self) -> &Arc<GradedAlgebra<K>> {
        &self.left
    }

    pub fn right_algebra(&self) -> &Arc<GradedAlgebra<K>> {
        &self.right
    }

    pub fn left_action(&self, b: usize) -> &Matrix<K> {
        &self.left_act[b]
    }

    pub fn right_action(&self, b: usize) -> &Matrix<K> {
        &self.right_act[b]
    }

    /// Matrix of the left action of an arbitrary element of L.
    pub fn left_action_elt(&self, x: &[K]) -> Matrix<K> {
        let mut m = Matrix::zero(self.dim, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                m = m.add(&self.left_act[i].scale(xi));
            }
        }
        m.bind_field(&self.left.field())
    }

    /// Matrix of the right action of an arbitrary element of R.
    pub fn right_action_elt(&self, x: &[K]) -> Matrix<K> {
        let mut m = Matrix::zero(self.dim, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                m = m.add(&self.right_act[i].scale(xi));
            }
        }
        m.bind_field(&self.right.field())
    }

    /// Check unitality, both module laws, and that the two actions commute.
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();
        let id = Matrix::<K>::identity(self.dim).bind_field(&self.left.field());
        if self.left_action_elt(self.left.unit()) != id {
            violations.push("left unit does not act as the identity".into());
        }
        if self.right_action_elt(self.right.unit()) != id {
            violations.push("right unit does not act as the identity".into());
        }
        for i in 0..self.left.dim() {
            for j in 0..self.left.dim() {
                let prod = self.left.mul_elts(&self.left.basis_elt(i), &self.left.basis_elt(j));
                if self.left_action_elt(&prod) != self.left_act[i].mul(&self.left_act[j]) {
                    violations.push(format!("left action breaks on basis pair ({i}, {j})"));
                }
            }
        }
        for i in 0..self.right.dim() {
            for j in 0..self.right.dim() {
                let prod = self.right.mul_elts(&self.right.basis_elt(i), &self.right.basis_elt(j));
                if self.right_action_elt(&prod) != self.right_act[j].mul(&self.right_act[i]) {
                    violations.push(format!("right action breaks on basis pair ({i}, {j})"));
                }
            }
        }
        for i in 0..self.left.dim() {
            for j in 0..self.right.dim() {
                if self.left_act[i].mul(&self.right_act[j]) != self.right_act[j].mul(&self.left_act[i])
                {
                    violations.push(format!("left action {i} does not commute with right action {j}"));
                }
            }
        }
        violations
    }

    /// The algebra itself, with multiplication as both actions.
    pub fn regular(lam: &Arc<GradedAlgebra<K>>) -> Self {
        let n = lam.dim();
        let left_act = (0..n).map(|b| lam.left_mult_matrix(&lam.basis_elt(b))).collect();
        let right_act = (0..n).map(|b| lam.right_mult_matrix(&lam.basis_elt(b))).collect();
        Bimodule { left: lam.clone(), right: lam.clone(), dim: n, left_act, right_act }
    }

    /// The linear dual of the algebra, with (λ·f·μ)(x) = f(μxλ). In the dual
    /// basis the left action of b is the transpose of right multiplication by
    /// b and the right action is the transpose of left multiplication.
    pub fn dual_regular(lam: &Arc<GradedAlgebra<K>>) -> Self {
        let n = lam.dim();
        let left_act =
            (0..n).map(|b| lam.right_mult_matrix(&lam.basis_elt(b)).transpose()).collect();
        let right_act =
            (0..n).map(|b| lam.left_mult_matrix(&lam.basis_elt(b)).transpose()).collect();
        Bimodule { left: lam.clone(), right: lam.clone(), dim: n, left_act, right_act }
    }

    pub fn zero(left: &Arc<GradedAlgebra<K>>, right: &Arc<GradedAlgebra<K>>) -> Self {
        Bimodule {
            left: left.clone(),
            right: right.clone(),
            dim: 0,
            left_act: vec![Matrix::zero(0, 0); left.dim()],
            right_act: vec![Matrix::zero(0, 0); right.dim()],
        }
    }

    /// Block-diagonal direct sum; all parts must share both coefficient
    /// algebras.
    pub fn direct_sum(parts: &[&Bimodule<K>]) -> GhResult<Self> {
        let first = parts.first().ok_or_else(|| {
            GhError::Invalid("direct sum of bimodules needs at least one summand".into())
        })?;
        for p in parts {
            if !same_algebra(&p.left, &first.left) || !same_algebra(&p.right, &first.right) {
                return Err(GhError::Mismatch(
                    "direct sum of bimodules over different coefficient algebras".into(),
                ));
            }
        }
        let dim = parts.iter().map(|p| p.dim).sum();
        let block = |pick: &dyn Fn(&Bimodule<K>) -> &Matrix<K>| -> Matrix<K> {
            let mut m = Matrix::zero(dim, dim);
            let mut off = 0;
            for p in parts {
                let b = pick(p);
                for i in 0..p.dim {
                    for j in 0..p.dim {
                        m[(off + i, off + j)] = b[(i, j)].clone();
                    }
                }
                off += p.dim;
            }
            m
        };
        let left_act = (0..first.left.dim()).map(|b| block(&|p| &p.left_act[b])).collect();
        let right_act = (0..first.right.dim()).map(|b| block(&|p| &p.right_act[b])).collect();
        Ok(Bimodule {
            left: first.left.clone(),
            right: first.right.clone(),
            dim,
            left_act,
            right_act,
        })
    }

    /// Forget the left action: the underlying right R-module, concentrated in
    /// degree 0. Only defined when R itself is concentrated in degree 0.
    pub fn graded_module_right(&self) -> GhResult<Arc<GradedModule<K>>> {
        if self.right.ell() != 0 {
            return Err(GhError::Unsupported(
                "underlying module of a bimodule needs an ungraded coefficient algebra".into(),
            ));
        }
        let action = self.right_act.iter().map(|m| vec![m.clone()]).collect();
        Ok(Arc::new(GradedModule::new(self.right.clone(), 0, vec![self.dim], action)?))
    }

    /// Forget the right action: the underlying left L-module, presented as a
    /// right module over the opposite algebra, concentrated in degree 0.
    pub fn graded_module_left(&self) -> GhResult<(Arc<GradedAlgebra<K>>, Arc<GradedModule<K>>)> {
        if self.left.ell() != 0 {
            return Err(GhError::Unsupported(
                "underlying module of a bimodule needs an ungraded coefficient algebra".into(),
            ));
        }
        let op = Arc::new(self.left.opposite());
        let action = self.left_act.iter().map(|m| vec![m.clone()]).collect();
        let module = Arc::new(GradedModule::new(op.clone(), 0, vec![self.dim], action)?);
        Ok((op, module))
    }

    /// Tensor product over the middle algebra: the full tensor space modulo
    /// the subspace spanned by (c·b) ⊗ c' − c ⊗ (b·c') for b running over a
    /// basis of the middle algebra. Returns the quotient bimodule together
    /// with the projection and a section of it.
    pub fn tensor_over(a: &Bimodule<K>, b: &Bimodule<K>) -> GhResult<TensorProduct<K>> {
        if !same_algebra(&a.right, &b.left) {
            return Err(GhError::Mismatch(
                "tensor product needs matching middle algebras".into(),
            ));
        }
        let spec = a.left.field();
        let (da, db) = (a.dim, b.dim);
        let full = da * db;
        let mid = a.right.dim();
        let mut rel_cols: Vec<Vec<K>> = Vec::new();
        for m in 0..mid {
            let ra = &a.right_act[m];
            let lb = &b.left_act[m];
            for u in 0..da {
                for v in 0..db {
                    let mut rel = vec![K::zero(); full];
                    for i in 0..da {
                        rel[i * db + v] = ra[(i, u)].clone();
                    }
                    for j in 0..db {
                        rel[u * db + j] = rel[u * db + j].clone() - lb[(j, v)].clone();
                    }
                    if rel.iter().any(|e| !e.is_zero()) {
                        rel_cols.push(rel);
                    }
                }
            }
        }
        let rel = Matrix::from_rows(rel_cols).transpose().bind_field(&spec);
        let (proj, free) = if rel.cols() == 0 {
            (Matrix::identity(full).bind_field(&spec), (0..full).collect())
        } else {
            rel.complement_projection()
        };
        let qdim = free.len();
        let mut lift = Matrix::zero(full, qdim);
        let one = K::one().bind(&spec);
        for (c, &fidx) in free.iter().enumerate() {
            lift[(fidx, c)] = one.clone();
        }
        let ib = Matrix::<K>::identity(db);
        let ia = Matrix::<K>::identity(da);
        let left_act = a
            .left_act
            .iter()
            .map(|l| proj.mul(&l.kronecker(&ib)).mul(&lift))
            .collect();
        let right_act = b
            .right_act
            .iter()
            .map(|r| proj.mul(&ia.kronecker(r)).mul(&lift))
            .collect();
        let product = Bimodule {
            left: a.left.clone(),
            right: b.right.clone(),
            dim: qdim,
            left_act,
            right_act,
        };
        Ok(TensorProduct { product, proj: proj.bind_field(&spec), lift: lift.bind_field(&spec) })
    }
}

/// A graded component A_d of a graded algebra as a bimodule over its
/// degree-zero part. Returns the degree-zero algebra together with the
/// component; the basis of the component follows the algebra's order on its
/// degree-d basis elements.
pub fn degree_slice<K: Scalar>(
    algebra: &Arc<GradedAlgebra<K>>,
    d: usize,
) -> GhResult<(Arc<GradedAlgebra<K>>, Bimodule<K>)> {
    let lam = Arc::new(algebra.degree_zero_algebra());
    let bim = degree_slice_over(&lam, algebra, d)?;
    Ok((lam, bim))
}

/// Degree-`d` slice as a bimodule over an already-built copy of the degree-0
/// subalgebra, so that slices of different degrees share one coefficient
/// algebra.
pub fn degree_slice_over<K: Scalar>(
    lam: &Arc<GradedAlgebra<K>>,
    algebra: &Arc<GradedAlgebra<K>>,
    d: usize,
) -> GhResult<Bimodule<K>> {
    let zero_basis = algebra.basis_of_degree(0).to_vec();
    let slice_basis = algebra.basis_of_degree(d).to_vec();
    let dim = slice_basis.len();
    let pos: std::collections::BTreeMap<usize, usize> =
        slice_basis.iter().enumerate().map(|(s, &g)| (g, s)).collect();
    let act = |flip: bool| -> GhResult<Vec<Matrix<K>>> {
        zero_basis
            .iter()
            .map(|&z| {
                let mut m = Matrix::zero(dim, dim);
                for (col, &g) in slice_basis.iter().enumerate() {
                    let prod =
                        if flip { algebra.mul_basis(g, z) } else { algebra.mul_basis(z, g) };
                    for (idx, coeff) in prod {
                        let row = *pos.get(idx).ok_or_else(|| {
                            GhError::Internal(
                                "product of graded components left the expected degree".into(),
                            )
                        })?;
                        m[(row, col)] = coeff.clone();
                    }
                }
                Ok(m)
            })
            .collect()
    };
    let left_act = act(false)?;
    let right_act = act(true)?;
    Bimodule::new(lam.clone(), lam.clone(), dim, left_act, right_act)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldSpec, Rat};
    use crate::module::graded_hom_deg;
    use crate::quiver::QuiverPresentation;
    use num_traits::Zero;

    fn path_a2() -> Arc<GradedAlgebra<Rat>> {
        let mut q = QuiverPresentation::new(vec!["1", "2"]);
        q.arrow("a", 0, 1, 0);
        Arc::new(q.compile(FieldSpec::Rationals).unwrap())
    }

    fn dual_numbers() -> Arc<GradedAlgebra<Rat>> {
        let mut q = QuiverPresentation::new(vec!["v"]);
        let x = q.arrow("x", 0, 0, 0);
        q.monomial_relation(vec![x, x]);
        Arc::new(q.compile(FieldSpec::Rationals).unwrap())
    }

    #[test]
    fn regular_and_dual_validate() {
        for lam in [path_a2(), dual_numbers()] {
            assert!(Bimodule::regular(&lam).validate().is_empty());
            assert!(Bimodule::dual_regular(&lam).validate().is_empty());
        }
    }

    #[test]
    fn unit_contraction_is_an_isomorphism() {
        let lam = path_a2();
        let c = Bimodule::dual_regular(&lam);
        let t = Bimodule::tensor_over(&Bimodule::regular(&lam), &c).unwrap();
        assert_eq!(t.product.dim(), c.dim());
        assert!(t.product.validate().is_empty());
        // columns are the classes of 1 ⊗ e_v
        let mut unit_cols = Matrix::zero(lam.dim() * c.dim(), c.dim());
        for (i, ui) in lam.unit().iter().enumerate() {
            for v in 0..c.dim() {
                unit_cols[(i * c.dim() + v, v)] = ui.clone();
            }
        }
        let m = t.proj.mul(&unit_cols);
        assert!(m.inverse().is_some());
        for b in 0..lam.dim() {
            assert_eq!(m.mul(c.left_action(b)), t.product.left_action(b).mul(&m));
            assert_eq!(m.mul(c.right_action(b)), t.product.right_action(b).mul(&m));
        }
    }

    #[test]
    fn dual_tensor_dual_over_path_algebra() {
        let lam = path_a2();
        let d = Bimodule::dual_regular(&lam);
        let t = Bimodule::tensor_over(&d, &d).unwrap();
        assert!(t.product.validate().is_empty());
        // the middle action glues the two dual copies down to a single class:
        // S_1 ⊗ D vanishes and the projective-injective contributes one line
        assert_eq!(t.product.dim(), 1);
        // independent count: ambient dimension minus the rank of the
        // relation span, with the relations listed directly
        let n = d.dim();
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for b in 0..lam.dim() {
            for u in 0..n {
                for v in 0..n {
                    let xu = d.right_action(b).col(u);
                    let yv = d.left_action(b).col(v);
                    let mut row = vec![Rat::zero(); n * n];
                    for (i, e) in xu.iter().enumerate() {
                        row[i * n + v] = row[i * n + v].clone() + e.clone();
                    }
                    for (j, e) in yv.iter().enumerate() {
                        row[u * n + j] = row[u * n + j].clone() - e.clone();
                    }
                    rows.push(row);
                }
            }
        }
        let rank = Matrix::from_rows(rows).rank();
        assert_eq!(n * n - rank, 1);
    }

    #[test]
    fn tensor_with_zero_vanishes() {
        let lam = path_a2();
        let z = Bimodule::zero(&lam, &lam);
        let t = Bimodule::tensor_over(&Bimodule::regular(&lam), &z).unwrap();
        assert_eq!(t.product.dim(), 0);
    }

    #[test]
    fn underlying_modules() {
        let lam = path_a2();
        let d = Bimodule::dual_regular(&lam);
        let right = d.graded_module_right().unwrap();
        assert_eq!(right.total_dim(), 3);
        // endomorphisms of the dual of the algebra as a one-sided module
        let endos = graded_hom_deg(&right, &right, 0).unwrap();
        assert_eq!(endos.len(), 3);
        let (_op, left) = d.graded_module_left().unwrap();
        assert_eq!(left.total_dim(), 3);
    }

    #[test]
    fn underlying_module_needs_ungraded_coefficients() {
        let mut q = QuiverPresentation::new(vec!["v"]);
        let x = q.arrow("x", 0, 0, 1);
        q.monomial_relation(vec![x, x]);
        let a = Arc::new(q.compile::<Rat>(FieldSpec::Rationals).unwrap());
        let err = Bimodule::regular(&a).graded_module_right().unwrap_err();
        assert!(matches!(err, GhError::Unsupported(_)));
    }

    #[test]
    fn direct_sum_blocks() {
        let lam = path_a2();
        let r = Bimodule::regular(&lam);
        let s = Bimodule::direct_sum(&[&r, &r]).unwrap();
        assert_eq!(s.dim(), 6);
        assert!(s.validate().is_empty());
    }

    #[test]
    fn tensor_over_a_field_is_the_full_tensor_space() {
        let q = QuiverPresentation::new(vec!["v"]);
        let k = Arc::new(q.compile::<Rat>(FieldSpec::Rationals).unwrap());
        let r = Bimodule::regular(&k);
        let c3 = Bimodule::direct_sum(&[&r, &r, &r]).unwrap();
        let t = Bimodule::tensor_over(&c3, &c3).unwrap();
        assert_eq!(t.product.dim(), 9);
        assert!(t.product.validate().is_empty());
    }

    #[test]
    fn degree_slice_of_truncated_polynomials() {
        let mut q = QuiverPresentation::new(vec!["v"]);
        let x = q.arrow("x", 0, 0, 1);
        q.monomial_relation(vec![x, x, x]);
        let a = Arc::new(q.compile::<Rat>(FieldSpec::Rationals).unwrap());
        let (lam, top) = degree_slice(&a, 2).unwrap();
        assert_eq!(lam.dim(), 1);
        assert_eq!(top.dim(), 1);
        assert!(top.validate().is_empty());
    }
}
