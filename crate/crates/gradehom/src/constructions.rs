//! Builders that manufacture new graded algebras from old ones: trivial
//! extensions and truncated tensor algebras over a degree-zero coefficient
//! algebra, Veronese and quasi-Veronese regradings, the Beilinson
//! endomorphism algebra of the canonical tilting module, and tensor and
//! Segre products. Every builder propagates the idempotent set and, when the
//! radical of the input is available, a radical hint for the degree-zero
//! part of the output, so homological machinery keeps working over prime
//! fields.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{dense_to_sparse, GradedAlgebra, SparseVec};
use crate::bimodule::{Bimodule, TensorProduct};
use crate::error::{GhError, GhResult};
use crate::field::Scalar;
use crate::matrix::{coords_in_span, Matrix};
use crate::module::{direct_sum, graded_hom_deg, same_algebra, GradedModule, ModuleMap};

/// The trivial extension Λ ⋉ C of a degree-zero algebra by a bimodule over
/// it, graded with Λ in degree 0 and C in degree 1 and product
/// (λ, c)(λ', c') = (λλ', λc' + cλ').
pub fn trivial_extension<K: Scalar>(
    lam: &Arc<GradedAlgebra<K>>,
    c: &Bimodule<K>,
) -> GhResult<Arc<GradedAlgebra<K>>> {
    if lam.ell() != 0 {
        return Err(GhError::Invalid(
            "trivial extension needs a coefficient algebra concentrated in degree 0".into(),
        ));
    }
    if !same_algebra(c.left_algebra(), lam) || !same_algebra(c.right_algebra(), lam) {
        return Err(GhError::Mismatch(
            "trivial extension needs a bimodule over the coefficient algebra on both sides".into(),
        ));
    }
    if c.dim() == 0 {
        return Err(GhError::Invalid(
            "trivial extension by the zero bimodule has no degree-1 part".into(),
        ));
    }
    let nl = lam.dim();
    let nc = c.dim();
    let dim = nl + nc;
    let mut names = lam.names().to_vec();
    names.extend((0..nc).map(|u| format!("c{u}")));
    let mut degrees = vec![0; nl];
    degrees.extend(std::iter::repeat(1).take(nc));
    let mut unit = lam.unit().to_vec();
    unit.resize(dim, K::zero());
    let offset =
        |v: SparseVec<K>| -> SparseVec<K> { v.into_iter().map(|(w, x)| (nl + w, x)).collect() };
    let mut mult: Vec<Vec<SparseVec<K>>> = vec![vec![Vec::new(); dim]; dim];
    for i in 0..nl {
        for j in 0..nl {
            mult[i][j] = lam.mul_basis(i, j).clone();
        }
        for v in 0..nc {
            mult[i][nl + v] = offset(dense_to_sparse(&c.left_action(i).col(v)));
        }
    }
    for u in 0..nc {
        for j in 0..nl {
            mult[nl + u][j] = offset(dense_to_sparse(&c.right_action(j).col(u)));
        }
    }
    let idempotents = lam
        .idempotents()
        .iter()
        .map(|e| {
            let mut v = e.clone();
            v.resize(dim, K::zero());
            v
        })
        .collect();
    let mut out = GradedAlgebra::from_sparse(lam.field(), names, degrees, unit, mult, idempotents)?;
    if let Ok(r0) = lam.radical0() {
        let hint = r0
            .into_iter()
            .map(|mut v| {
                v.resize(dim, K::zero());
                v
            })
            .collect();
        out = out.with_radical0_hint(hint);
    }
    Ok(Arc::new(out))
}

/// The tensor algebra of C over Λ cut off above degree ℓ:
/// Λ ⊕ C ⊕ C ⊗_Λ C ⊕ … with the i-fold tensor power in degree i and every
/// product reaching past degree ℓ set to zero.
pub fn truncated_tensor<K: Scalar>(
    lam: &Arc<GradedAlgebra<K>>,
    c: &Bimodule<K>,
    ell: usize,
) -> GhResult<Arc<GradedAlgebra<K>>> {
    if lam.ell() != 0 {
        return Err(GhError::Invalid(
            "truncated tensor algebra needs a coefficient algebra concentrated in degree 0".into(),
        ));
    }
    if !same_algebra(c.left_algebra(), lam) || !same_algebra(c.right_algebra(), lam) {
        return Err(GhError::Mismatch(
            "truncated tensor algebra needs a bimodule over the coefficient algebra on both sides"
                .into(),
        ));
    }
    if ell == 0 {
        return Err(GhError::Invalid(
            "truncated tensor algebra needs top degree at least 1".into(),
        ));
    }
    if c.dim() == 0 {
        return Err(GhError::Invalid(
            "truncated tensor algebra over the zero bimodule has no degree-1 part".into(),
        ));
    }
    // tensor power chain: powers[i] = C^{⊗i}; links[i-1] presents powers[i]
    // as a quotient of powers[i-1] ⊗ C for i ≥ 2
    let mut powers: Vec<Bimodule<K>> = vec![Bimodule::regular(lam), c.clone()];
    let mut links: Vec<TensorProduct<K>> = Vec::new();
    for i in 1..ell {
        let link = Bimodule::tensor_over(&powers[i], c)?;
        powers.push(link.product.clone());
        links.push(link);
    }
    let dims: Vec<usize> = powers.iter().map(Bimodule::dim).collect();
    let mut offs = vec![0usize];
    for d in &dims {
        offs.push(offs.last().unwrap() + d);
    }
    let dim = *offs.last().unwrap();

    // pairing matrices mu[(i, j)] computing the product of a degree-i and a
    // degree-j element, with the pair (u, v) flattened to u·dims[j] + v
    let mut mu: BTreeMap<(usize, usize), Matrix<K>> = BTreeMap::new();
    for i in 0..=ell {
        let right = Matrix::from_fn(dims[i], dims[i] * dims[0], |w, col| {
            let (u, b) = (col / dims[0], col % dims[0]);
            powers[i].right_action(b)[(w, u)].clone()
        });
        mu.insert((i, 0), right);
    }
    for j in 1..=ell {
        let left = Matrix::from_fn(dims[j], dims[0] * dims[j], |w, col| {
            let (b, v) = (col / dims[j], col % dims[j]);
            powers[j].left_action(b)[(w, v)].clone()
        });
        mu.insert((0, j), left);
    }
    for i in 1..ell {
        mu.insert((i, 1), links[i - 1].proj.clone());
    }
    let ic = Matrix::<K>::identity(dims[1]);
    for j in 2..=ell {
        for i in 1..=ell.saturating_sub(j) {
            // multiply t ⊗ t' by lifting t' into C^{⊗(j-1)} ⊗ C, folding the
            // left factors, and projecting the final C back in
            let lifted = Matrix::<K>::identity(dims[i]).kronecker(&links[j - 2].lift);
            let partial = mu[&(i, j - 1)].kronecker(&ic);
            mu.insert((i, j), mu[&(i + j - 1, 1)].mul(&partial).mul(&lifted));
        }
    }

    let mut mult: Vec<Vec<SparseVec<K>>> = vec![vec![Vec::new(); dim]; dim];
    for i in 0..=ell {
        for j in 0..=ell {
            if i + j > ell {
                continue;
            }
            let pairing = &mu[&(i, j)];
            for u in 0..dims[i] {
                for v in 0..dims[j] {
                    let col = pairing.col(u * dims[j] + v);
                    mult[offs[i] + u][offs[j] + v] = dense_to_sparse(&col)
                        .into_iter()
                        .map(|(w, x)| (offs[i + j] + w, x))
                        .collect();
                }
            }
        }
    }

    let mut names = lam.names().to_vec();
    for i in 1..=ell {
        names.extend((0..dims[i]).map(|u| format!("t{i}_{u}")));
    }
    let mut degrees = Vec::with_capacity(dim);
    for (i, d) in dims.iter().enumerate() {
        degrees.extend(std::iter::repeat(i).take(*d));
    }
    let mut unit = lam.unit().to_vec();
    unit.resize(dim, K::zero());
    let idempotents = lam
        .idempotents()
        .iter()
        .map(|e| {
            let mut v = e.clone();
            v.resize(dim, K::zero());
            v
        })
        .collect();
    let mut out = GradedAlgebra::from_sparse(lam.field(), names, degrees, unit, mult, idempotents)?;
    if let Ok(r0) = lam.radical0() {
        let hint = r0
            .into_iter()
            .map(|mut v| {
                v.resize(dim, K::zero());
                v
            })
            .collect();
        out = out.with_radical0_hint(hint);
    }
    Ok(Arc::new(out))
}

/// The n-th Veronese subalgebra: the basis elements of degree divisible by n
/// with degrees divided by n.
pub fn veronese<K: Scalar>(
    a: &Arc<GradedAlgebra<K>>,
    n: usize,
) -> GhResult<Arc<GradedAlgebra<K>>> {
    if n == 0 {
        return Err(GhError::Invalid("Veronese subalgebra needs a positive step".into()));
    }
    let keep: Vec<usize> = (0..a.dim()).filter(|&b| a.degree(b) % n == 0).collect();
    let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(s, &b)| (b, s)).collect();
    let names = keep.iter().map(|&b| a.name(b).to_string()).collect();
    let degrees = keep.iter().map(|&b| a.degree(b) / n).collect();
    let unit = keep.iter().map(|&b| a.unit()[b].clone()).collect();
    let mult = keep
        .iter()
        .map(|&i| {
            keep.iter()
                .map(|&j| {
                    // products of kept elements live in degrees that are
                    // again divisible by n, so every target index is kept
                    a.mul_basis(i, j).iter().map(|(w, x)| (pos[w], x.clone())).collect()
                })
                .collect()
        })
        .collect();
    let idempotents = a
        .idempotents()
        .iter()
        .map(|e| keep.iter().map(|&b| e[b].clone()).collect())
        .collect();
    let mut out = GradedAlgebra::from_sparse(a.field(), names, degrees, unit, mult, idempotents)?;
    if let Ok(r0) = a.radical0() {
        out = out.with_radical0_hint(
            r0.iter().map(|r| keep.iter().map(|&b| r[b].clone()).collect()).collect(),
        );
    }
    Ok(Arc::new(out))
}

/// The quasi-Veronese algebra of A concentrated in degrees 0 and 1, together
/// with the transporter sending graded A-modules to modules over it. The
/// degree-d part is the block matrix (A_{dℓ+j-i})_{i,j}; a basis element is
/// labeled by its blocks (i, j) and a basis element b of A_{dℓ+j-i}, and two
/// labels multiply by matching inner block indices and multiplying in A.
pub struct QuasiVeronese<K: Scalar> {
    algebra: Arc<GradedAlgebra<K>>,
    source: Arc<GradedAlgebra<K>>,
    entries: Vec<(usize, usize, usize, usize)>,
}

impl<K: Scalar> QuasiVeronese<K> {
    pub fn algebra(&self) -> &Arc<GradedAlgebra<K>> {
        &self.algebra
    }

    pub fn source(&self) -> &Arc<GradedAlgebra<K>> {
        &self.source
    }

    /// The image of a graded module: slot r stacks the components of
    /// degrees rℓ, …, rℓ+ℓ-1, and the label (d; i, j, b) acts from sub-block
    /// i of slot r into sub-block j of slot r+d through the action of b.
    pub fn transport(&self, m: &Arc<GradedModule<K>>) -> GhResult<Arc<GradedModule<K>>> {
        if !same_algebra(m.algebra(), &self.source) {
            return Err(GhError::Mismatch(
                "transport needs a module over the source algebra".into(),
            ));
        }
        if m.is_zero() {
            return Ok(Arc::new(GradedModule::zero_module(self.algebra.clone())));
        }
        let ell = self.source.ell() as i64;
        let rmin = m.min_degree().div_euclid(ell);
        let rmax = m.max_degree().div_euclid(ell);
        let nslots = (rmax - rmin + 1) as usize;
        let off = |r: i64, s: usize| -> usize {
            (0..s as i64).map(|s2| m.dim_at(r * ell + s2)).sum()
        };
        let dims: Vec<usize> = (rmin..=rmax)
            .map(|r| (0..ell).map(|s| m.dim_at(r * ell + s)).sum())
            .collect();
        let mut action: Vec<Vec<Matrix<K>>> = Vec::with_capacity(self.entries.len());
        for &(d, i, j, b) in &self.entries {
            let mut fam = Vec::with_capacity(nslots);
            for (slot, r) in (rmin..=rmax).enumerate() {
                let tr = r + d as i64;
                let trows = if tr > rmax { 0 } else { dims[(tr - rmin) as usize] };
                let mut placed = Matrix::zero(trows, dims[slot]);
                if trows > 0 {
                    let block = m.act(b, r * ell + i as i64);
                    let (ro, co) = (off(tr, j), off(r, i));
                    for bi in 0..block.rows() {
                        for bj in 0..block.cols() {
                            placed[(ro + bi, co + bj)] = block[(bi, bj)].clone();
                        }
                    }
                }
                fam.push(placed);
            }
            action.push(fam);
        }
        Ok(Arc::new(GradedModule::new(self.algebra.clone(), rmin, dims, action)?))
    }
}

pub fn quasi_veronese<K: Scalar>(a: &Arc<GradedAlgebra<K>>) -> GhResult<QuasiVeronese<K>> {
    let ell = a.ell();
    if ell == 0 {
        return Err(GhError::Invalid("quasi-Veronese needs a positive top degree".into()));
    }
    let mut entries = Vec::new();
    for d in 0..=1usize {
        for i in 0..ell {
            for j in 0..ell {
                let deg = (d * ell + j) as i64 - i as i64;
                if deg < 0 || deg > ell as i64 {
                    continue;
                }
                for &b in a.basis_of_degree(deg as usize) {
                    entries.push((d, i, j, b));
                }
            }
        }
    }
    let index: BTreeMap<(usize, usize, usize, usize), usize> =
        entries.iter().enumerate().map(|(t, &e)| (e, t)).collect();
    let dim = entries.len();
    let names = entries
        .iter()
        .map(|&(_, i, j, b)| format!("[{i},{j}]{}", a.name(b)))
        .collect();
    let degrees = entries.iter().map(|&(d, _, _, _)| d).collect();
    let mut unit = vec![K::zero(); dim];
    for i in 0..ell {
        for &b in a.basis_of_degree(0) {
            unit[index[&(0, i, i, b)]] = a.unit()[b].clone();
        }
    }
    let mut mult: Vec<Vec<SparseVec<K>>> = vec![vec![Vec::new(); dim]; dim];
    for (s, &(d1, i, k, b)) in entries.iter().enumerate() {
        for (t, &(d2, k2, j, c)) in entries.iter().enumerate() {
            if k != k2 {
                continue;
            }
            // nonzero products of label degrees d1, d2 stay within degree
            // d1+d2 ≤ 1 because A itself dies above degree ℓ
            mult[s][t] = a
                .mul_basis(b, c)
                .iter()
                .map(|(w, x)| (index[&(d1 + d2, i, j, *w)], x.clone()))
                .collect();
        }
    }
    let mut idempotents = Vec::new();
    for i in 0..ell {
        for e in a.idempotents() {
            let mut v = vec![K::zero(); dim];
            for &b in a.basis_of_degree(0) {
                if !e[b].is_zero() {
                    v[index[&(0, i, i, b)]] = e[b].clone();
                }
            }
            idempotents.push(v);
        }
    }
    let mut algebra =
        GradedAlgebra::from_sparse(a.field(), names, degrees, unit, mult, idempotents)?;
    if let Ok(r0) = a.radical0() {
        // the degree-0 radical is the strict upper triangle plus the radical
        // of A_0 repeated along the diagonal
        let mut hint = Vec::new();
        for (t, &(d, i, j, _)) in entries.iter().enumerate() {
            if d == 0 && i < j {
                let mut v = vec![K::zero(); dim];
                v[t] = K::one();
                hint.push(v);
            }
        }
        for i in 0..ell {
            for r in &r0 {
                let mut v = vec![K::zero(); dim];
                for &b in a.basis_of_degree(0) {
                    if !r[b].is_zero() {
                        v[index[&(0, i, i, b)]] = r[b].clone();
                    }
                }
                hint.push(v);
            }
        }
        algebra = algebra.with_radical0_hint(hint);
    }
    Ok(QuasiVeronese { algebra: Arc::new(algebra), source: a.clone(), entries })
}

/// The tilting module T = ⊕_{i=0}^{ℓ-1} (A(-i))_{<ℓ} over A.
pub fn module_t<K: Scalar>(a: &Arc<GradedAlgebra<K>>) -> GhResult<Arc<GradedModule<K>>> {
    let ell = a.ell();
    if ell == 0 {
        return Err(GhError::Unsupported(
            "the tilting module needs a positively graded part".into(),
        ));
    }
    let regular = GradedModule::regular(a.clone());
    let summands: Vec<Arc<GradedModule<K>>> = (0..ell)
        .map(|i| Arc::new(regular.shift(-(i as i64)).truncate_below(ell as i64)))
        .collect();
    Ok(direct_sum(&summands).0)
}

/// The Beilinson algebra of A: the endomorphisms of the tilting module
/// T = ⊕_{i=0}^{ℓ-1} (A(-i))_{<ℓ}, together with its block upper triangular
/// matrix form and the witness identifying the two.
pub struct BeilinsonAlgebra<K: Scalar> {
    nabla: Arc<GradedAlgebra<K>>,
    matrix_form: Arc<GradedAlgebra<K>>,
    tilting: Arc<GradedModule<K>>,
    witness: Vec<ModuleMap<K>>,
}

impl<K: Scalar> BeilinsonAlgebra<K> {
    /// End(T) on a computed basis of degree-0 endomorphisms.
    pub fn nabla(&self) -> &Arc<GradedAlgebra<K>> {
        &self.nabla
    }

    /// The same algebra in block form: entry (i, j) holds A_{j-i}, ordered
    /// block row by block row. Equals the degree-0 part of the
    /// quasi-Veronese.
    pub fn matrix_form(&self) -> &Arc<GradedAlgebra<K>> {
        &self.matrix_form
    }

    /// The tilting module ⊕_{i} (A(-i))_{<ℓ} over the source algebra.
    pub fn tilting_module(&self) -> &Arc<GradedModule<K>> {
        &self.tilting
    }

    /// The endomorphism realizing each matrix form basis element; composites
    /// of witnesses match the matrix form products.
    pub fn witness(&self) -> &[ModuleMap<K>] {
        &self.witness
    }
}

pub fn beilinson<K: Scalar>(a: &Arc<GradedAlgebra<K>>) -> GhResult<BeilinsonAlgebra<K>> {
    let qv = quasi_veronese(a)?;
    let ell = a.ell();
    let regular = GradedModule::regular(a.clone());
    let summands: Vec<Arc<GradedModule<K>>> = (0..ell)
        .map(|i| Arc::new(regular.shift(-(i as i64)).truncate_below(ell as i64)))
        .collect();
    let (tilting, injs, projs) = direct_sum(&summands);
    let homs = graded_hom_deg(&tilting, &tilting, 0)?;
    let nh = homs.len();
    let hom_flat =
        Matrix::from_rows(homs.iter().map(ModuleMap::flatten).collect()).transpose();

    let matrix_form = Arc::new(qv.algebra().degree_zero_algebra());
    let blocks: Vec<(usize, usize, usize)> = qv
        .entries
        .iter()
        .filter(|e| e.0 == 0)
        .map(|&(_, i, j, b)| (i, j, b))
        .collect();
    let nb = blocks.len();

    let mut witness = Vec::with_capacity(nb);
    for &(i, j, b) in &blocks {
        let block = left_mult_block(a, &summands[j], &summands[i], j, i, b)?;
        witness.push(projs[j].compose(&block)?.compose(&injs[i])?);
    }
    let wcols: Vec<Vec<K>> = witness.iter().map(ModuleMap::flatten).collect();
    let w_flat = Matrix::from_rows(wcols.clone()).transpose();
    let coords = coords_in_span(&hom_flat, &w_flat).ok_or_else(|| {
        GhError::Internal("matrix block does not act as a graded endomorphism".into())
    })?;
    if nh != nb || coords.rank() != nb {
        return Err(GhError::Internal(
            "endomorphism algebra of the tilting module does not match its block matrix form"
                .into(),
        ));
    }
    for (s, ws) in witness.iter().enumerate() {
        for (t, wt) in witness.iter().enumerate() {
            let composite = wt.compose(ws)?.flatten();
            let mut expected = vec![K::zero(); composite.len()];
            for (w, x) in matrix_form.mul_basis(s, t) {
                for (row, e) in wcols[*w].iter().enumerate() {
                    expected[row] = expected[row].clone() + x.clone() * e.clone();
                }
            }
            if composite != expected {
                return Err(GhError::Internal(
                    "matrix block products disagree with endomorphism composition".into(),
                ));
            }
        }
    }
    let idm = ModuleMap::identity(&tilting).flatten();
    let mut unit_expected = vec![K::zero(); idm.len()];
    for (w, x) in dense_to_sparse(matrix_form.unit()) {
        for (row, e) in wcols[w].iter().enumerate() {
            unit_expected[row] = unit_expected[row].clone() + x.clone() * e.clone();
        }
    }
    if idm != unit_expected {
        return Err(GhError::Internal(
            "matrix form unit does not act as the identity endomorphism".into(),
        ));
    }

    // multiplication table of End(T) on the computed hom basis: the entry
    // for (s, t) is the composite applying t first
    let mut comp_cols = Vec::with_capacity(nh * nh);
    for fs in &homs {
        for ft in &homs {
            comp_cols.push(ft.compose(fs)?.flatten());
        }
    }
    let comp_coords =
        coords_in_span(&hom_flat, &Matrix::from_rows(comp_cols).transpose()).ok_or_else(|| {
            GhError::Internal("composition left the endomorphism space".into())
        })?;
    let mut mult: Vec<Vec<SparseVec<K>>> = vec![vec![Vec::new(); nh]; nh];
    for s in 0..nh {
        for t in 0..nh {
            mult[s][t] = dense_to_sparse(&comp_coords.col(s * nh + t));
        }
    }
    let unit_coords = coords_in_span(&hom_flat, &Matrix::column(&idm)).ok_or_else(|| {
        GhError::Internal("identity is not in the computed endomorphism space".into())
    })?;
    let idempotents = matrix_form
        .idempotents()
        .iter()
        .map(|e| coords.mul(&Matrix::column(e)).col(0))
        .collect();
    let names = (0..nh).map(|t| format!("f{t}")).collect();
    let mut nabla = GradedAlgebra::from_sparse(
        a.field(),
        names,
        vec![0; nh],
        unit_coords.col(0),
        mult,
        idempotents,
    )?;
    if let Some(hint) = matrix_form.radical0_hint() {
        nabla = nabla
            .with_radical0_hint(hint.iter().map(|h| coords.mul(&Matrix::column(h)).col(0)).collect());
    }
    Ok(BeilinsonAlgebra { nabla: Arc::new(nabla), matrix_form, tilting, witness })
}

/// Left multiplication by the degree j-i basis element b, from the j-th
/// tilting summand (A(-j))_{<ℓ} into the i-th.
fn left_mult_block<K: Scalar>(
    a: &Arc<GradedAlgebra<K>>,
    source: &Arc<GradedModule<K>>,
    target: &Arc<GradedModule<K>>,
    j: usize,
    i: usize,
    b: usize,
) -> GhResult<ModuleMap<K>> {
    let mut comps = BTreeMap::new();
    for d in source.degree_range() {
        let cols = a.basis_of_degree(d as usize - j);
        let rows = a.basis_of_degree(d as usize - i);
        let rpos: BTreeMap<usize, usize> =
            rows.iter().enumerate().map(|(r, &w)| (w, r)).collect();
        let mut mat = Matrix::zero(rows.len(), cols.len());
        for (cx, &u) in cols.iter().enumerate() {
            for (w, x) in a.mul_basis(b, u) {
                mat[(rpos[w], cx)] = x.clone();
            }
        }
        comps.insert(d, mat);
    }
    ModuleMap::new(source.clone(), target.clone(), 0, comps)
}

/// The tensor product algebra A ⊗ B with the product grading and the
/// unsigned product (u ⊗ v)(u' ⊗ v') = uu' ⊗ vv'.
pub fn tensor_product_algebra<K: Scalar>(
    a: &Arc<GradedAlgebra<K>>,
    b: &Arc<GradedAlgebra<K>>,
) -> GhResult<Arc<GradedAlgebra<K>>> {
    if a.field() != b.field() {
        return Err(GhError::Mismatch("tensor product of algebras over different fields".into()));
    }
    let (na, nb) = (a.dim(), b.dim());
    let idx = |u: usize, v: usize| u * nb + v;
    let dim = na * nb;
    let mut names = Vec::with_capacity(dim);
    let mut degrees = Vec::with_capacity(dim);
    let mut unit = Vec::with_capacity(dim);
    for u in 0..na {
        for v in 0..nb {
            names.push(format!("({},{})", a.name(u), b.name(v)));
            degrees.push(a.degree(u) + b.degree(v));
            unit.push(a.unit()[u].clone() * b.unit()[v].clone());
        }
    }
    let mut mult: Vec<Vec<SparseVec<K>>> = vec![vec![Vec::new(); dim]; dim];
    for ua in 0..na {
        for va in 0..nb {
            for ub in 0..na {
                for vb in 0..nb {
                    let mut cell = Vec::new();
                    for (w, x) in a.mul_basis(ua, ub) {
                        for (z, y) in b.mul_basis(va, vb) {
                            cell.push((idx(*w, *z), x.clone() * y.clone()));
                        }
                    }
                    mult[idx(ua, va)][idx(ub, vb)] = cell;
                }
            }
        }
    }
    let mut idempotents = Vec::new();
    for e in a.idempotents() {
        for f in b.idempotents() {
            let mut v = vec![K::zero(); dim];
            for u in 0..na {
                for w in 0..nb {
                    if !e[u].is_zero() && !f[w].is_zero() {
                        v[idx(u, w)] = e[u].clone() * f[w].clone();
                    }
                }
            }
            idempotents.push(v);
        }
    }
    let mut out = GradedAlgebra::from_sparse(a.field(), names, degrees, unit, mult, idempotents)?;
    if let (Ok(ra), Ok(rb)) = (a.radical0(), b.radical0()) {
        // rad(A_0 ⊗ B_0) = rad A_0 ⊗ B_0 + A_0 ⊗ rad B_0 for split basic
        // degree-zero parts
        let mut gens: Vec<Vec<K>> = Vec::new();
        for r in &ra {
            for &v0 in b.basis_of_degree(0) {
                let mut g = vec![K::zero(); dim];
                for u in 0..na {
                    g[idx(u, v0)] = r[u].clone();
                }
                gens.push(g);
            }
        }
        for &u0 in a.basis_of_degree(0) {
            for r in &rb {
                let mut g = vec![K::zero(); dim];
                for v in 0..nb {
                    g[idx(u0, v)] = r[v].clone();
                }
                gens.push(g);
            }
        }
        let hint =
            if gens.is_empty() { Vec::new() } else { Matrix::from_rows(gens).row_space_basis() };
        out = out.with_radical0_hint(hint);
    }
    Ok(Arc::new(out))
}

/// The Segre product of A and B: the equal-degree part of the tensor
/// product, graded diagonally.
pub fn segre_product<K: Scalar>(
    a: &Arc<GradedAlgebra<K>>,
    b: &Arc<GradedAlgebra<K>>,
) -> GhResult<Arc<GradedAlgebra<K>>> {
    if a.field() != b.field() {
        return Err(GhError::Mismatch("Segre product of algebras over different fields".into()));
    }
    let (na, nb) = (a.dim(), b.dim());
    let mut keep: Vec<(usize, usize)> = Vec::new();
    for u in 0..na {
        for v in 0..nb {
            if a.degree(u) == b.degree(v) {
                keep.push((u, v));
            }
        }
    }
    let pos: BTreeMap<(usize, usize), usize> =
        keep.iter().enumerate().map(|(s, &p)| (p, s)).collect();
    let dim = keep.len();
    let names = keep.iter().map(|&(u, v)| format!("({},{})", a.name(u), b.name(v))).collect();
    let degrees = keep.iter().map(|&(u, _)| a.degree(u)).collect();
    let unit = keep.iter().map(|&(u, v)| a.unit()[u].clone() * b.unit()[v].clone()).collect();
    let mut mult: Vec<Vec<SparseVec<K>>> = vec![vec![Vec::new(); dim]; dim];
    for (s, &(ua, va)) in keep.iter().enumerate() {
        for (t, &(ub, vb)) in keep.iter().enumerate() {
            // both factors of a product component gain the same degree, so
            // the component is again an equal-degree pair
            let mut cell = Vec::new();
            for (w, x) in a.mul_basis(ua, ub) {
                for (z, y) in b.mul_basis(va, vb) {
                    cell.push((pos[&(*w, *z)], x.clone() * y.clone()));
                }
            }
            mult[s][t] = cell;
        }
    }
    let idempotents = a
        .idempotents()
        .iter()
        .flat_map(|e| {
            b.idempotents().iter().map(|f| {
                keep.iter().map(|&(u, v)| e[u].clone() * f[v].clone()).collect::<Vec<K>>()
            })
        })
        .collect();
    let mut out = GradedAlgebra::from_sparse(a.field(), names, degrees, unit, mult, idempotents)?;
    if let (Ok(ra), Ok(rb)) = (a.radical0(), b.radical0()) {
        let mut gens: Vec<Vec<K>> = Vec::new();
        for r in &ra {
            for &v0 in b.basis_of_degree(0) {
                gens.push(
                    keep.iter()
                        .map(|&(u, v)| if v == v0 { r[u].clone() } else { K::zero() })
                        .collect(),
                );
            }
        }
        for &u0 in a.basis_of_degree(0) {
            for r in &rb {
                gens.push(
                    keep.iter()
                        .map(|&(u, v)| if u == u0 { r[v].clone() } else { K::zero() })
                        .collect(),
                );
            }
        }
        let hint =
            if gens.is_empty() { Vec::new() } else { Matrix::from_rows(gens).row_space_basis() };
        out = out.with_radical0_hint(hint);
    }
    Ok(Arc::new(out))
}

/// Direct product `A x B` with componentwise operations.
///
/// The grading is inherited from the factors, the unit is `(1, 1)`, and the
/// idempotent list is the concatenation of the two factors' lists, each padded
/// into its block.
pub fn direct_product<K: Scalar>(
    a: &Arc<GradedAlgebra<K>>,
    b: &Arc<GradedAlgebra<K>>,
) -> GhResult<Arc<GradedAlgebra<K>>> {
    if a.field() != b.field() {
        return Err(GhError::Mismatch("direct product factors live over different fields".into()));
    }
    let da = a.dim();
    let dim = da + b.dim();
    let mut names: Vec<String> = (0..da).map(|u| format!("({},0)", a.name(u))).collect();
    names.extend((0..b.dim()).map(|v| format!("(0,{})", b.name(v))));
    let mut degrees: Vec<usize> = (0..da).map(|u| a.degree(u)).collect();
    degrees.extend((0..b.dim()).map(|v| b.degree(v)));
    let pad_left = |x: &[K]| -> Vec<K> {
        let mut row = x.to_vec();
        row.resize(dim, K::zero());
        row
    };
    let pad_right = |x: &[K]| -> Vec<K> {
        let mut row = vec![K::zero(); da];
        row.extend_from_slice(x);
        row
    };
    let mut unit = pad_left(a.unit());
    for (j, x) in b.unit().iter().enumerate() {
        unit[da + j] = x.clone();
    }
    let mut mult = vec![vec![Vec::new(); dim]; dim];
    for s in 0..da {
        for t in 0..da {
            mult[s][t] = a.mul_basis(s, t).clone();
        }
    }
    for s in 0..b.dim() {
        for t in 0..b.dim() {
            mult[da + s][da + t] =
                b.mul_basis(s, t).iter().map(|(w, x)| (da + w, x.clone())).collect();
        }
    }
    let mut idempotents: Vec<Vec<K>> = a.idempotents().iter().map(|e| pad_left(e)).collect();
    idempotents.extend(b.idempotents().iter().map(|f| pad_right(f)));
    let mut out = GradedAlgebra::from_sparse(a.field(), names, degrees, unit, mult, idempotents)?;
    if let (Ok(ra), Ok(rb)) = (a.radical0(), b.radical0()) {
        let mut hint: Vec<Vec<K>> = ra.iter().map(|r| pad_left(r)).collect();
        hint.extend(rb.iter().map(|r| pad_right(r)));
        out = out.with_radical0_hint(hint);
    }
    Ok(Arc::new(out))
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use super::*;
    use crate::algebra::sparse_to_dense;
    use crate::ext::{iwanaga_gorenstein, ExtSeries};
    use crate::field::{rat, FieldSpec, Fp, Rat};
    use crate::module::random_module;
    use crate::quiver::QuiverPresentation;
    use crate::resolution::DimVerdict;

    fn kx(n: usize) -> Arc<GradedAlgebra<Rat>> {
        let mut q = QuiverPresentation::new(vec!["v"]);
        let x = q.arrow("x", 0, 0, 1);
        q.monomial_relation(vec![x; n]);
        Arc::new(q.compile(FieldSpec::Rationals).unwrap())
    }

    fn point() -> Arc<GradedAlgebra<Rat>> {
        Arc::new(QuiverPresentation::new(vec!["v"]).compile(FieldSpec::Rationals).unwrap())
    }

    fn path_a2() -> Arc<GradedAlgebra<Rat>> {
        let mut q = QuiverPresentation::new(vec!["1", "2"]);
        q.arrow("a", 0, 1, 0);
        Arc::new(q.compile(FieldSpec::Rationals).unwrap())
    }

    fn assert_algebra_iso(
        src: &Arc<GradedAlgebra<Rat>>,
        dst: &Arc<GradedAlgebra<Rat>>,
        images: Vec<Vec<Rat>>,
    ) {
        assert_eq!(src.dim(), dst.dim());
        assert_eq!(images.len(), src.dim());
        let u = Matrix::from_rows(images.clone()).transpose();
        assert_eq!(u.rank(), src.dim());
        let apply = |x: &[Rat]| -> Vec<Rat> { u.mul(&Matrix::column(x)).col(0) };
        assert_eq!(apply(src.unit()), dst.unit().to_vec());
        for i in 0..src.dim() {
            for j in 0..src.dim() {
                let lhs = apply(&sparse_to_dense(src.mul_basis(i, j), src.dim()));
                let rhs = dst.mul_elts(&images[i], &images[j]);
                assert_eq!(lhs, rhs, "product of basis elements {i} and {j}");
            }
        }
        for (i, img) in images.iter().enumerate() {
            for (w, x) in img.iter().enumerate() {
                if !x.is_zero() {
                    assert_eq!(src.degree(i), dst.degree(w));
                }
            }
        }
    }

    fn assert_modules_identical(x: &Arc<GradedModule<Rat>>, y: &Arc<GradedModule<Rat>>) {
        assert_eq!(x.dims_map(), y.dims_map());
        for b in 0..x.algebra().dim() {
            for d in x.degree_range() {
                assert_eq!(x.act(b, d), y.act(b, d), "action of {b} at degree {d}");
            }
        }
    }

    #[test]
    fn trivial_extension_of_the_base_field_is_the_dual_numbers() {
        let k = point();
        let te = trivial_extension(&k, &Bimodule::regular(&k)).unwrap();
        assert!(te.validate().ok(), "{:?}", te.validate().violations);
        assert!(te.same_structure(&kx(2)));
    }

    #[test]
    fn trivial_extension_rejects_the_zero_bimodule() {
        let k = point();
        let err = trivial_extension(&k, &Bimodule::zero(&k, &k)).unwrap_err();
        assert!(matches!(err, GhError::Invalid(_)));
    }

    #[test]
    fn trivial_extension_rejects_graded_coefficients() {
        let a = kx(2);
        let err = trivial_extension(&a, &Bimodule::regular(&a)).unwrap_err();
        assert!(matches!(err, GhError::Invalid(_)));
    }

    #[test]
    fn trivial_extension_by_the_dual_is_self_injective() {
        let lam = path_a2();
        let te = trivial_extension(&lam, &Bimodule::dual_regular(&lam)).unwrap();
        assert_eq!(te.dim(), 6);
        assert!(te.validate().ok(), "{:?}", te.validate().violations);
        let (right, left) = iwanaga_gorenstein(&te, 6).unwrap();
        assert_eq!(right, DimVerdict::Finite(0));
        assert_eq!(left, DimVerdict::Finite(0));
    }

    #[test]
    fn truncated_tensor_of_a_line_gives_truncated_polynomials() {
        let k = point();
        let c = Bimodule::regular(&k);
        for ell in 1..=4 {
            let tt = truncated_tensor(&k, &c, ell).unwrap();
            assert!(tt.validate().ok(), "{:?}", tt.validate().violations);
            assert!(tt.same_structure(&kx(ell + 1)));
        }
    }

    #[test]
    fn truncated_tensor_matches_the_trivial_extension_in_top_degree_one() {
        let lam = path_a2();
        let c = Bimodule::dual_regular(&lam);
        let te = trivial_extension(&lam, &c).unwrap();
        let tt = truncated_tensor(&lam, &c, 1).unwrap();
        assert!(te.same_structure(&tt));

        let k = point();
        let r = Bimodule::regular(&k);
        let c3 = Bimodule::direct_sum(&[&r, &r, &r]).unwrap();
        let te3 = trivial_extension(&k, &c3).unwrap();
        let tt3 = truncated_tensor(&k, &c3, 1).unwrap();
        assert_eq!(te3.dim(), 4);
        assert!(te3.same_structure(&tt3));
    }

    #[test]
    fn truncated_tensor_of_a_free_bimodule_doubles_each_degree() {
        let k = point();
        let r = Bimodule::regular(&k);
        let c2 = Bimodule::direct_sum(&[&r, &r]).unwrap();
        let tt = truncated_tensor(&k, &c2, 2).unwrap();
        assert_eq!(tt.dim(), 7);
        assert_eq!(
            (0..=2).map(|d| tt.dim_of_degree(d)).collect::<Vec<_>>(),
            vec![1, 2, 4]
        );
        assert!(tt.validate().ok(), "{:?}", tt.validate().violations);
    }

    #[test]
    fn truncated_tensor_over_a_path_algebra_base() {
        let lam = path_a2();
        let c = Bimodule::dual_regular(&lam);
        let tt = truncated_tensor(&lam, &c, 2).unwrap();
        assert_eq!(tt.dim(), 7);
        assert_eq!(
            (0..=2).map(|d| tt.dim_of_degree(d)).collect::<Vec<_>>(),
            vec![3, 3, 1]
        );
        assert!(tt.validate().ok(), "{:?}", tt.validate().violations);
        let tt3 = truncated_tensor(&lam, &c, 3).unwrap();
        assert!(tt3.validate().ok(), "{:?}", tt3.validate().violations);
    }

    #[test]
    fn veronese_of_truncated_polynomials() {
        let a = kx(5);
        let v2 = veronese(&a, 2).unwrap();
        assert!(v2.validate().ok(), "{:?}", v2.validate().violations);
        assert!(v2.same_structure(&kx(3)));
        let v1 = veronese(&a, 1).unwrap();
        assert!(v1.same_structure(&a));
    }

    #[test]
    fn quasi_veronese_in_top_degree_one_is_the_identity() {
        let a = kx(2);
        let qv = quasi_veronese(&a).unwrap();
        assert!(qv.algebra().same_structure(&a));
    }

    #[test]
    fn quasi_veronese_of_truncated_polynomials() {
        let a = kx(3);
        let qv = quasi_veronese(&a).unwrap();
        let q = qv.algebra();
        assert_eq!(q.dim(), 6);
        assert_eq!(q.ell(), 1);
        assert_eq!(
            (0..=1).map(|d| q.dim_of_degree(d)).collect::<Vec<_>>(),
            vec![3, 3]
        );
        assert!(q.validate().ok(), "{:?}", q.validate().violations);
        assert_eq!(q.radical0_hint().map(<[Vec<Rat>]>::len), Some(1));
    }

    #[test]
    fn quasi_veronese_shift_law() {
        let a = kx(3);
        let qv = quasi_veronese(&a).unwrap();
        let mut mods = vec![Arc::new(GradedModule::regular(a.clone()))];
        for seed in [3u64, 5, 9] {
            mods.push(random_module(&a, seed).unwrap());
        }
        for m in &mods {
            let shifted = qv.transport(&Arc::new(m.as_ref().shift(2))).unwrap();
            let transported = Arc::new(qv.transport(m).unwrap().as_ref().shift(1));
            assert_modules_identical(&shifted, &transported);
        }
    }

    #[test]
    fn quasi_veronese_transport_preserves_hom_and_ext() {
        let a = kx(3);
        let qv = quasi_veronese(&a).unwrap();
        for (s1, s2) in [(21u64, 22u64), (23, 24), (25, 26), (27, 28), (29, 30)] {
            let m = random_module(&a, s1).unwrap();
            let n = random_module(&a, s2).unwrap();
            let tm = qv.transport(&m).unwrap();
            let tn = qv.transport(&n).unwrap();
            assert_eq!(
                graded_hom_deg(&m, &n, 0).unwrap().len(),
                graded_hom_deg(&tm, &tn, 0).unwrap().len()
            );
            let mut es = ExtSeries::new(&m, &n).unwrap();
            let mut tes = ExtSeries::new(&tm, &tn).unwrap();
            assert_eq!(
                es.ext(1).unwrap().get(&0).copied().unwrap_or(0),
                tes.ext(1).unwrap().get(&0).copied().unwrap_or(0)
            );
        }
        let z = Arc::new(GradedModule::zero_module(a.clone()));
        assert!(qv.transport(&z).unwrap().is_zero());
    }

    #[test]
    fn beilinson_of_truncated_polynomials_is_the_path_algebra() {
        let a = kx(3);
        let bd = beilinson(&a).unwrap();
        assert_eq!(bd.tilting_module().total_dim(), 3);
        assert_eq!(bd.nabla().dim(), 3);
        assert_eq!(bd.matrix_form().dim(), 3);
        assert!(bd.nabla().validate_base().ok(), "{:?}", bd.nabla().validate_base().violations);
        assert!(bd.matrix_form().validate_base().ok());
        let images = vec![
            vec![rat(1), rat(0), rat(0)],
            vec![rat(0), rat(0), rat(1)],
            vec![rat(0), rat(1), rat(0)],
        ];
        assert_algebra_iso(&path_a2(), bd.matrix_form(), images);
    }

    #[test]
    fn beilinson_of_the_dual_numbers_is_the_base_field() {
        let a = kx(2);
        let bd = beilinson(&a).unwrap();
        assert_eq!(bd.nabla().dim(), 1);
        assert_eq!(bd.matrix_form().dim(), 1);
        assert_eq!(bd.tilting_module().total_dim(), 1);
        assert_eq!(bd.witness().len(), 1);
    }

    #[test]
    fn tensor_square_of_the_dual_numbers() {
        let a = kx(2);
        let t = tensor_product_algebra(&a, &a).unwrap();
        assert_eq!(t.dim(), 4);
        assert_eq!(
            (0..=2).map(|d| t.dim_of_degree(d)).collect::<Vec<_>>(),
            vec![1, 2, 1]
        );
        assert!(t.validate().ok(), "{:?}", t.validate().violations);
        assert!(t.is_commutative());
    }

    #[test]
    fn tensor_with_the_base_field_changes_nothing() {
        let a = kx(3);
        let k = point();
        assert!(tensor_product_algebra(&a, &k).unwrap().same_structure(&a));
        assert!(tensor_product_algebra(&k, &a).unwrap().same_structure(&a));
    }

    #[test]
    fn tensor_rejects_mismatched_fields() {
        let mk = |p: u32| {
            let mut q = QuiverPresentation::new(vec!["v"]);
            let x = q.arrow("x", 0, 0, 1);
            q.monomial_relation(vec![x, x]);
            Arc::new(q.compile::<Fp>(FieldSpec::PrimeField(p)).unwrap())
        };
        let err = tensor_product_algebra(&mk(2), &mk(3)).unwrap_err();
        assert!(matches!(err, GhError::Mismatch(_)));
    }

    #[test]
    fn tensor_over_a_prime_field_validates() {
        let mut q = QuiverPresentation::new(vec!["v"]);
        let x = q.arrow("x", 0, 0, 1);
        q.monomial_relation(vec![x, x]);
        let a = Arc::new(q.compile::<Fp>(FieldSpec::PrimeField(2)).unwrap());
        let t = tensor_product_algebra(&a, &a).unwrap();
        assert_eq!(t.dim(), 4);
        assert!(t.radical0_hint().is_some());
        assert!(t.validate().ok(), "{:?}", t.validate().violations);
    }

    #[test]
    fn segre_product_of_two_lines() {
        let s = segre_product(&kx(3), &kx(3)).unwrap();
        assert!(s.validate().ok(), "{:?}", s.validate().violations);
        assert!(s.same_structure(&kx(3)));
        let s2 = segre_product(&kx(3), &kx(2)).unwrap();
        assert_eq!(s2.dim(), 2);
        assert!(s2.same_structure(&kx(2)));
    }

    #[test]
    fn constructions_carry_radical_hints() {
        let lam = path_a2();
        let te = trivial_extension(&lam, &Bimodule::dual_regular(&lam)).unwrap();
        assert_eq!(te.radical0_hint().map(<[Vec<Rat>]>::len), Some(1));
        assert_eq!(te.radical().unwrap().len(), 4);
        let v = veronese(&kx(5), 2).unwrap();
        assert_eq!(v.radical0_hint().map(<[Vec<Rat>]>::len), Some(0));
        let t = tensor_product_algebra(&lam, &lam).unwrap();
        assert_eq!(t.radical0_hint().map(<[Vec<Rat>]>::len), Some(5));
    }
}
