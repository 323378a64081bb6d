//! Graded Ext spaces computed from minimal projective resolutions.
//!
//! A cover decomposes as a sum of shifted vertex projectives, and a degree-i
//! map out of e_v A(-d) is determined by the image of its generator, an
//! element of N_{d+i} e_v. Each Hom space in the complex Hom(P_q, N) is
//! therefore a direct sum of idempotent slices of N, and the differential is
//! precomposition with the resolution differential written in slice
//! coordinates. Because the resolution is minimal over the graded radical,
//! ranks of these differentials convert directly into Ext dimensions.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::algebra::GradedAlgebra;
use crate::error::{GhError, GhResult};
use crate::field::Scalar;
use crate::matrix::{coords_in_span, Matrix};
use crate::module::{dual_d, same_algebra, GradedModule};
use crate::resolution::{projective_cover, projective_dimension, DimVerdict, ResolutionStep};

/// Incrementally extends a minimal resolution of `m` and reads off the graded
/// dimensions of Ext^q(m, n). Internal degrees follow the shift convention
/// (M(j))_i = M_{i+j}, so a Hom element of internal degree i maps M_d into
/// N_{d+i}.
pub struct ExtSeries<K: Scalar> {
    n: Arc<GradedModule<K>>,
    steps: Vec<ResolutionStep<K>>,
    tail: Option<Arc<GradedModule<K>>>,
}

impl<K: Scalar> ExtSeries<K> {
    pub fn new(m: &Arc<GradedModule<K>>, n: &Arc<GradedModule<K>>) -> GhResult<Self> {
        if !same_algebra(m.algebra(), n.algebra()) {
            return Err(GhError::Mismatch("Ext between modules over different algebras".into()));
        }
        let tail = if m.is_zero() { None } else { Some(m.clone()) };
        Ok(ExtSeries { n: n.clone(), steps: Vec::new(), tail })
    }

    /// Number of resolution steps when the resolution is known to terminate.
    pub fn finished_length(&self) -> Option<usize> {
        if self.tail.is_none() {
            Some(self.steps.len())
        } else {
            None
        }
    }

    fn ensure(&mut self, want: usize) -> GhResult<()> {
        while self.steps.len() < want {
            let Some(current) = self.tail.clone() else { break };
            let cover = projective_cover(&current)?;
            let (syzygy, include) = cover.map.kernel();
            self.tail = if syzygy.is_zero() { None } else { Some(syzygy.clone()) };
            self.steps.push(ResolutionStep { cover, syzygy, include });
        }
        Ok(())
    }

    /// Graded dimensions of Ext^q(m, n); degrees with dimension zero are
    /// omitted.
    pub fn ext(&mut self, q: usize) -> GhResult<BTreeMap<i64, usize>> {
        self.ensure(q + 2)?;
        let mut out = BTreeMap::new();
        if q >= self.steps.len() || self.n.is_zero() {
            return Ok(out);
        }
        let mut degrees = BTreeSet::new();
        for s in &self.steps[q].cover.summands {
            for (nd, _) in self.n.dims_map() {
                degrees.insert(nd - s.gen_degree);
            }
        }
        for i in degrees {
            let hom = self.hom_blocks(q, i);
            let total: usize = hom.iter().map(Matrix::cols).sum();
            if total == 0 {
                continue;
            }
            let rank_out = self.delta_rank(q, i)?;
            let rank_in = if q == 0 { 0 } else { self.delta_rank(q - 1, i)? };
            let dim = total - rank_out - rank_in;
            if dim > 0 {
                out.insert(i, dim);
            }
        }
        Ok(out)
    }

    /// Basis of each summand's slice N_{d_t + i} e_{v_t} as matrix columns.
    fn hom_blocks(&self, q: usize, i: i64) -> Vec<Matrix<K>> {
        if q >= self.steps.len() {
            return Vec::new();
        }
        let idem = self.n.algebra().idempotents();
        self.steps[q]
            .cover
            .summands
            .iter()
            .map(|s| {
                let d = s.gen_degree + i;
                let proj = self.n.act_elt(&idem[s.vertex], 0, d);
                let basis = proj.transpose().row_space_basis();
                let mut block = Matrix::zero(proj.rows(), basis.len());
                for (j, v) in basis.iter().enumerate() {
                    for (r, x) in v.iter().enumerate() {
                        block[(r, j)] = x.clone();
                    }
                }
                block
            })
            .collect()
    }

    fn delta_rank(&self, q: usize, i: i64) -> GhResult<usize> {
        Ok(self.delta_matrix(q, i)?.rank())
    }

    /// Matrix of Hom(P_q, N)_i -> Hom(P_{q+1}, N)_i, precomposition with the
    /// differential, in the slice bases from `hom_blocks`.
    fn delta_matrix(&self, q: usize, i: i64) -> GhResult<Matrix<K>> {
        let src = self.hom_blocks(q, i);
        let dst = self.hom_blocks(q + 1, i);
        let src_total: usize = src.iter().map(Matrix::cols).sum();
        let dst_total: usize = dst.iter().map(Matrix::cols).sum();
        if src_total == 0 || dst_total == 0 {
            return Ok(Matrix::zero(dst_total, src_total));
        }
        let cover = &self.steps[q].cover;
        let next = &self.steps[q + 1].cover;
        let differential = next.map.compose(&self.steps[q].include)?;
        let mut out = Matrix::zero(dst_total, src_total);
        let mut col = 0;
        for (t, block) in src.iter().enumerate() {
            for b in 0..block.cols() {
                let gens: Vec<Vec<K>> = cover
                    .summands
                    .iter()
                    .enumerate()
                    .map(|(u, s)| {
                        if u == t {
                            block.col(b)
                        } else {
                            vec![K::zero(); self.n.dim_at(s.gen_degree + i)]
                        }
                    })
                    .collect();
                let phi = cover.map_from_generators(&self.n, i, &gens)?;
                let images = next.generator_images(&differential.compose(&phi)?);
                let mut row = 0;
                for (image, target_block) in images.iter().zip(&dst) {
                    if target_block.cols() == 0 {
                        continue;
                    }
                    let coords = coords_in_span(target_block, &Matrix::column(image))
                        .ok_or_else(|| {
                            GhError::Internal("Ext image escaped its idempotent slice".into())
                        })?;
                    for r in 0..target_block.cols() {
                        out[(row + r, col)] = coords[(r, 0)].clone();
                    }
                    row += target_block.cols();
                }
                col += 1;
            }
        }
        Ok(out)
    }
}

/// Ext^q(m, n) for q = 0..=up_to. `exhaustive` is set when the resolution
/// terminated early enough that every degree beyond the table vanishes too.
pub struct ExtTable {
    pub by_degree: Vec<BTreeMap<i64, usize>>,
    pub exhaustive: bool,
}

pub fn ext_table<K: Scalar>(
    m: &Arc<GradedModule<K>>,
    n: &Arc<GradedModule<K>>,
    up_to: usize,
) -> GhResult<ExtTable> {
    let mut series = ExtSeries::new(m, n)?;
    let mut by_degree = Vec::with_capacity(up_to + 1);
    for q in 0..=up_to {
        by_degree.push(series.ext(q)?);
    }
    let exhaustive = series.finished_length().is_some_and(|len| len <= up_to + 1);
    Ok(ExtTable { by_degree, exhaustive })
}

/// Outcome of scanning Ext^q(m, n) for q >= 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingScan {
    /// First nonzero group found, as (q, internal degree, dimension).
    pub first_nonzero: Option<(usize, i64, usize)>,
    pub checked_to: usize,
    /// Whether vanishing is known for all q, not only those scanned.
    pub exhaustive: bool,
}

pub fn ext_vanishing_above_zero<K: Scalar>(
    m: &Arc<GradedModule<K>>,
    n: &Arc<GradedModule<K>>,
    bound: usize,
) -> GhResult<VanishingScan> {
    let mut series = ExtSeries::new(m, n)?;
    for q in 1..=bound {
        let dims = series.ext(q)?;
        if let Some((&i, &dim)) = dims.iter().next() {
            return Ok(VanishingScan {
                first_nonzero: Some((q, i, dim)),
                checked_to: q,
                exhaustive: false,
            });
        }
        if let Some(len) = series.finished_length() {
            if q + 1 >= len {
                return Ok(VanishingScan { first_nonzero: None, checked_to: q, exhaustive: true });
            }
        }
    }
    Ok(VanishingScan { first_nonzero: None, checked_to: bound, exhaustive: false })
}

/// Injective dimension via the standard duality: it equals the projective
/// dimension of the dual module over the opposite algebra.
pub fn injective_dimension<K: Scalar>(
    m: &Arc<GradedModule<K>>,
    bound: usize,
) -> GhResult<DimVerdict> {
    let op = Arc::new(m.algebra().opposite());
    let dm = dual_d(m, &op)?;
    projective_dimension(&dm, bound)
}

/// Self-injective dimensions (right, left) of the regular module. The algebra
/// is Iwanaga-Gorenstein when both are finite.
pub fn iwanaga_gorenstein<K: Scalar>(
    algebra: &Arc<GradedAlgebra<K>>,
    bound: usize,
) -> GhResult<(DimVerdict, DimVerdict)> {
    let right = GradedModule::regular(algebra.clone()).share();
    let right_dim = injective_dimension(&right, bound)?;
    let op = Arc::new(algebra.opposite());
    let left = GradedModule::regular(op).share();
    let left_dim = injective_dimension(&left, bound)?;
    Ok((right_dim, left_dim))
}

/// Witness that both self-injective dimensions were computed and are finite.
/// Only `certify_gorenstein` constructs one, so holding a certificate means
/// the Iwanaga-Gorenstein check actually ran.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GorensteinCertificate {
    right: usize,
    left: usize,
    bound: usize,
}

impl GorensteinCertificate {
    pub fn right(&self) -> usize {
        self.right
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn injdim(&self) -> usize {
        self.right.max(self.left)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GorensteinStatus {
    Certified(GorensteinCertificate),
    NotCertified { right: DimVerdict, left: DimVerdict },
}

pub fn certify_gorenstein<K: Scalar>(
    algebra: &Arc<GradedAlgebra<K>>,
    bound: usize,
) -> GhResult<GorensteinStatus> {
    let (right, left) = iwanaga_gorenstein(algebra, bound)?;
    Ok(match (right, left) {
        (DimVerdict::Finite(r), DimVerdict::Finite(l)) => {
            GorensteinStatus::Certified(GorensteinCertificate { right: r, left: l, bound })
        }
        (right, left) => GorensteinStatus::NotCertified { right, left },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldSpec, Rat};
    use crate::module::{graded_hom, graded_hom_deg, lambda_module, projective, random_module, simple, ModuleMap};
    use crate::quiver::QuiverPresentation;
    use crate::resolution::free_resolution;

    fn kx3() -> Arc<GradedAlgebra<Rat>> {
        let mut q = QuiverPresentation::new(vec!["v".into()]);
        let x = q.arrow("x", 0, 0, 1);
        q.monomial_relation(vec![x, x, x]);
        Arc::new(q.compile(FieldSpec::Rationals).unwrap())
    }

    fn ka2() -> Arc<GradedAlgebra<Rat>> {
        let mut q = QuiverPresentation::new(vec!["1".into(), "2".into()]);
        q.arrow("a", 0, 1, 1);
        Arc::new(q.compile(FieldSpec::Rationals).unwrap())
    }

    /// Ext through an over-generated free resolution, flattening Hom elements
    /// to vectors and taking ranks of the precomposition maps directly.
    fn ext_via_free(
        m: &Arc<GradedModule<Rat>>,
        n: &Arc<GradedModule<Rat>>,
        q: usize,
    ) -> BTreeMap<i64, usize> {
        let maps = free_resolution(m, q + 1).unwrap();
        let f_q = maps[q].source().clone();
        let mut out = BTreeMap::new();
        for (&i, basis) in &graded_hom(&f_q, n).unwrap() {
            let rank_out = free_delta_rank(&maps[q + 1], basis);
            let rank_in = if q == 0 {
                0
            } else {
                let prev = graded_hom_deg(maps[q - 1].source(), n, i).unwrap();
                free_delta_rank(&maps[q], &prev)
            };
            let dim = basis.len() - rank_out - rank_in;
            if dim > 0 {
                out.insert(i, dim);
            }
        }
        out
    }

    fn free_delta_rank(differential: &ModuleMap<Rat>, basis: &[ModuleMap<Rat>]) -> usize {
        if basis.is_empty() {
            return 0;
        }
        let cols: Vec<Vec<Rat>> =
            basis.iter().map(|phi| differential.compose(phi).unwrap().flatten()).collect();
        let rows = cols[0].len();
        let mut mat = Matrix::zero(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (r, x) in c.iter().enumerate() {
                mat[(r, j)] = x.clone();
            }
        }
        mat.rank()
    }

    #[test]
    fn degree_zero_ext_matches_graded_hom() {
        let a = kx3();
        let m = lambda_module(&a);
        let n = GradedModule::regular(a.clone()).share();
        let mut series = ExtSeries::new(&m, &n).unwrap();
        let hom_dims: BTreeMap<i64, usize> =
            graded_hom(&m, &n).unwrap().into_iter().map(|(i, v)| (i, v.len())).collect();
        assert_eq!(series.ext(0).unwrap(), hom_dims);

        let b = ka2();
        let lam = lambda_module(&b);
        let reg = GradedModule::regular(b.clone()).share();
        let mut series2 = ExtSeries::new(&lam, &reg).unwrap();
        let hom_dims2: BTreeMap<i64, usize> =
            graded_hom(&lam, &reg).unwrap().into_iter().map(|(i, v)| (i, v.len())).collect();
        assert_eq!(series2.ext(0).unwrap(), hom_dims2);
    }

    #[test]
    fn self_extensions_of_the_simple_over_the_truncated_polynomials() {
        let a = kx3();
        let k = lambda_module(&a);
        let mut series = ExtSeries::new(&k, &k).unwrap();
        assert_eq!(series.ext(1).unwrap(), BTreeMap::from([(-1, 1)]));
        assert_eq!(series.ext(2).unwrap(), BTreeMap::from([(-3, 1)]));
        assert_eq!(series.ext(3).unwrap(), BTreeMap::from([(-4, 1)]));
    }

    #[test]
    fn extension_between_the_path_algebra_simples() {
        let a = ka2();
        let s1 = simple(&a, 0, 0).unwrap();
        let s2 = simple(&a, 1, 0).unwrap();
        let mut series = ExtSeries::new(&s1, &s2).unwrap();
        assert_eq!(series.ext(1).unwrap(), BTreeMap::from([(-1, 1)]));
        assert!(series.ext(2).unwrap().is_empty());
        let mut reverse = ExtSeries::new(&s2, &s1).unwrap();
        assert!(reverse.ext(1).unwrap().is_empty());
    }

    #[test]
    fn higher_ext_out_of_a_projective_vanishes() {
        let a = kx3();
        let p = projective(&a, 0, 1);
        let n = lambda_module(&a);
        let table = ext_table(&p, &n, 4).unwrap();
        assert!(table.exhaustive);
        assert!(!table.by_degree[0].is_empty());
        for q in 1..=4 {
            assert!(table.by_degree[q].is_empty());
        }
    }

    #[test]
    fn ext_into_the_selfinjective_regular_vanishes_up_to_the_bound() {
        let a = kx3();
        let k = lambda_module(&a);
        let reg = GradedModule::regular(a.clone()).share();
        let scan = ext_vanishing_above_zero(&k, &reg, 8).unwrap();
        assert_eq!(scan.first_nonzero, None);
        assert_eq!(scan.checked_to, 8);
        assert!(!scan.exhaustive);
    }

    #[test]
    fn vanishing_scan_reports_the_first_nonzero_group() {
        let a = kx3();
        let k = lambda_module(&a);
        let scan = ext_vanishing_above_zero(&k, &k, 8).unwrap();
        assert_eq!(scan.first_nonzero, Some((1, -1, 1)));
        assert_eq!(scan.checked_to, 1);
    }

    #[test]
    fn vanishing_scan_is_exhaustive_over_a_hereditary_algebra() {
        let a = ka2();
        let s1 = simple(&a, 0, 0).unwrap();
        let s2 = simple(&a, 1, 0).unwrap();
        let scan = ext_vanishing_above_zero(&s2, &s1, 8).unwrap();
        assert_eq!(scan.first_nonzero, None);
        assert!(scan.exhaustive);
        assert!(scan.checked_to < 8);
    }

    #[test]
    fn the_selfinjective_regular_module_has_injective_dimension_zero() {
        let a = kx3();
        let reg = GradedModule::regular(a.clone()).share();
        assert_eq!(injective_dimension(&reg, 5).unwrap(), DimVerdict::Finite(0));
        let (right, left) = iwanaga_gorenstein(&a, 5).unwrap();
        assert_eq!(right, DimVerdict::Finite(0));
        assert_eq!(left, DimVerdict::Finite(0));
    }

    #[test]
    fn the_path_algebra_is_gorenstein_of_dimension_one() {
        let a = ka2();
        let (right, left) = iwanaga_gorenstein(&a, 5).unwrap();
        assert_eq!(right, DimVerdict::Finite(1));
        assert_eq!(left, DimVerdict::Finite(1));
    }

    #[test]
    fn minimal_and_free_complexes_agree() {
        let a = kx3();
        let k = lambda_module(&a);
        let mut series = ExtSeries::new(&k, &k).unwrap();
        for q in 0..=2 {
            assert_eq!(series.ext(q).unwrap(), ext_via_free(&k, &k, q), "q = {q}");
        }
        for seed in [7u64, 11] {
            let m = random_module(&a, seed).unwrap();
            let n = random_module(&a, seed + 100).unwrap();
            if m.is_zero() || n.is_zero() {
                continue;
            }
            let mut s = ExtSeries::new(&m, &n).unwrap();
            for q in 0..=2 {
                assert_eq!(s.ext(q).unwrap(), ext_via_free(&m, &n, q), "seed {seed} q {q}");
            }
        }
    }
}
