//! The stable module category: Hom modulo maps factoring through
//! projectives, syzygy functors on objects and morphisms, and the
//! singularity-category Hom computed by Buchweitz-style syzygy reduction.
//!
//! Syzygies here are always taken projective-free: after each kernel the
//! projective direct summands are split off, which keeps the stable
//! computations canonical and the modules small. Splitting is detected
//! through the cover of the module: a summand e_vA(-d) splits iff some
//! degree-0 map to it misses the radical, and since the top of e_vA(-d) is
//! one-dimensional this can be read off basis element by basis element.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::algebra::GradedAlgebra;
use crate::error::{GhError, GhResult};
use crate::ext::{ExtSeries, GorensteinCertificate};
use crate::field::Scalar;
use crate::matrix::{coords_in_span, Matrix};
use crate::module::{graded_hom, graded_hom_deg, GradedModule, ModuleMap};
use crate::resolution::{augmentation, cover_summand, projective_cover, top_quotient};

/// grHom(M, N)_0 together with the subspace of maps factoring through a
/// projective and representatives for a complement.
pub struct StableHomSpace<K: Scalar> {
    pub hom_basis: Vec<ModuleMap<K>>,
    pub representatives: Vec<ModuleMap<K>>,
    factoring_flat: Matrix<K>,
    factoring_rank: usize,
}

impl<K: Scalar> StableHomSpace<K> {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn hom_dim(&self) -> usize {
        self.hom_basis.len()
    }

    pub fn factoring_dim(&self) -> usize {
        self.factoring_rank
    }

    /// Does this degree-0 map factor through a projective?
    pub fn stably_zero(&self, f: &ModuleMap<K>) -> bool {
        let flat = f.flatten();
        if self.factoring_flat.cols() == 0 {
            return flat.iter().all(num_traits::Zero::is_zero);
        }
        coords_in_span(&self.factoring_flat, &Matrix::column(&flat)).is_some()
    }

    pub fn stably_equal(&self, f: &ModuleMap<K>, g: &ModuleMap<K>) -> GhResult<bool> {
        Ok(self.stably_zero(&f.sub(g)?))
    }

    /// Coordinates of the stable class of `f` in the representative basis.
    /// The representatives are independent modulo the factoring subspace, so
    /// the coordinates are unique even though the lift is not.
    pub fn coordinates(&self, f: &ModuleMap<K>) -> GhResult<Vec<K>> {
        let n = self.representatives.len();
        if n == 0 {
            if self.stably_zero(f) {
                return Ok(Vec::new());
            }
            return Err(GhError::Internal("map lies outside the recorded Hom space".into()));
        }
        let flat = f.flatten();
        let fcols = self.factoring_flat.cols();
        let mut combined = Matrix::zero(flat.len(), n + fcols);
        for (j, rep) in self.representatives.iter().enumerate() {
            for (r, x) in rep.flatten().into_iter().enumerate() {
                combined[(r, j)] = x;
            }
        }
        for j in 0..fcols {
            for r in 0..flat.len() {
                combined[(r, n + j)] = self.factoring_flat[(r, j)].clone();
            }
        }
        let coords = coords_in_span(&combined, &Matrix::column(&flat))
            .ok_or_else(|| GhError::Internal("map lies outside the recorded Hom space".into()))?;
        Ok((0..n).map(|r| coords[(r, 0)].clone()).collect())
    }
}

/// Hom(M, N)_0 modulo the image of Hom(M, P(N))_0 composed with the cover
/// P(N) -> N; every map through any projective factors through the cover.
pub fn stable_hom<K: Scalar>(
    m: &Arc<GradedModule<K>>,
    n: &Arc<GradedModule<K>>,
) -> GhResult<StableHomSpace<K>> {
    let hom_basis = graded_hom_deg(m, n, 0)?;
    if hom_basis.is_empty() {
        return Ok(StableHomSpace {
            hom_basis,
            representatives: Vec::new(),
            factoring_flat: Matrix::zero(0, 0),
            factoring_rank: 0,
        });
    }
    let flat_len = hom_basis[0].flatten().len();
    let mut hom_flat = Matrix::zero(flat_len, hom_basis.len());
    for (j, f) in hom_basis.iter().enumerate() {
        for (r, x) in f.flatten().into_iter().enumerate() {
            hom_flat[(r, j)] = x;
        }
    }
    let cover = projective_cover(n)?;
    let through = graded_hom_deg(m, &cover.module, 0)?;
    let mut factoring_flat = Matrix::zero(flat_len, through.len());
    for (j, psi) in through.iter().enumerate() {
        for (r, x) in psi.compose(&cover.map)?.flatten().into_iter().enumerate() {
            factoring_flat[(r, j)] = x;
        }
    }
    let coords = coords_in_span(&hom_flat, &factoring_flat)
        .ok_or_else(|| GhError::Internal("factoring map escaped the Hom space".into()))?;
    let (_, free) = coords.complement_projection();
    let representatives = free.iter().map(|&j| hom_basis[j].clone()).collect();
    let factoring_rank = hom_basis.len() - free.len();
    Ok(StableHomSpace { hom_basis, representatives, factoring_flat, factoring_rank })
}

/// A module split as (projective-free part) ⊕ (split-off projectives), with
/// the section and retraction for the projective-free part.
pub struct ProjectiveSplit<K: Scalar> {
    pub part: Arc<GradedModule<K>>,
    pub include: ModuleMap<K>,
    pub project: ModuleMap<K>,
    /// (vertex, generation degree) of each projective summand removed.
    pub split_off: Vec<(usize, i64)>,
}

pub fn split_projectives<K: Scalar>(m: &Arc<GradedModule<K>>) -> GhResult<ProjectiveSplit<K>> {
    let algebra = m.algebra().clone();
    let rad = algebra.radical()?;
    let mut part = m.clone();
    let mut include = ModuleMap::identity(m);
    let mut project = ModuleMap::identity(m);
    let mut split_off = Vec::new();
    'scan: loop {
        if part.is_zero() {
            break;
        }
        let cover = projective_cover(&part)?;
        let types: BTreeSet<(usize, i64)> =
            cover.summands.iter().map(|s| (s.vertex, s.gen_degree)).collect();
        for (v, d) in types {
            let summand = cover_summand(&algebra, v, d)?;
            let (_, to_top) = top_quotient(&summand.module, &rad)?;
            for phi in &graded_hom_deg(&part, &summand.module, 0)? {
                if phi.compose(&to_top)?.is_zero() {
                    continue;
                }
                // the top of e_vA(-d) is simple, so phi is onto and splits
                let (kernel, kinc) = phi.kernel();
                let (x, _) = phi.comp(d).solve(&summand.gen_coords).ok_or_else(|| {
                    GhError::Internal("map onto the top fails to reach the generator".into())
                })?;
                let e = &algebra.idempotents()[v];
                let xe = part.act_elt(e, 0, d).mul(&Matrix::column(&x)).col(0);
                let section =
                    summand.include.compose(&augmentation(&algebra, &part, d, 0, &xe)?)?;
                let retract = ModuleMap::identity(&part).sub(&phi.compose(&section)?)?;
                let kproj = factor_through(&kinc, &retract)?;
                include = kinc.compose(&include)?;
                project = project.compose(&kproj)?;
                split_off.push((v, d));
                part = kernel;
                continue 'scan;
            }
        }
        break;
    }
    Ok(ProjectiveSplit { part, include, project, split_off })
}

/// Factor `f` through the injective degree-0 map `inc` with the same target.
fn factor_through<K: Scalar>(inc: &ModuleMap<K>, f: &ModuleMap<K>) -> GhResult<ModuleMap<K>> {
    let mut comps = BTreeMap::new();
    for d in f.source().degree_range() {
        let block = f.comp(d);
        if block.rows() == 0 || block.cols() == 0 {
            continue;
        }
        let coords = coords_in_span(&inc.comp(d + f.deg()), &block).ok_or_else(|| {
            GhError::Internal("map does not land in the submodule it should factor through".into())
        })?;
        if !coords.is_zero() {
            comps.insert(d, coords);
        }
    }
    ModuleMap::new(f.source().clone(), inc.source().clone(), f.deg(), comps)
}

/// The projective-free first syzygy.
pub fn reduced_syzygy<K: Scalar>(m: &Arc<GradedModule<K>>) -> GhResult<Arc<GradedModule<K>>> {
    let cover = projective_cover(m)?;
    let (syzygy, _) = cover.map.kernel();
    Ok(split_projectives(&syzygy)?.part)
}

/// Omega^k with projective summands split off at every stage, the module m
/// itself included.
pub fn reduced_omega_power<K: Scalar>(
    m: &Arc<GradedModule<K>>,
    k: usize,
) -> GhResult<Arc<GradedModule<K>>> {
    let mut current = split_projectives(m)?.part;
    for _ in 0..k {
        current = reduced_syzygy(&current)?;
    }
    Ok(current)
}

/// The syzygy functor on a morphism: lift f through the covers, restrict to
/// the kernels, then pass to the projective-free parts. Well defined up to
/// maps factoring through a projective.
pub fn omega_on_morphism<K: Scalar>(f: &ModuleMap<K>) -> GhResult<ModuleMap<K>> {
    let source_cover = projective_cover(f.source())?;
    let (source_syz, source_inc) = source_cover.map.kernel();
    let source_red = split_projectives(&source_syz)?;
    let target_cover = projective_cover(f.target())?;
    let (target_syz, target_inc) = target_cover.map.kernel();
    let target_red = split_projectives(&target_syz)?;
    if source_red.part.is_zero() || target_red.part.is_zero() {
        return Ok(ModuleMap::zero(source_red.part, target_red.part, f.deg()));
    }
    let through = source_cover.map.compose(f)?;
    let gens = source_cover.generator_images(&through);
    let mut lifted = Vec::with_capacity(gens.len());
    for (s, image) in source_cover.summands.iter().zip(&gens) {
        let d = s.gen_degree + f.deg();
        if target_cover.module.dim_at(d) == 0 {
            if image.iter().any(|x| !num_traits::Zero::is_zero(x)) {
                return Err(GhError::Internal("cover misses a generator image".into()));
            }
            lifted.push(Vec::new());
        } else {
            let (sol, _) = target_cover.map.comp(d).solve(image).ok_or_else(|| {
                GhError::Internal("cover map fails to be surjective".into())
            })?;
            lifted.push(sol);
        }
    }
    let lift = source_cover.map_from_generators(&target_cover.module, f.deg(), &lifted)?;
    let restricted = source_inc.compose(&lift)?;
    let between_syzygies = factor_through(&target_inc, &restricted)?;
    source_red.include.compose(&between_syzygies)?.compose(&target_red.project)
}

pub fn omega_power_on_morphism<K: Scalar>(
    f: &ModuleMap<K>,
    steps: usize,
) -> GhResult<ModuleMap<K>> {
    let mut current = f.clone();
    for _ in 0..steps {
        current = omega_on_morphism(&current)?;
    }
    Ok(current)
}

/// grHom(M, A) as a module over the opposite algebra, graded by internal
/// degree; the action of an element is postcomposition with left
/// multiplication on the regular module.
pub fn a_dual<K: Scalar>(
    m: &Arc<GradedModule<K>>,
) -> GhResult<(Arc<GradedAlgebra<K>>, Arc<GradedModule<K>>)> {
    let algebra = m.algebra().clone();
    let op = Arc::new(algebra.opposite());
    if m.is_zero() {
        let zero = GradedModule::zero_module(op.clone()).share();
        return Ok((op, zero));
    }
    let regular = GradedModule::regular(algebra.clone()).share();
    let bases = graded_hom(m, &regular)?;
    let Some((&min_i, _)) = bases.iter().next() else {
        let zero = GradedModule::zero_module(op.clone()).share();
        return Ok((op, zero));
    };
    let (&max_i, _) = bases.iter().next_back().expect("nonempty");
    let nslots = (max_i - min_i + 1) as usize;
    let empty = Vec::new();
    let basis_at = |i: i64| -> &Vec<ModuleMap<K>> { bases.get(&i).unwrap_or(&empty) };
    let flat_at = |i: i64| -> Matrix<K> {
        let fs = basis_at(i);
        if fs.is_empty() {
            return Matrix::zero(0, 0);
        }
        let len = fs[0].flatten().len();
        let mut mat = Matrix::zero(len, fs.len());
        for (j, f) in fs.iter().enumerate() {
            for (r, x) in f.flatten().into_iter().enumerate() {
                mat[(r, j)] = x;
            }
        }
        mat
    };
    let dims: Vec<usize> = (0..nslots).map(|s| basis_at(min_i + s as i64).len()).collect();
    let mut action = Vec::with_capacity(algebra.dim());
    for b in 0..algebra.dim() {
        let e = algebra.degree(b) as i64;
        let postcompose = left_multiplication_map(&algebra, &regular, b)?;
        let mut family = Vec::with_capacity(nslots);
        for s in 0..nslots {
            let i = min_i + s as i64;
            let fs = basis_at(i);
            let higher = basis_at(i + e);
            let mut mat = Matrix::zero(higher.len(), fs.len());
            if !fs.is_empty() && !higher.is_empty() {
                let flat_higher = flat_at(i + e);
                for (j, f) in fs.iter().enumerate() {
                    let composite = f.compose(&postcompose)?;
                    let coords = coords_in_span(&flat_higher, &Matrix::column(&composite.flatten()))
                        .ok_or_else(|| {
                            GhError::Internal("postcomposition left the Hom space".into())
                        })?;
                    for r in 0..higher.len() {
                        mat[(r, j)] = coords[(r, 0)].clone();
                    }
                }
            }
            family.push(mat);
        }
        action.push(family);
    }
    let dual = GradedModule::new(op.clone(), min_i, dims, action)?.share();
    Ok((op, dual))
}

/// Left multiplication by a basis element as a right-module endomap of the
/// regular module.
fn left_multiplication_map<K: Scalar>(
    algebra: &Arc<GradedAlgebra<K>>,
    regular: &Arc<GradedModule<K>>,
    b: usize,
) -> GhResult<ModuleMap<K>> {
    let e = algebra.degree(b) as i64;
    let full = algebra.left_mult_matrix(&algebra.basis_elt(b));
    let mut comps = BTreeMap::new();
    for d in regular.degree_range() {
        let cols = algebra.basis_of_degree(d as usize);
        let rows = if d + e <= algebra.ell() as i64 && d + e >= 0 {
            algebra.basis_of_degree((d + e) as usize)
        } else {
            &[]
        };
        if cols.is_empty() || rows.is_empty() {
            continue;
        }
        let mut comp = Matrix::zero(rows.len(), cols.len());
        for (rj, &r) in rows.iter().enumerate() {
            for (cj, &c) in cols.iter().enumerate() {
                comp[(rj, cj)] = full[(r, c)].clone();
            }
        }
        if !comp.is_zero() {
            comps.insert(d, comp);
        }
    }
    ModuleMap::new(regular.clone(), regular.clone(), e, comps)
}

/// Rebuild a module over a structurally identical algebra handle.
fn module_over<K: Scalar>(
    m: &Arc<GradedModule<K>>,
    algebra: &Arc<GradedAlgebra<K>>,
) -> GhResult<Arc<GradedModule<K>>> {
    if !m.algebra().same_structure(algebra) {
        return Err(GhError::Internal("retargeting a module across different algebras".into()));
    }
    if m.is_zero() {
        return Ok(GradedModule::zero_module(algebra.clone()).share());
    }
    let dims: Vec<usize> = m.degree_range().map(|d| m.dim_at(d)).collect();
    let action = (0..algebra.dim())
        .map(|b| m.degree_range().map(|d| m.act(b, d).clone()).collect())
        .collect();
    Ok(GradedModule::new(algebra.clone(), m.min_degree(), dims, action)?.share())
}

/// Is every Ext group above degree zero from m into the regular module zero?
/// Over an algebra with certified finite self-injective dimension the scan up
/// to that dimension is exhaustive.
pub fn cohen_macaulay<K: Scalar>(
    m: &Arc<GradedModule<K>>,
    cert: &GorensteinCertificate,
) -> GhResult<bool> {
    let regular = GradedModule::regular(m.algebra().clone()).share();
    let mut series = ExtSeries::new(m, &regular)?;
    for q in 1..=cert.injdim() {
        if !series.ext(q)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The inverse syzygy of a Cohen-Macaulay module: dualize into the algebra,
/// take a projective-free syzygy on the other side, and dualize back.
pub fn cosyzygy<K: Scalar>(
    m: &Arc<GradedModule<K>>,
    cert: &GorensteinCertificate,
) -> GhResult<Arc<GradedModule<K>>> {
    if m.is_zero() {
        return Ok(GradedModule::zero_module(m.algebra().clone()).share());
    }
    if !cohen_macaulay(m, cert)? {
        return Err(GhError::Invalid(
            "cosyzygy needs a Cohen-Macaulay module over a Gorenstein algebra".into(),
        ));
    }
    let (_, dual) = a_dual(m)?;
    let reduced = reduced_syzygy(&dual)?;
    let (_, back) = a_dual(&reduced)?;
    module_over(&back, m.algebra())
}

/// Hom in the singularity category between M and N[t], computed as the
/// stable Hom between syzygies pushed past the certified self-injective
/// dimension: b = d0 + max(0, -t) and a = b + t.
pub struct SingHom<K: Scalar> {
    pub space: StableHomSpace<K>,
    pub a: usize,
    pub b: usize,
}

pub fn sing_hom<K: Scalar>(
    m: &Arc<GradedModule<K>>,
    n: &Arc<GradedModule<K>>,
    t: i64,
    cert: &GorensteinCertificate,
) -> GhResult<SingHom<K>> {
    let d0 = cert.injdim() as i64;
    let b = d0 + (-t).max(0);
    let a = b + t;
    let oma = reduced_omega_power(m, a as usize)?;
    let omb = reduced_omega_power(n, b as usize)?;
    let space = stable_hom(&oma, &omb)?;
    let again = stable_hom(&reduced_syzygy(&oma)?, &reduced_syzygy(&omb)?)?;
    if again.dim() != space.dim() {
        return Err(GhError::Internal(format!(
            "syzygy-shift dimension disagrees: {} at ({a}, {b}) vs {} one step further",
            space.dim(),
            again.dim()
        )));
    }
    Ok(SingHom { space, a: a as usize, b: b as usize })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::{certify_gorenstein, GorensteinStatus};
    use crate::field::{FieldSpec, Rat};
    use crate::module::{direct_sum, lambda_module, module_iso, projective, random_module, simple, IsoVerdict};
    use crate::quiver::QuiverPresentation;

    fn assert_iso(a: &Arc<GradedModule<Rat>>, b: &Arc<GradedModule<Rat>>, ctx: &str) {
        match module_iso(a, b).unwrap() {
            IsoVerdict::Iso(_) => {}
            IsoVerdict::NotIso(w) => panic!("{ctx}: {w}"),
            IsoVerdict::Undecided => panic!("{ctx}: isomorphism search undecided"),
        }
    }

    fn kx(n: usize) -> Arc<GradedAlgebra<Rat>> {
        let mut q = QuiverPresentation::new(vec!["v".into()]);
        let x = q.arrow("x", 0, 0, 1);
        q.monomial_relation(vec![x; n]);
        Arc::new(q.compile(FieldSpec::Rationals).unwrap())
    }

    fn ka2() -> Arc<GradedAlgebra<Rat>> {
        let mut q = QuiverPresentation::new(vec!["1".into(), "2".into()]);
        q.arrow("a", 0, 1, 1);
        Arc::new(q.compile(FieldSpec::Rationals).unwrap())
    }

    fn certificate(a: &Arc<GradedAlgebra<Rat>>, bound: usize) -> GorensteinCertificate {
        match certify_gorenstein(a, bound).unwrap() {
            GorensteinStatus::Certified(c) => c,
            GorensteinStatus::NotCertified { .. } => panic!("expected a Gorenstein algebra"),
        }
    }

    /// The tilting module A_{<= 1} ⊕ (A(-1))_{<= 1} over k[x]/(x³).
    fn module_t(a: &Arc<GradedAlgebra<Rat>>) -> Arc<GradedModule<Rat>> {
        let r = GradedModule::regular(a.clone()).share();
        let m1 = Arc::new(r.truncate_below(2));
        let m2 = Arc::new(r.shift(-1).truncate_below(2));
        direct_sum(&[m1, m2]).0
    }

    #[test]
    fn stable_hom_from_a_projective_vanishes() {
        let a = kx(3);
        let p = projective(&a, 0, 0);
        let k = lambda_module(&a);
        let space = stable_hom(&p, &k).unwrap();
        assert_eq!(space.dim(), 0);
        assert_eq!(space.hom_dim(), 1);
        assert_eq!(space.factoring_dim(), 1);
    }

    #[test]
    fn stable_endomorphisms_of_the_tilting_module() {
        let a = kx(3);
        let t = module_t(&a);
        assert_eq!(t.total_dim(), 3);
        let space = stable_hom(&t, &t).unwrap();
        assert_eq!(space.hom_dim(), 3);
        assert_eq!(space.factoring_dim(), 0);
        assert_eq!(space.dim(), 3);
    }

    #[test]
    fn stable_endomorphisms_of_the_simple_over_the_dual_numbers() {
        let a = kx(2);
        let k = lambda_module(&a);
        let space = stable_hom(&k, &k).unwrap();
        assert_eq!(space.dim(), 1);
    }

    #[test]
    fn splitting_removes_an_explicit_projective_summand() {
        let a = kx(3);
        let p = projective(&a, 0, 1);
        let k = lambda_module(&a);
        let (sum, _, _) = direct_sum(&[k.clone(), p]);
        let split = split_projectives(&sum).unwrap();
        assert_eq!(split.split_off, vec![(0, 1)]);
        assert_iso(&split.part, &k, "projective-free part should be the simple");
        let round = split.include.compose(&split.project).unwrap();
        assert!(round.sub(&ModuleMap::identity(&split.part)).unwrap().is_zero());
    }

    #[test]
    fn splitting_leaves_a_projective_free_module_alone() {
        let a = kx(3);
        let k = lambda_module(&a);
        let split = split_projectives(&k).unwrap();
        assert!(split.split_off.is_empty());
        assert_eq!(split.part.dims_map(), k.dims_map());
    }

    #[test]
    fn singularity_hom_of_the_tilting_module_at_all_small_shifts() {
        let a = kx(3);
        let cert = certificate(&a, 5);
        assert_eq!(cert.injdim(), 0);
        let t = module_t(&a);
        for shift in -3..=3i64 {
            let s = sing_hom(&t, &t, shift, &cert).unwrap();
            let expected = if shift == 0 { 3 } else { 0 };
            assert_eq!(s.space.dim(), expected, "shift {shift}");
        }
    }

    #[test]
    fn singularity_hom_from_a_projective_vanishes() {
        let a = kx(3);
        let cert = certificate(&a, 5);
        let p = projective(&a, 0, 0);
        let k = lambda_module(&a);
        for shift in -1..=1i64 {
            assert_eq!(sing_hom(&p, &k, shift, &cert).unwrap().space.dim(), 0);
        }
    }

    #[test]
    fn omega_of_the_identity_is_stably_the_identity() {
        let a = kx(3);
        let t = module_t(&a);
        let of = omega_on_morphism(&ModuleMap::identity(&t)).unwrap();
        let ot = of.source().clone();
        assert_eq!(ot.dims_map(), of.target().dims_map());
        let space = stable_hom(&ot, of.target()).unwrap();
        assert!(space.stably_equal(&of, &ModuleMap::identity(&ot)).unwrap());
    }

    #[test]
    fn omega_kills_maps_that_factor_through_projectives() {
        let a = kx(3);
        let k = lambda_module(&a);
        let t = module_t(&a);
        let cover = projective_cover(&t).unwrap();
        for psi in &graded_hom_deg(&k, &cover.module, 0).unwrap() {
            let f = psi.compose(&cover.map).unwrap();
            let of = omega_on_morphism(&f).unwrap();
            let space = stable_hom(of.source(), of.target()).unwrap();
            assert!(space.stably_zero(&of));
        }
    }

    #[test]
    fn omega_is_stably_functorial_on_random_maps() {
        let a = kx(3);
        for seed in [3u64, 5, 9] {
            let m1 = random_module(&a, seed).unwrap();
            let m2 = random_module(&a, seed + 50).unwrap();
            let m3 = random_module(&a, seed + 100).unwrap();
            let fs = graded_hom_deg(&m1, &m2, 0).unwrap();
            let gs = graded_hom_deg(&m2, &m3, 0).unwrap();
            let (Some(f), Some(g)) = (fs.first(), gs.first()) else { continue };
            let composite = f.compose(g).unwrap();
            let lhs = omega_on_morphism(&composite).unwrap();
            let rhs = omega_on_morphism(f)
                .unwrap()
                .compose(&omega_on_morphism(g).unwrap())
                .unwrap();
            let space = stable_hom(lhs.source(), lhs.target()).unwrap();
            assert!(space.stably_equal(&lhs, &rhs).unwrap(), "seed {seed}");
        }
    }

    #[test]
    fn the_algebra_dual_of_the_regular_module_is_the_opposite_regular() {
        let a = kx(3);
        let r = GradedModule::regular(a.clone()).share();
        let (op, dual) = a_dual(&r).unwrap();
        let op_regular = GradedModule::regular(op).share();
        assert_iso(&dual, &op_regular, "dual of regular should be regular");
    }

    #[test]
    fn cosyzygy_round_trip_recovers_the_simple() {
        let a = kx(3);
        let cert = certificate(&a, 5);
        let k = lambda_module(&a);
        let ok = reduced_syzygy(&k).unwrap();
        let back = cosyzygy(&ok, &cert).unwrap();
        assert_iso(&back, &k, "cosyzygy of the syzygy should be the simple");
    }

    #[test]
    fn cosyzygy_round_trips_on_random_modules_over_a_selfinjective_algebra() {
        let a = kx(3);
        let cert = certificate(&a, 5);
        for seed in [2u64, 4, 6, 8, 10] {
            let x = split_projectives(&random_module(&a, seed).unwrap()).unwrap().part;
            if x.is_zero() {
                continue;
            }
            let cosyz = cosyzygy(&x, &cert).unwrap();
            let round = reduced_syzygy(&cosyz).unwrap();
            assert_iso(&round, &x, &format!("round trip at seed {seed}"));
        }
    }

    #[test]
    fn cosyzygy_of_zero_is_zero() {
        let a = kx(3);
        let cert = certificate(&a, 5);
        let zero = GradedModule::zero_module(a.clone()).share();
        assert!(cosyzygy(&zero, &cert).unwrap().is_zero());
    }

    #[test]
    fn cosyzygy_rejects_a_module_that_is_not_cohen_macaulay() {
        let a = ka2();
        let cert = certificate(&a, 5);
        assert_eq!(cert.injdim(), 1);
        let s1 = simple(&a, 0, 0).unwrap();
        assert!(!cohen_macaulay(&s1, &cert).unwrap());
        assert!(matches!(cosyzygy(&s1, &cert), Err(GhError::Invalid(_))));
        let s2 = simple(&a, 1, 0).unwrap();
        assert!(cohen_macaulay(&s2, &cert).unwrap());
    }
}
