//! Minimal projective resolutions: tops, projective covers, syzygies, and
//! projective dimension verdicts.
//!
//! A dimension is never claimed infinite. `Finite(d)` is always certified by
//! an explicit resolution whose (d+1)-st syzygy vanishes, `AtLeast(b)` either
//! by a nonzero b-th syzygy or by a proof that the syzygies can never vanish:
//! a syzygy repeating up to shift, or a semisimple syzygy whose constituent
//! simple modules depend on each other cyclically.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use crate::algebra::GradedAlgebra;
use crate::error::{GhError, GhResult};
use crate::field::Scalar;
use crate::matrix::{coords_in_span, Matrix};
use crate::module::{
    direct_sum, projective_with_include, quotient, radical_submodule, GradedModule, ModuleMap,
};

/// Syzygies whose covers would exceed this total dimension stop the
/// resolution early with an honest partial verdict.
const MAX_COVER_DIM: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimVerdict {
    Finite(usize),
    AtLeast(usize),
}

impl DimVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, DimVerdict::Finite(_))
    }
}

impl std::fmt::Display for DimVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DimVerdict::Finite(d) => write!(f, "{d}"),
            DimVerdict::AtLeast(b) => write!(f, ">= {b}"),
        }
    }
}

/// One indecomposable projective e_vA(−d) inside a cover, with its inclusion
/// into the shifted regular module and the coordinates of its generator in
/// its own basis at `gen_degree`.
pub struct CoverSummand<K: Scalar> {
    pub vertex: usize,
    pub gen_degree: i64,
    pub module: Arc<GradedModule<K>>,
    pub include: ModuleMap<K>,
    pub gen_coords: Vec<K>,
}

/// A projective cover P → M with its summand decomposition.
pub struct ProjectiveCover<K: Scalar> {
    pub summands: Vec<CoverSummand<K>>,
    pub module: Arc<GradedModule<K>>,
    pub injections: Vec<ModuleMap<K>>,
    pub projections: Vec<ModuleMap<K>>,
    pub map: ModuleMap<K>,
}

pub struct ResolutionStep<K: Scalar> {
    pub cover: ProjectiveCover<K>,
    pub syzygy: Arc<GradedModule<K>>,
    pub include: ModuleMap<K>,
}

/// A minimal projective resolution computed to a finite depth. `complete`
/// means the last syzygy vanishes, so the listed steps are the whole
/// resolution.
pub struct MinimalResolution<K: Scalar> {
    pub target: Arc<GradedModule<K>>,
    pub steps: Vec<ResolutionStep<K>>,
    pub complete: bool,
}

impl<K: Scalar> MinimalResolution<K> {
    pub fn module(&self, n: usize) -> &Arc<GradedModule<K>> {
        &self.steps[n].cover.module
    }

    /// The differential P_n → P_{n−1} for n ≥ 1, through the syzygy.
    pub fn differential(&self, n: usize) -> GhResult<ModuleMap<K>> {
        self.steps[n].cover.map.compose(&self.steps[n - 1].include)
    }
}

/// The map A(−gen_degree) → target of internal degree `map_degree` sending
/// the unit to `gen`, an element of the target in degree
/// gen_degree + map_degree.
pub fn augmentation<K: Scalar>(
    algebra: &Arc<GradedAlgebra<K>>,
    target: &Arc<GradedModule<K>>,
    gen_degree: i64,
    map_degree: i64,
    gen: &[K],
) -> GhResult<ModuleMap<K>> {
    let free = Arc::new(GradedModule::regular(algebra.clone()).shift(-gen_degree));
    let gd = gen_degree + map_degree;
    if gen.len() != target.dim_at(gd) {
        return Err(GhError::Invalid(format!(
            "generator image has length {}, expected {} in degree {gd}",
            gen.len(),
            target.dim_at(gd)
        )));
    }
    let gen_col = Matrix::column(gen);
    let mut comps = BTreeMap::new();
    for s in free.degree_range() {
        let deg_a = (s - gen_degree) as usize;
        let idx = algebra.basis_of_degree(deg_a);
        let rows_out = target.dim_at(s + map_degree);
        if idx.is_empty() || rows_out == 0 {
            continue;
        }
        let mut comp = Matrix::zero(rows_out, idx.len());
        for (c, &b) in idx.iter().enumerate() {
            let col = target.act(b, gd).mul(&gen_col);
            for r in 0..rows_out {
                comp[(r, c)] = col[(r, 0)].clone();
            }
        }
        if !comp.is_zero() {
            comps.insert(s, comp);
        }
    }
    ModuleMap::new(free, target.clone(), map_degree, comps)
}

/// M/M·rad with the quotient map.
pub fn top_quotient<K: Scalar>(
    m: &Arc<GradedModule<K>>,
    rad: &[Vec<K>],
) -> GhResult<(Arc<GradedModule<K>>, ModuleMap<K>)> {
    let (mrad, inc) = radical_submodule(m, rad);
    let mut bases = BTreeMap::new();
    for d in mrad.degree_range() {
        if mrad.dim_at(d) > 0 {
            bases.insert(d, inc.comp(d));
        }
    }
    quotient(m, &bases)
}

pub fn is_semisimple_module<K: Scalar>(m: &Arc<GradedModule<K>>, rad: &[Vec<K>]) -> bool {
    radical_submodule(m, rad).0.is_zero()
}

pub(crate) fn cover_summand<K: Scalar>(
    algebra: &Arc<GradedAlgebra<K>>,
    v: usize,
    gen_degree: i64,
) -> GhResult<CoverSummand<K>> {
    let (_, inc0) = projective_with_include(algebra, v);
    let include = inc0.shift(-gen_degree);
    let module = include.source().clone();
    let e = &algebra.idempotents()[v];
    let e_deg0: Vec<K> = algebra.basis_of_degree(0).iter().map(|&b| e[b].clone()).collect();
    let coords = coords_in_span(&include.comp(gen_degree), &Matrix::column(&e_deg0))
        .ok_or_else(|| GhError::Internal("idempotent is missing from its own projective".into()))?;
    Ok(CoverSummand { vertex: v, gen_degree, module, include, gen_coords: coords.col(0) })
}

/// Projective cover: one summand e_vA(−d) for each basis vector of the
/// degree-d, vertex-v part of M/M·rad, mapping its generator to a lift.
pub fn projective_cover<K: Scalar>(m: &Arc<GradedModule<K>>) -> GhResult<ProjectiveCover<K>> {
    let algebra = m.algebra().clone();
    if m.is_zero() {
        let zero = GradedModule::zero_module(algebra).share();
        let map = ModuleMap::zero(zero.clone(), m.clone(), 0);
        return Ok(ProjectiveCover {
            summands: Vec::new(),
            module: zero,
            injections: Vec::new(),
            projections: Vec::new(),
            map,
        });
    }
    let rad = algebra.radical()?;
    let (top, q) = top_quotient(m, &rad)?;
    let mut gens: Vec<(usize, i64, Vec<K>)> = Vec::new();
    for d in top.degree_range() {
        if top.dim_at(d) == 0 {
            continue;
        }
        for (v, e) in algebra.idempotents().iter().enumerate() {
            let projector = top.act_elt(e, 0, d);
            for t in projector.transpose().row_space_basis() {
                let (lift, _) = q.comp(d).solve(&t).ok_or_else(|| {
                    GhError::Internal("quotient onto the top is not surjective".into())
                })?;
                let g = m.act_elt(e, 0, d).mul(&Matrix::column(&lift));
                gens.push((v, d, g.col(0)));
            }
        }
    }
    let mut summands = Vec::with_capacity(gens.len());
    for (v, d, _) in &gens {
        summands.push(cover_summand(&algebra, *v, *d)?);
    }
    let parts: Vec<Arc<GradedModule<K>>> = summands.iter().map(|s| s.module.clone()).collect();
    let (p, injections, projections) = direct_sum(&parts);
    let mut total = ModuleMap::zero(p.clone(), m.clone(), 0);
    for (t, (_, d, g)) in gens.iter().enumerate() {
        let aug = summands[t].include.compose(&augmentation(&algebra, m, *d, 0, g)?)?;
        total = total.add(&projections[t].compose(&aug)?)?;
    }
    Ok(ProjectiveCover { summands, module: p, injections, projections, map: total })
}

impl<K: Scalar> ProjectiveCover<K> {
    /// Images of the summand generators under a map out of the cover.
    pub fn generator_images(&self, f: &ModuleMap<K>) -> Vec<Vec<K>> {
        self.summands
            .iter()
            .zip(&self.injections)
            .map(|(s, inj)| {
                let in_p = inj.comp(s.gen_degree).mul(&Matrix::column(&s.gen_coords));
                f.comp(s.gen_degree).mul(&in_p).col(0)
            })
            .collect()
    }

    /// The map out of the cover of internal degree `map_degree` determined
    /// by the given generator images; entry t must lie in the target at
    /// degree gen_degree_t + map_degree.
    pub fn map_from_generators(
        &self,
        target: &Arc<GradedModule<K>>,
        map_degree: i64,
        gens: &[Vec<K>],
    ) -> GhResult<ModuleMap<K>> {
        if gens.len() != self.summands.len() {
            return Err(GhError::Invalid(format!(
                "{} generator images for a cover with {} summands",
                gens.len(),
                self.summands.len()
            )));
        }
        let algebra = self.module.algebra().clone();
        let mut total = ModuleMap::zero(self.module.clone(), target.clone(), map_degree);
        for (t, s) in self.summands.iter().enumerate() {
            let aug = augmentation(&algebra, target, s.gen_degree, map_degree, &gens[t])?;
            let piece = self.projections[t].compose(&s.include.compose(&aug)?)?;
            total = total.add(&piece)?;
        }
        Ok(total)
    }
}

/// Resolve M by minimal covers for at most `depth` steps.
pub fn minimal_resolution<K: Scalar>(
    m: &Arc<GradedModule<K>>,
    depth: usize,
) -> GhResult<MinimalResolution<K>> {
    let mut steps = Vec::new();
    let mut complete = m.is_zero();
    let mut current = m.clone();
    while !complete && steps.len() < depth {
        let cover = projective_cover(&current)?;
        let (syzygy, include) = cover.map.kernel();
        #[cfg(debug_assertions)]
        check_minimal(&cover, &syzygy, &include)?;
        let done = syzygy.is_zero();
        steps.push(ResolutionStep { cover, syzygy: syzygy.clone(), include });
        if done {
            complete = true;
        } else {
            current = syzygy;
        }
    }
    Ok(MinimalResolution { target: m.clone(), steps, complete })
}

#[cfg(debug_assertions)]
fn check_minimal<K: Scalar>(
    cover: &ProjectiveCover<K>,
    syzygy: &Arc<GradedModule<K>>,
    include: &ModuleMap<K>,
) -> GhResult<()> {
    if syzygy.is_zero() {
        return Ok(());
    }
    let rad = cover.module.algebra().radical()?;
    let (_, prad_inc) = radical_submodule(&cover.module, &rad);
    for d in syzygy.degree_range() {
        if syzygy.dim_at(d) == 0 {
            continue;
        }
        if coords_in_span(&prad_inc.comp(d), &include.comp(d)).is_none() {
            return Err(GhError::Internal(format!(
                "cover is not minimal: syzygy at degree {d} leaves the radical"
            )));
        }
    }
    Ok(())
}

fn occurring_vertices<K: Scalar>(m: &Arc<GradedModule<K>>) -> Vec<usize> {
    let algebra = m.algebra().clone();
    (0..algebra.idempotents().len())
        .filter(|&v| {
            let e = &algebra.idempotents()[v];
            m.degree_range().any(|d| m.dim_at(d) > 0 && !m.act_elt(e, 0, d).is_zero())
        })
        .collect()
}

/// Whether the cover-dependency graph on simple modules has a cycle
/// reachable from `starts`; an edge v → w means S_w is a summand of the
/// semisimple module rad e_vA. The certificate is only valid when rad e_vA
/// is semisimple at every reachable vertex, so syzygies of semisimple
/// modules stay semisimple with support following the edges; if any
/// reachable radical fails to be semisimple this reports no cycle and the
/// caller falls back to resolving step by step.
fn simple_dependency_cycle<K: Scalar>(
    algebra: &Arc<GradedAlgebra<K>>,
    starts: &[usize],
    rad: &[Vec<K>],
) -> GhResult<bool> {
    let nv = algebra.idempotents().len();
    let mut edges: Vec<Option<Vec<usize>>> = vec![None; nv];
    let mut color = vec![0u8; nv];
    for &s in starts {
        if color[s] != 0 {
            continue;
        }
        color[s] = 1;
        let mut stack = vec![(s, 0usize)];
        while let Some((v, i)) = stack.pop() {
            if edges[v].is_none() {
                let (p, _) = projective_with_include(algebra, v);
                let (prad, _) = radical_submodule(&p, rad);
                let out = if prad.is_zero() {
                    Vec::new()
                } else if is_semisimple_module(&prad, rad) {
                    occurring_vertices(&prad)
                } else {
                    return Ok(false);
                };
                edges[v] = Some(out);
            }
            let outs = edges[v].as_ref().expect("edges just filled");
            if i < outs.len() {
                let w = outs[i];
                stack.push((v, i + 1));
                match color[w] {
                    0 => {
                        color[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => return Ok(true),
                    _ => {}
                }
            } else {
                color[v] = 2;
            }
        }
    }
    Ok(false)
}

/// Projective dimension, resolved up to `bound` steps. Repeating syzygies
/// and semisimple syzygies with cyclic simple dependencies certify an
/// infinite dimension early, reported as `AtLeast(bound + 1)`.
pub fn projective_dimension<K: Scalar>(
    m: &Arc<GradedModule<K>>,
    bound: usize,
) -> GhResult<DimVerdict> {
    if m.is_zero() {
        return Ok(DimVerdict::Finite(0));
    }
    let algebra = m.algebra().clone();
    let rad = algebra.radical()?;
    let mut seen: HashSet<String> = HashSet::new();
    let mut current = m.clone();
    let mut k = 0usize;
    loop {
        // current = Ω^k, nonzero
        if k > bound {
            return Ok(DimVerdict::AtLeast(bound + 1));
        }
        if !seen.insert(current.canon_key()) {
            return Ok(DimVerdict::AtLeast(bound + 1));
        }
        if k > 0 && is_semisimple_module(&current, &rad) {
            let verts = occurring_vertices(&current);
            if simple_dependency_cycle(&algebra, &verts, &rad)? {
                return Ok(DimVerdict::AtLeast(bound + 1));
            }
        }
        let cover = projective_cover(&current)?;
        if cover.module.total_dim() > MAX_COVER_DIM {
            return Ok(DimVerdict::AtLeast(k));
        }
        let (syzygy, _) = cover.map.kernel();
        k += 1;
        if syzygy.is_zero() {
            return Ok(DimVerdict::Finite(k - 1));
        }
        current = syzygy;
    }
}

/// Global dimension as the maximum projective dimension of the simple
/// modules.
pub fn global_dimension<K: Scalar>(
    algebra: &Arc<GradedAlgebra<K>>,
    bound: usize,
) -> GhResult<DimVerdict> {
    let mut worst = 0usize;
    for v in 0..algebra.idempotents().len() {
        match projective_dimension(&crate::module::simple(algebra, v, 0)?, bound)? {
            DimVerdict::Finite(d) => worst = worst.max(d),
            DimVerdict::AtLeast(b) => return Ok(DimVerdict::AtLeast(b)),
        }
    }
    Ok(DimVerdict::Finite(worst))
}

/// A not necessarily minimal resolution by full free modules, one generator
/// per basis vector of each syzygy. Returns the chain
/// [F_0 → M, F_1 → F_0, …] with at most depth+1 maps.
pub fn free_resolution<K: Scalar>(
    m: &Arc<GradedModule<K>>,
    depth: usize,
) -> GhResult<Vec<ModuleMap<K>>> {
    let algebra = m.algebra().clone();
    let one = K::one().bind(&algebra.field());
    let mut maps: Vec<ModuleMap<K>> = Vec::new();
    let mut prev_include: Option<ModuleMap<K>> = None;
    let mut current = m.clone();
    for _ in 0..=depth {
        if current.is_zero() {
            break;
        }
        let mut parts = Vec::new();
        let mut gens = Vec::new();
        for d in current.degree_range() {
            for i in 0..current.dim_at(d) {
                parts.push(Arc::new(GradedModule::regular(algebra.clone()).shift(-d)));
                let mut g = vec![K::zero(); current.dim_at(d)];
                g[i] = one.clone();
                gens.push((d, g));
            }
        }
        let (f, _, projections) = direct_sum(&parts);
        let mut total = ModuleMap::zero(f.clone(), current.clone(), 0);
        for (t, (d, g)) in gens.iter().enumerate() {
            total = total.add(&projections[t].compose(&augmentation(&algebra, &current, *d, 0, g)?)?)?;
        }
        let (kernel, kinc) = total.kernel();
        let full = match &prev_include {
            None => total,
            Some(inc) => total.compose(inc)?,
        };
        maps.push(full);
        prev_include = Some(kinc);
        current = kernel;
    }
    Ok(maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldSpec, Rat};
    use crate::module::{module_iso, projective, simple, GradedModule, IsoVerdict};
    use crate::quiver::QuiverPresentation;

    fn kx(n: usize) -> Arc<GradedAlgebra<Rat>> {
        let mut q = QuiverPresentation::new(vec!["v"]);
        let x = q.arrow("x", 0, 0, 1);
        q.monomial_relation(vec![x; n]);
        Arc::new(q.compile(FieldSpec::Rationals).unwrap())
    }

    #[test]
    fn cover_of_the_simple_over_truncated_polynomials() {
        let a = kx(3);
        let s = simple(&a, 0, 0).unwrap();
        let cover = projective_cover(&s).unwrap();
        assert_eq!(cover.summands.len(), 1);
        assert_eq!(cover.summands[0].vertex, 0);
        assert_eq!(cover.summands[0].gen_degree, 0);
        assert_eq!(cover.module.total_dim(), 3);
        let (syz, _) = cover.map.kernel();
        assert_eq!(syz.dims_map(), [(1, 1), (2, 1)].into_iter().collect());
    }

    #[test]
    fn second_syzygy_is_the_shifted_simple() {
        let a = kx(3);
        let s = simple(&a, 0, 0).unwrap();
        let res = minimal_resolution(&s, 4).unwrap();
        assert!(!res.complete);
        assert_eq!(res.steps.len(), 4);
        let omega2 = &res.steps[1].syzygy;
        assert_eq!(omega2.dims_map(), [(3, 1)].into_iter().collect());
        let shifted = simple(&a, 0, 3).unwrap();
        assert!(matches!(module_iso(omega2, &shifted).unwrap(), IsoVerdict::Iso(_)));
    }

    #[test]
    fn periodic_simple_has_unbounded_dimension() {
        let a = kx(3);
        let s = simple(&a, 0, 0).unwrap();
        assert_eq!(projective_dimension(&s, 10).unwrap(), DimVerdict::AtLeast(11));
    }

    #[test]
    fn projectives_resolve_in_zero_steps() {
        let a = kx(3);
        let p = projective(&a, 0, 2);
        let res = minimal_resolution(&p, 3).unwrap();
        assert!(res.complete);
        assert_eq!(res.steps.len(), 1);
        assert!(res.steps[0].syzygy.is_zero());
        assert_eq!(projective_dimension(&p, 3).unwrap(), DimVerdict::Finite(0));
    }

    #[test]
    fn path_algebra_simples() {
        let mut q = QuiverPresentation::new(vec!["1", "2"]);
        q.arrow("a", 0, 1, 0);
        let a = Arc::new(q.compile::<Rat>(FieldSpec::Rationals).unwrap());
        let s1 = simple(&a, 0, 0).unwrap();
        let s2 = simple(&a, 1, 0).unwrap();
        assert_eq!(projective_dimension(&s1, 5).unwrap(), DimVerdict::Finite(1));
        assert_eq!(projective_dimension(&s2, 5).unwrap(), DimVerdict::Finite(0));
        assert_eq!(global_dimension(&a, 5).unwrap(), DimVerdict::Finite(1));
    }

    #[test]
    fn radical_square_zero_cycles_out_fast() {
        let mut q = QuiverPresentation::new(vec!["v"]);
        let xs: Vec<usize> = (0..3).map(|i| q.arrow(&format!("x{i}"), 0, 0, 1)).collect();
        for &i in &xs {
            for &j in &xs {
                q.monomial_relation(vec![i, j]);
            }
        }
        let a = Arc::new(q.compile::<Rat>(FieldSpec::Rationals).unwrap());
        let s = simple(&a, 0, 0).unwrap();
        assert_eq!(projective_dimension(&s, 20).unwrap(), DimVerdict::AtLeast(21));
        assert_eq!(global_dimension(&a, 20).unwrap(), DimVerdict::AtLeast(21));
    }

    #[test]
    fn degree_zero_loop_repeats_immediately() {
        let mut q = QuiverPresentation::new(vec!["v"]);
        let x = q.arrow("x", 0, 0, 0);
        q.monomial_relation(vec![x, x]);
        let a = Arc::new(q.compile::<Rat>(FieldSpec::Rationals).unwrap());
        let s = simple(&a, 0, 0).unwrap();
        assert_eq!(projective_dimension(&s, 20).unwrap(), DimVerdict::AtLeast(21));
    }

    #[test]
    fn cover_of_a_truncated_shifted_sum() {
        let a = kx(3);
        let r = GradedModule::regular(a.clone()).share();
        let m1 = Arc::new(r.truncate_below(2));
        let m2 = Arc::new(r.shift(-1).truncate_below(2));
        let (t, _, _) = direct_sum(&[m1, m2]);
        let cover = projective_cover(&t).unwrap();
        let degrees: Vec<i64> = cover.summands.iter().map(|s| s.gen_degree).collect();
        assert_eq!(degrees, vec![0, 1]);
        assert_eq!(cover.module.total_dim(), 6);
    }

    #[test]
    fn free_resolution_composites_vanish() {
        let mut q = QuiverPresentation::new(vec!["1", "2"]);
        q.arrow("a", 0, 1, 0);
        let a = Arc::new(q.compile::<Rat>(FieldSpec::Rationals).unwrap());
        let s1 = simple(&a, 0, 0).unwrap();
        let maps = free_resolution(&s1, 5).unwrap();
        assert!(maps.len() >= 2);
        assert!(!maps[0].is_zero());
        for w in maps.windows(2) {
            assert!(w[1].compose(&w[0]).unwrap().is_zero());
        }
    }

    #[test]
    fn generator_round_trip() {
        let a = kx(3);
        let s = simple(&a, 0, 0).unwrap();
        let res = minimal_resolution(&s, 2).unwrap();
        let d1 = res.differential(1).unwrap();
        let gens = res.steps[1].cover.generator_images(&d1);
        let rebuilt = res.steps[1]
            .cover
            .map_from_generators(res.module(0), 0, &gens)
            .unwrap();
        for d in res.module(1).degree_range() {
            assert_eq!(rebuilt.comp(d), d1.comp(d));
        }
    }
}
