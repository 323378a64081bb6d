//! Quiver-with-relations presentations and their compiler.
//!
//! Paths compose left-to-right: `p·q` means "p then q", matching the
//! right-module conventions of the rest of the crate. The compiler works in
//! the bounded path space and certifies correctness by exhibiting a length m
//! at which every path lies in the relation ideal; past that certificate,
//! truncation at m is exact, not an approximation.

use crate::algebra::{dense_to_sparse, GradedAlgebra};
use crate::error::{GhError, GhResult};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;
use num_traits::Zero;
use std::collections::HashMap;

const PATH_CAP: usize = 200_000;
pub const DEFAULT_PATH_BOUND: usize = 16;

#[derive(Clone, Debug)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub degree: usize,
}

/// A relation Σ cᵢ·mᵢ = 0 with rational coefficients cᵢ = num/den and
/// monomials mᵢ given as composable arrow sequences.
#[derive(Clone, Debug)]
pub struct Relation {
    pub terms: Vec<(i64, i64, Vec<usize>)>,
}

#[derive(Clone, Debug)]
pub struct QuiverPresentation {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Relation>,
    pub path_length_bound: usize,
}

#[derive(Clone)]
struct PathData {
    src: usize,
    tgt: usize,
    arrows: Vec<usize>,
    degree: usize,
}

impl QuiverPresentation {
    pub fn new(vertices: Vec<&str>) -> Self {
        QuiverPresentation {
            vertices: vertices.into_iter().map(String::from).collect(),
            arrows: Vec::new(),
            relations: Vec::new(),
            path_length_bound: DEFAULT_PATH_BOUND,
        }
    }

    pub fn arrow(&mut self, name: &str, source: usize, target: usize, degree: usize) -> usize {
        self.arrows.push(Arrow { name: name.into(), source, target, degree });
        self.arrows.len() - 1
    }

    pub fn relation(&mut self, terms: Vec<(i64, i64, Vec<usize>)>) {
        self.relations.push(Relation { terms });
    }

    /// Monomial relation m = 0.
    pub fn monomial_relation(&mut self, arrows: Vec<usize>) {
        self.relation(vec![(1, 1, arrows)]);
    }

    fn arrow_name(&self, i: usize) -> &str {
        &self.arrows[i].name
    }

    fn render_monomial(&self, mono: &[usize]) -> String {
        mono.iter().map(|&a| self.arrow_name(a)).collect::<Vec<_>>().join("*")
    }

    fn render_relation(&self, r: &Relation) -> String {
        let mut s = String::new();
        for (idx, (num, den, mono)) in r.terms.iter().enumerate() {
            if idx > 0 {
                s.push_str(if *num < 0 { " - " } else { " + " });
            } else if *num < 0 {
                s.push_str("- ");
            }
            let n = num.abs();
            if n != 1 || *den != 1 {
                s.push_str(&format!("{n}/{den} "));
            }
            s.push_str(&self.render_monomial(mono));
        }
        s
    }

    fn check_shape(&self) -> GhResult<()> {
        let nv = self.vertices.len();
        if nv == 0 {
            return Err(GhError::Invalid("quiver needs at least one vertex".into()));
        }
        let mut names: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        names.extend(self.arrows.iter().map(|a| a.name.as_str()));
        for n in &names {
            if n.is_empty() {
                return Err(GhError::Invalid("empty vertex or arrow name".into()));
            }
        }
        let mut sorted = names.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != names.len() {
            return Err(GhError::Invalid("vertex and arrow names must be distinct".into()));
        }
        for a in &self.arrows {
            if a.source >= nv || a.target >= nv {
                return Err(GhError::Invalid(format!("arrow {} has an endpoint out of range", a.name)));
            }
        }
        for r in &self.relations {
            if r.terms.is_empty() {
                return Err(GhError::Invalid("empty relation".into()));
            }
            let mut sig: Option<(usize, usize, usize)> = None; // (src, tgt, degree)
            for (num, den, mono) in &r.terms {
                if *den == 0 {
                    return Err(GhError::Invalid(format!(
                        "zero denominator in relation {}",
                        self.render_relation(r)
                    )));
                }
                if *num == 0 {
                    return Err(GhError::Invalid(format!(
                        "zero coefficient in relation {}",
                        self.render_relation(r)
                    )));
                }
                if mono.is_empty() {
                    return Err(GhError::Invalid("relations may not involve trivial paths".into()));
                }
                for &a in mono {
                    if a >= self.arrows.len() {
                        return Err(GhError::Invalid("relation mentions an unknown arrow".into()));
                    }
                }
                for w in mono.windows(2) {
                    if self.arrows[w[0]].target != self.arrows[w[1]].source {
                        return Err(GhError::Invalid(format!(
                            "non-composable monomial {} in relation {}",
                            self.render_monomial(mono),
                            self.render_relation(r)
                        )));
                    }
                }
                let this = (
                    self.arrows[mono[0]].source,
                    self.arrows[*mono.last().unwrap()].target,
                    mono.iter().map(|&a| self.arrows[a].degree).sum::<usize>(),
                );
                match &sig {
                    None => sig = Some(this),
                    Some(prev) if *prev != this => {
                        return Err(GhError::Invalid(format!(
                            "relation {} is not homogeneous (mixed endpoints or degrees)",
                            self.render_relation(r)
                        )));
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    fn enumerate_paths(&self, max_len: usize) -> GhResult<(Vec<PathData>, HashMap<(usize, Vec<usize>), usize>)> {
        let mut paths: Vec<PathData> = Vec::new();
        let mut index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        for v in 0..self.vertices.len() {
            index.insert((v, Vec::new()), paths.len());
            paths.push(PathData { src: v, tgt: v, arrows: Vec::new(), degree: 0 });
        }
        let mut frontier: Vec<usize> = (0..paths.len()).collect();
        for _ in 1..=max_len {
            let mut next = Vec::new();
            for &p in &frontier {
                let (tgt, base_arrows, base_deg, src) =
                    (paths[p].tgt, paths[p].arrows.clone(), paths[p].degree, paths[p].src);
                for (ai, a) in self.arrows.iter().enumerate() {
                    if a.source != tgt {
                        continue;
                    }
                    let mut arrows = base_arrows.clone();
                    arrows.push(ai);
                    let id = paths.len();
                    index.insert((src, arrows.clone()), id);
                    paths.push(PathData { src, tgt: a.target, arrows, degree: base_deg + a.degree });
                    next.push(id);
                    if paths.len() > PATH_CAP {
                        return Err(GhError::Unsupported(format!(
                            "path space exceeds {PATH_CAP} elements before stabilizing; the presentation looks infinite-dimensional"
                        )));
                    }
                }
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        Ok((paths, index))
    }

    /// Compile the presentation into a graded algebra over the given field.
    pub fn compile<K: Scalar>(&self, spec: FieldSpec) -> GhResult<GradedAlgebra<K>> {
        self.check_shape()?;
        let max_mono: usize = self
            .relations
            .iter()
            .flat_map(|r| r.terms.iter().map(|(_, _, m)| m.len()))
            .max()
            .unwrap_or(1);
        let lmin = max_mono.max(2);
        if self.path_length_bound < lmin {
            return Err(GhError::Invalid(format!(
                "path length bound {} is below the longest relation monomial",
                self.path_length_bound
            )));
        }
        let mut surviving: Option<String> = None;
        for l in lmin..=self.path_length_bound {
            let (paths, index) = self.enumerate_paths(l)?;
            // closure: u·r·v with every component inside the window
            let mut rows: Vec<Vec<K>> = Vec::new();
            for r in &self.relations {
                let (r_src, r_tgt, maxlen) = {
                    let m0 = &r.terms[0].2;
                    (
                        self.arrows[m0[0]].source,
                        self.arrows[*r.terms.last().unwrap().2.last().unwrap()].target,
                        r.terms.iter().map(|(_, _, m)| m.len()).max().unwrap(),
                    )
                };
                for u in 0..paths.len() {
                    if paths[u].tgt != r_src {
                        continue;
                    }
                    for v in 0..paths.len() {
                        if paths[v].src != r_tgt {
                            continue;
                        }
                        if paths[u].arrows.len() + maxlen + paths[v].arrows.len() > l {
                            continue;
                        }
                        let mut row = vec![K::zero(); paths.len()];
                        for (num, den, mono) in &r.terms {
                            let mut seq = paths[u].arrows.clone();
                            seq.extend_from_slice(mono);
                            seq.extend_from_slice(&paths[v].arrows);
                            let id = index[&(paths[u].src, seq)];
                            let c = K::from_ratio(&spec, *num, *den);
                            row[id] = row[id].clone() + c;
                        }
                        rows.push(row);
                    }
                }
            }
            let rr = if rows.is_empty() {
                None
            } else {
                Some(Matrix::from_rows(rows).rref())
            };
            let reduces_to_zero = |p: usize| -> bool {
                let Some(rr) = &rr else { return false };
                let mut x = vec![K::zero(); paths.len()];
                x[p] = K::one();
                for (t, &piv) in rr.pivots.iter().enumerate() {
                    let f = x[piv].clone();
                    if f.is_zero() {
                        continue;
                    }
                    for j in 0..paths.len() {
                        x[j] = x[j].clone() - f.clone() * rr.matrix[(t, j)].clone();
                    }
                }
                x.iter().all(Zero::is_zero)
            };
            let mut cert: Option<usize> = None;
            'scan: for m in 1..=l {
                for (p, pd) in paths.iter().enumerate() {
                    if pd.arrows.len() == m && !reduces_to_zero(p) {
                        if m == l {
                            surviving = Some(self.render_monomial(&pd.arrows));
                        }
                        continue 'scan;
                    }
                }
                cert = Some(m);
                break;
            }
            if let Some(m) = cert {
                return self.finish(spec, m, &paths, &index);
            }
        }
        Err(GhError::Invalid(format!(
            "dimension does not stabilize within path length {}: path {} survives; raise the bound",
            self.path_length_bound,
            surviving.unwrap_or_else(|| "<unknown>".into())
        )))
    }

    /// Build the quotient on paths of length < m, where every length-m path
    /// is certified to lie in the relation ideal.
    fn finish<K: Scalar>(
        &self,
        spec: FieldSpec,
        m: usize,
        paths: &[PathData],
        index: &HashMap<(usize, Vec<usize>), usize>,
    ) -> GhResult<GradedAlgebra<K>> {
        let keep: Vec<usize> = (0..paths.len()).filter(|&p| paths[p].arrows.len() < m).collect();
        let local: HashMap<usize, usize> = keep.iter().enumerate().map(|(a, &p)| (p, a)).collect();
        let n = keep.len();
        // ideal slice below m: every u·r·v truncated to components of length < m
        let mut rows: Vec<Vec<K>> = Vec::new();
        for r in &self.relations {
            let m0 = &r.terms[0].2;
            let r_src = self.arrows[m0[0]].source;
            let r_tgt = self.arrows[*m0.last().unwrap()].target;
            let minlen = r.terms.iter().map(|(_, _, mo)| mo.len()).min().unwrap();
            for &u in &keep {
                if paths[u].tgt != r_src {
                    continue;
                }
                for &v in &keep {
                    if paths[v].src != r_tgt {
                        continue;
                    }
                    if paths[u].arrows.len() + minlen + paths[v].arrows.len() >= m {
                        continue;
                    }
                    let mut row = vec![K::zero(); n];
                    let mut nonzero = false;
                    for (num, den, mono) in &r.terms {
                        if paths[u].arrows.len() + mono.len() + paths[v].arrows.len() >= m {
                            continue;
                        }
                        let mut seq = paths[u].arrows.clone();
                        seq.extend_from_slice(mono);
                        seq.extend_from_slice(&paths[v].arrows);
                        let id = local[&index[&(paths[u].src, seq)]];
                        row[id] = row[id].clone() + K::from_ratio(&spec, *num, *den);
                        nonzero = true;
                    }
                    if nonzero {
                        rows.push(row);
                    }
                }
            }
        }
        let rr = if rows.is_empty() { None } else { Some(Matrix::from_rows(rows).rref()) };
        let pivots: Vec<usize> = rr.as_ref().map(|r| r.pivots.clone()).unwrap_or_default();
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let basis: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let basis_pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(a, &c)| (c, a)).collect();
        for v in 0..self.vertices.len() {
            if is_pivot[local[&v]] {
                return Err(GhError::Invalid(format!(
                    "vertex idempotent {} collapses under the relations",
                    self.vertices[v]
                )));
            }
        }
        // reduce a local coordinate vector modulo the ideal slice, then read
        // coordinates at the basis columns
        let reduce = |mut x: Vec<K>| -> Vec<K> {
            if let Some(rr) = &rr {
                for (t, &piv) in rr.pivots.iter().enumerate() {
                    let f = x[piv].clone();
                    if f.is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        x[j] = x[j].clone() - f.clone() * rr.matrix[(t, j)].clone();
                    }
                }
            }
            basis.iter().map(|&c| x[c].clone()).collect()
        };
        let dim = basis.len();
        let names: Vec<String> = basis
            .iter()
            .map(|&c| {
                let pd = &paths[keep[c]];
                if pd.arrows.is_empty() {
                    self.vertices[pd.src].clone()
                } else {
                    self.render_monomial(&pd.arrows)
                }
            })
            .collect();
        let degrees: Vec<usize> = basis.iter().map(|&c| paths[keep[c]].degree).collect();
        let one = K::one().bind(&spec);
        let mut unit = vec![K::zero(); dim];
        let mut idempotents = Vec::with_capacity(self.vertices.len());
        for v in 0..self.vertices.len() {
            let pos = basis_pos[&local[&v]];
            unit[pos] = one.clone();
            let mut e = vec![K::zero(); dim];
            e[pos] = one.clone();
            idempotents.push(e);
        }
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        for (bi, &ci) in basis.iter().enumerate() {
            let pi = &paths[keep[ci]];
            for (bj, &cj) in basis.iter().enumerate() {
                if pi.tgt != paths[keep[cj]].src {
                    continue;
                }
                let pj = &paths[keep[cj]];
                if pi.arrows.len() + pj.arrows.len() >= m {
                    continue;
                }
                let mut seq = pi.arrows.clone();
                seq.extend_from_slice(&pj.arrows);
                let id = local[&index[&(pi.src, seq)]];
                let mut x = vec![K::zero(); n];
                x[id] = one.clone();
                mult[bi][bj] = dense_to_sparse(&reduce(x));
            }
        }
        let mut hint: Vec<Vec<K>> = Vec::new();
        for (b, &c) in basis.iter().enumerate() {
            let pd = &paths[keep[c]];
            if !pd.arrows.is_empty() && pd.degree == 0 {
                let mut v = vec![K::zero(); dim];
                v[b] = one.clone();
                hint.push(v);
            }
        }
        let algebra = GradedAlgebra::from_sparse(spec, names, degrees, unit, mult, idempotents)?
            .with_radical0_hint(hint);
        let report = algebra.validate_base();
        if !report.ok() {
            return Err(GhError::Internal(format!(
                "compiled algebra fails validation: {}",
                report.violations.join("; ")
            )));
        }
        Ok(algebra)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rat};

    fn poly_quiver(n: usize) -> QuiverPresentation {
        let mut q = QuiverPresentation::new(vec!["e"]);
        let x = q.arrow("x", 0, 0, 1);
        q.monomial_relation(vec![x; n]);
        q
    }

    #[test]
    fn truncated_polynomial_ring() {
        let a: GradedAlgebra<Rat> = poly_quiver(3).compile(FieldSpec::Rationals).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.ell(), 2);
        assert_eq!(a.dims_by_degree(), vec![1, 1, 1]);
        assert!(a.validate().ok());
    }

    #[test]
    fn truncated_polynomial_ring_mod_two() {
        let a: GradedAlgebra<Fp> = poly_quiver(3).compile(FieldSpec::PrimeField(2)).unwrap();
        assert_eq!(a.dim(), 3);
        assert!(a.validate().ok());
    }

    #[test]
    fn two_vertex_example_with_mixed_degrees() {
        // vertices 1,2; a: 1→1 deg 1, b: 1→2 deg 0, c: 2→1 deg 2;
        // a² = bc, ab = cb = ca = 0
        let mut q = QuiverPresentation::new(vec!["e1", "e2"]);
        let a = q.arrow("a", 0, 0, 1);
        let b = q.arrow("b", 0, 1, 0);
        let c = q.arrow("c", 1, 0, 2);
        q.relation(vec![(1, 1, vec![a, a]), (-1, 1, vec![b, c])]);
        q.monomial_relation(vec![a, b]);
        q.monomial_relation(vec![c, b]);
        q.monomial_relation(vec![c, a]);
        let alg: GradedAlgebra<Rat> = q.compile(FieldSpec::Rationals).unwrap();
        assert_eq!(alg.dim(), 6);
        assert_eq!(alg.ell(), 2);
        assert_eq!(alg.dims_by_degree(), vec![3, 1, 2]);
        assert!(alg.validate().ok(), "{:?}", alg.validate().violations);
        // rad(A_0) = span{b}
        assert_eq!(alg.radical0().unwrap().len(), 1);
    }

    #[test]
    fn path_algebra_of_a2() {
        let mut q = QuiverPresentation::new(vec!["v1", "v2"]);
        q.arrow("al", 0, 1, 0);
        let alg: GradedAlgebra<Rat> = q.compile(FieldSpec::Rationals).unwrap();
        assert_eq!(alg.dim(), 3);
        assert_eq!(alg.ell(), 0);
        assert!(alg.validate_base().ok());
        assert_eq!(alg.radical0().unwrap().len(), 1);
    }

    #[test]
    fn three_loops_zero_products() {
        let mut q = QuiverPresentation::new(vec!["e"]);
        let xs: Vec<usize> = (0..3).map(|i| q.arrow(&format!("x{i}"), 0, 0, 1)).collect();
        for &i in &xs {
            for &j in &xs {
                q.monomial_relation(vec![i, j]);
            }
        }
        let alg: GradedAlgebra<Rat> = q.compile(FieldSpec::Rationals).unwrap();
        assert_eq!(alg.dim(), 4);
        assert_eq!(alg.dims_by_degree(), vec![1, 3]);
        assert!(alg.validate().ok());
    }

    #[test]
    fn exterior_algebra_on_three_generators() {
        let mut q = QuiverPresentation::new(vec!["e"]);
        let x = q.arrow("x", 0, 0, 1);
        let y = q.arrow("y", 0, 0, 1);
        let z = q.arrow("z", 0, 0, 1);
        for &v in &[x, y, z] {
            q.monomial_relation(vec![v, v]);
        }
        for &(u, v) in &[(x, y), (x, z), (y, z)] {
            q.relation(vec![(1, 1, vec![u, v]), (1, 1, vec![v, u])]);
        }
        let alg: GradedAlgebra<Rat> = q.compile(FieldSpec::Rationals).unwrap();
        assert_eq!(alg.dim(), 8);
        assert_eq!(alg.dims_by_degree(), vec![1, 3, 3, 1]);
        assert!(alg.validate().ok());
    }

    #[test]
    fn commutative_complete_intersection() {
        // k[x,y]/(x², y³), both generators in degree 1
        let mut q = QuiverPresentation::new(vec!["e"]);
        let x = q.arrow("x", 0, 0, 1);
        let y = q.arrow("y", 0, 0, 1);
        q.monomial_relation(vec![x, x]);
        q.monomial_relation(vec![y, y, y]);
        q.relation(vec![(1, 1, vec![x, y]), (-1, 1, vec![y, x])]);
        let alg: GradedAlgebra<Rat> = q.compile(FieldSpec::Rationals).unwrap();
        assert_eq!(alg.dim(), 6);
        assert_eq!(alg.dims_by_degree(), vec![1, 2, 2, 1]);
        assert!(alg.is_commutative());
        assert!(alg.validate().ok());
    }

    #[test]
    fn inhomogeneous_relation_rejected() {
        let mut q = QuiverPresentation::new(vec!["e"]);
        let x = q.arrow("x", 0, 0, 1);
        let w = q.arrow("w", 0, 0, 0);
        q.relation(vec![(1, 1, vec![x, x]), (-1, 1, vec![w])]);
        q.monomial_relation(vec![x, x, x]);
        q.monomial_relation(vec![w, w]);
        let err = q.compile::<Rat>(FieldSpec::Rationals).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("not homogeneous"), "{msg}");
    }

    #[test]
    fn non_stabilizing_presentation_names_a_path() {
        let mut q = QuiverPresentation::new(vec!["e"]);
        q.arrow("x", 0, 0, 1);
        q.path_length_bound = 5;
        let err = q.compile::<Rat>(FieldSpec::Rationals).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("x*x*x*x*x"), "{msg}");
    }
}
