//! Graph homotopies, one-step retractions, fold reduction and the prism
//! operators that turn a homotopy into a chain homotopy.

use serde::{Deserialize, Serialize};

use crate::chain::Chain;
use crate::cubical::SingularCube;
use crate::error::{Error, Result};
use crate::graph::{is_graph_hom, Graph, VertexMap};
use crate::linalg::Int;
use crate::path::PathTuple;

/// Maps `f_0, ..., f_m: G -> H`, read as a map `G □ I_m -> H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Homotopy {
    pub steps: Vec<VertexMap>,
}

impl Homotopy {
    pub fn new(steps: Vec<VertexMap>) -> Self {
        Homotopy { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self) -> &VertexMap {
        &self.steps[0]
    }

    pub fn end(&self) -> &VertexMap {
        &self.steps[self.steps.len() - 1]
    }
}

/// Every `f_j` is a homomorphism and `f_j(u)` is equal or adjacent to
/// `f_{j+1}(u)` for every vertex, i.e. the combined map on `G □ I_m` is a
/// homomorphism.
pub fn verify_homotopy(g: &Graph, h: &Graph, phi: &Homotopy) -> Result<bool> {
    if phi.steps.is_empty() {
        return Err(Error::InvalidParameter("a homotopy needs at least one map".into()));
    }
    for f in &phi.steps {
        if !is_graph_hom(g, h, f)? {
            return Ok(false);
        }
    }
    Ok(phi.steps.windows(2).all(|w| {
        (0..g.vertex_count()).all(|u| h.adjacent_or_equal(w[0].apply(u), w[1].apply(u)))
    }))
}

/// One fold or user-supplied retraction, in the labels of the graph it was
/// applied to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetractionStep {
    pub removed: Vec<usize>,
    pub map: VertexMap,
}

/// `r` fixes `kept`, maps into it homomorphically, and moves every vertex at
/// most one edge.
pub fn verify_one_step_retraction(g: &Graph, kept: &[usize], r: &VertexMap) -> Result<bool> {
    if r.domain_size() != g.vertex_count() {
        return Err(Error::DimensionMismatch(format!(
            "map has {} entries, graph has {} vertices",
            r.domain_size(),
            g.vertex_count()
        )));
    }
    let mut in_kept = vec![false; g.vertex_count()];
    for &v in kept {
        if v >= g.vertex_count() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                count: g.vertex_count(),
            });
        }
        in_kept[v] = true;
        if r.apply(v) != v {
            return Err(Error::ContractViolation(format!(
                "retraction moves kept vertex {v}"
            )));
        }
    }
    for x in 0..g.vertex_count() {
        let y = r.apply(x);
        if y >= g.vertex_count() || !in_kept[y] || !g.adjacent_or_equal(x, y) {
            return Ok(false);
        }
    }
    is_graph_hom(g, g, r)
}

/// Lexicographically smallest `(x, y)` with `{x, y}` an edge and
/// `N(x) ⊆ N[y]`; sending `x` to `y` is then a one-step retraction.
pub fn find_fold(g: &Graph) -> Option<(usize, usize)> {
    (0..g.vertex_count()).find_map(|x| {
        g.neighbors(x).iter().map(|&y| y as usize).find(|&y| {
            g.neighbors(x)
                .iter()
                .all(|&w| g.adjacent_or_equal(w as usize, y))
        })
        .map(|y| (x, y))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldRecord {
    /// Labels in the original graph.
    pub removed: usize,
    pub onto: usize,
    pub step: RetractionStep,
}

#[derive(Clone, Debug)]
pub struct Dismantling {
    pub core: Graph,
    /// `kept[i]` is the original label of core vertex `i`.
    pub kept: Vec<usize>,
    pub trace: Vec<FoldRecord>,
}

impl Dismantling {
    /// Composite retraction of the original graph onto the core, in core
    /// labels.
    pub fn retraction(&self, original_vertices: usize) -> VertexMap {
        let mut image: Vec<usize> = (0..original_vertices).collect();
        // later folds act on the images of earlier ones
        for rec in &self.trace {
            for v in image.iter_mut() {
                if *v == rec.removed {
                    *v = rec.onto;
                }
            }
        }
        let mut core_id = vec![u32::MAX; original_vertices];
        for (i, &v) in self.kept.iter().enumerate() {
            core_id[v] = i as u32;
        }
        VertexMap::new(image.into_iter().map(|v| core_id[v]).collect())
    }

    /// Core-to-original inclusion.
    pub fn inclusion(&self) -> VertexMap {
        VertexMap::new(self.kept.iter().map(|&v| v as u32).collect())
    }
}

/// Applies folds until none is left.
pub fn dismantle(g: &Graph) -> Dismantling {
    let mut current = g.clone();
    let mut labels: Vec<usize> = (0..g.vertex_count()).collect();
    let mut trace = Vec::new();
    while let Some((x, y)) = find_fold(&current) {
        let mut image: Vec<u32> = (0..current.vertex_count() as u32).collect();
        image[x] = y as u32;
        trace.push(FoldRecord {
            removed: labels[x],
            onto: labels[y],
            step: RetractionStep {
                removed: vec![x],
                map: VertexMap::new(image),
            },
        });
        let kept: Vec<usize> = (0..current.vertex_count()).filter(|&v| v != x).collect();
        current = current.induced(&kept);
        labels = kept.iter().map(|&v| labels[v]).collect();
    }
    let core = match g.name() {
        Some(n) => current.with_name(format!("core({n})")),
        None => current,
    };
    Dismantling {
        core,
        kept: labels,
        trace,
    }
}

/// The homotopy `[id, i∘r]` of a one-step retraction.
pub fn retraction_homotopy(n: usize, r: &VertexMap) -> Homotopy {
    Homotopy::new(vec![VertexMap::identity(n), r.clone()])
}

/// `f ∘ σ`, zero when degenerate.
pub fn push_cube(f: &VertexMap, s: &SingularCube) -> Chain<SingularCube> {
    let labels: Vec<u32> = s.labels().iter().map(|&v| f.image[v as usize]).collect();
    let c = SingularCube::new(labels).expect("same length");
    if c.is_degenerate() {
        Chain::zero(s.dim())
    } else {
        Chain::from_terms(s.dim(), [(c, Int::ONE)])
    }
}

/// `f` applied to each tuple, degenerate images dropped.
pub fn push_paths(f: &VertexMap, c: &Chain<PathTuple>) -> Chain<PathTuple> {
    let mut out = Chain::zero(c.dim());
    for (t, v) in c.iter() {
        let verts: Vec<u32> = t.verts().iter().map(|&x| f.image[x as usize]).collect();
        let t = PathTuple::new(verts).expect("nonempty");
        if !t.is_degenerate() {
            out.add_term(t, v);
        }
    }
    out
}

fn check(g: &Graph, h: &Graph, phi: &Homotopy) -> Result<()> {
    if !verify_homotopy(g, h, phi)? {
        return Err(Error::ContractViolation("not a homotopy".into()));
    }
    Ok(())
}

/// `sum_j h^(j)(σ)`, where `h^(j)(σ)` has axis-1 faces `Φ(σ, j-1)` and
/// `Φ(σ, j)`.
pub fn cubical_prism(g: &Graph, h: &Graph, phi: &Homotopy, s: &SingularCube) -> Result<Chain<SingularCube>> {
    check(g, h, phi)?;
    if !s.is_graph_hom(g) {
        return Err(Error::InvalidParameter("cube is not a map into the domain".into()));
    }
    let mut out = Chain::zero(s.dim() + 1);
    for w in phi.steps.windows(2) {
        let mut labels = Vec::with_capacity(2 * s.labels().len());
        for &v in s.labels() {
            labels.push(w[0].image[v as usize]);
            labels.push(w[1].image[v as usize]);
        }
        let c = SingularCube::new(labels)?;
        if !c.is_degenerate() {
            out.add_term(c, &Int::ONE);
        }
    }
    Ok(out)
}

pub fn cubical_prism_chain(
    g: &Graph,
    h: &Graph,
    phi: &Homotopy,
    c: &Chain<SingularCube>,
) -> Result<Chain<SingularCube>> {
    let mut out = Chain::zero(c.dim() + 1);
    for (s, v) in c.iter() {
        out.add_scaled(v, &cubical_prism(g, h, phi, s)?);
    }
    Ok(out)
}

/// `sum_j sum_k (-1)^k (Φ(v_0,j-1), ..., Φ(v_k,j-1), Φ(v_k,j), ..., Φ(v_n,j))`
/// applied termwise. When the input lies in `Omega_n(G)` the output is
/// checked to lie in `Omega_{n+1}(H)`.
pub fn path_prism(g: &Graph, h: &Graph, phi: &Homotopy, x: &Chain<PathTuple>) -> Result<Chain<PathTuple>> {
    check(g, h, phi)?;
    let mut out = Chain::zero(x.dim() + 1);
    for (t, coef) in x.iter() {
        if !t.is_allowed(g) {
            return Err(Error::InvalidParameter(format!(
                "{:?} is not an allowed path",
                t.verts()
            )));
        }
        let v = t.verts();
        for w in phi.steps.windows(2) {
            for k in 0..v.len() {
                let mut verts = Vec::with_capacity(v.len() + 1);
                verts.extend(v[..=k].iter().map(|&a| w[0].image[a as usize]));
                verts.extend(v[k..].iter().map(|&a| w[1].image[a as usize]));
                let p = PathTuple::new(verts)?;
                if !p.is_degenerate() {
                    let s = if k % 2 == 0 { coef.clone() } else { -coef };
                    out.add_term(p, &s);
                }
            }
        }
    }
    if in_omega(g, x) && !in_omega(h, &out) {
        return Err(Error::ContractViolation(
            "prism of an Omega chain left Omega".into(),
        ));
    }
    Ok(out)
}

/// Allowed chain whose boundary is supported on allowed tuples.
pub fn in_omega(g: &Graph, x: &Chain<PathTuple>) -> bool {
    if !x.iter().all(|(t, _)| t.is_allowed(g)) {
        return false;
    }
    let b = path_boundary(x);
    let ok = b.iter().all(|(t, _)| t.is_allowed(g));
    ok
}

pub fn path_boundary(x: &Chain<PathTuple>) -> Chain<PathTuple> {
    let mut b = Chain::zero(x.dim().saturating_sub(1));
    for (t, v) in x.iter() {
        b.add_scaled(v, &t.boundary());
    }
    b
}

pub fn cube_boundary(x: &Chain<SingularCube>) -> Chain<SingularCube> {
    let mut b = Chain::zero(x.dim().saturating_sub(1));
    for (s, v) in x.iter() {
        b.add_scaled(v, &s.boundary());
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    fn vm(v: &[u32]) -> VertexMap {
        VertexMap::new(v.to_vec())
    }

    #[test]
    fn homotopy_examples() {
        let z5 = generate(Family::Cycle(5)).unwrap();
        let id = VertexMap::identity(5);
        assert!(verify_homotopy(&z5, &z5, &Homotopy::new(vec![id.clone(), id.clone()])).unwrap());
        let k2 = generate(Family::Complete(2)).unwrap();
        let phi = Homotopy::new(vec![VertexMap::identity(2), VertexMap::constant(2, 0)]);
        assert!(verify_homotopy(&k2, &k2, &phi).unwrap());
        // each vertex moves to a neighbour: a homotopy on the box product
        let rot = vm(&[1, 2, 3, 4, 0]);
        assert!(verify_homotopy(&z5, &z5, &Homotopy::new(vec![id.clone(), rot])).unwrap());
        let jump = vm(&[2, 3, 4, 0, 1]);
        assert!(!verify_homotopy(&z5, &z5, &Homotopy::new(vec![id, jump])).unwrap());
    }

    #[test]
    fn retraction_examples() {
        let c4 = generate(Family::Cycle(4)).unwrap();
        assert!(verify_one_step_retraction(&c4, &[0, 1], &vm(&[0, 1, 1, 0])).unwrap());
        let p3 = generate(Family::Path(3)).unwrap();
        assert!(verify_one_step_retraction(&p3, &[0, 1], &vm(&[0, 1, 1])).unwrap());
        let z5 = generate(Family::Cycle(5)).unwrap();
        assert!(!verify_one_step_retraction(&z5, &[0, 1, 2, 3], &vm(&[0, 1, 2, 3, 0])).unwrap());
        assert!(verify_one_step_retraction(&z5, &[0, 1], &vm(&[1, 1, 2, 3, 4])).is_err());
    }

    #[test]
    fn folds() {
        assert_eq!(find_fold(&generate(Family::Complete(4)).unwrap()), Some((0, 1)));
        assert_eq!(find_fold(&generate(Family::Path(3)).unwrap()), Some((0, 1)));
        assert_eq!(find_fold(&generate(Family::Cycle(4)).unwrap()), None);
        let k5 = generate(Family::Complete(5)).unwrap();
        let d = dismantle(&k5);
        assert_eq!(d.trace.len(), 4);
        assert_eq!(d.core.vertex_count(), 1);
        for rec in &d.trace {
            let x = rec.step.removed[0];
            let kept: Vec<usize> = (0..rec.step.map.domain_size()).filter(|&v| v != x).collect();
            let g = generate(Family::Complete(rec.step.map.domain_size())).unwrap();
            assert!(verify_one_step_retraction(&g, &kept, &rec.step.map).unwrap());
        }
        let tree = Graph::new(6, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)]).unwrap();
        let d = dismantle(&tree);
        assert_eq!(d.core.vertex_count(), 1);
        let r = d.retraction(6);
        assert!(is_graph_hom(&tree, &d.core, &r).unwrap());
    }

    #[test]
    fn prism_of_constant_homotopy_vanishes() {
        let z4 = generate(Family::Cycle(4)).unwrap();
        let id = VertexMap::identity(4);
        let phi = Homotopy::new(vec![id.clone(), id]);
        let s = SingularCube::new(vec![0, 1, 3, 2]).unwrap();
        assert!(cubical_prism(&z4, &z4, &phi, &s).unwrap().is_zero());
        let p = Chain::from_terms(2, [(PathTuple::new(vec![0, 1, 2]).unwrap(), Int::ONE)]);
        assert!(path_prism(&z4, &z4, &phi, &p).unwrap().is_zero());
    }

    #[test]
    fn prism_of_a_point() {
        let p3 = generate(Family::Path(3)).unwrap();
        let phi = Homotopy::new(vec![VertexMap::identity(3), vm(&[1, 1, 2])]);
        let h = cubical_prism(&p3, &p3, &phi, &SingularCube::vertex(0)).unwrap();
        let edge = SingularCube::new(vec![0, 1]).unwrap();
        assert_eq!(h, Chain::from_terms(1, [(edge.clone(), Int::ONE)]));
        let expected = Chain::from_terms(
            0,
            [(SingularCube::vertex(1), Int::ONE), (SingularCube::vertex(0), Int::from(-1))],
        );
        assert_eq!(cube_boundary(&h), expected);
        let v = Chain::from_terms(0, [(PathTuple::new(vec![0]).unwrap(), Int::ONE)]);
        let hp = path_prism(&p3, &p3, &phi, &v).unwrap();
        assert_eq!(hp, Chain::from_terms(1, [(PathTuple::new(vec![0, 1]).unwrap(), Int::ONE)]));
    }
}
