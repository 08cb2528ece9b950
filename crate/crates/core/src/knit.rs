//! Auslander-Reiten quivers by knitting: simple projectives first, each
//! projective once its radical summands exist, and each `τ⁻¹X` as the
//! cokernel of the left minimal almost split map out of `X`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{injective_rep, projective_rep, AlgebraSpec};
use crate::error::{Error, Result};
use crate::ffla::{FMatrix, PrimeField};
use crate::reps::{
    check_relations, decompose_with_embeddings, direct_sum, hom_dim, is_brick_like_local,
    iso_between, sub_quotient, DimVector, Morphism, Representation, SubspaceTuple,
    DEFAULT_DRAW_BUDGET, DEFAULT_SEED,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnitLimits {
    pub max_vertices: usize,
    pub seed: u64,
    pub draw_budget: usize,
}

impl Default for KnitLimits {
    fn default() -> Self {
        KnitLimits {
            max_vertices: 512,
            seed: DEFAULT_SEED,
            draw_budget: DEFAULT_DRAW_BUDGET,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ArVertex {
    /// The dimension vector rendered as `d1-d2-...`.
    pub id: String,
    pub rep: Representation,
    /// `Some(x)` iff this is `P_x`.
    pub projective: Option<usize>,
    /// `Some(y)` iff this is `I_y`.
    pub injective: Option<usize>,
}

/// An irreducible map between AR vertices (indices into `vertices`).
#[derive(Debug, Clone)]
pub struct ArArrow {
    pub source: usize,
    pub target: usize,
    pub map: Morphism,
}

/// The almost split sequence `0 -> X -> ⊕E_i -> Z -> 0`.
#[derive(Debug, Clone)]
pub struct ArSequence {
    pub translate: usize,
    pub middle: Vec<usize>,
    pub eta: Vec<Morphism>,
    pub nu: Vec<Morphism>,
}

/// A knitted AR quiver. Vertex indices follow creation order, which is a
/// directed enumeration: `Hom(X_i, X_j) = 0` for `j < i`.
#[derive(Debug, Clone)]
pub struct ArQuiver {
    spec: Arc<AlgebraSpec>,
    field: PrimeField,
    vertices: Vec<ArVertex>,
    arrows: Vec<ArArrow>,
    tau: BTreeMap<usize, usize>,
    hom: Vec<Vec<usize>>,
    index: BTreeMap<String, usize>,
}

struct PendingProjective {
    rep: Representation,
    summands: Vec<(Representation, Morphism)>,
    matched: Vec<Option<(usize, Morphism)>>,
    inserted: bool,
}

struct Knitter {
    spec: Arc<AlgebraSpec>,
    field: PrimeField,
    limits: KnitLimits,
    injectives: Vec<Representation>,
    pending: Vec<PendingProjective>,
    vertices: Vec<ArVertex>,
    arrows: Vec<ArArrow>,
    tau: BTreeMap<usize, usize>,
    index: BTreeMap<String, usize>,
    processed: Vec<bool>,
    /// Projectives whose radical has a summand isomorphic to each vertex.
    awaited_by: Vec<Vec<usize>>,
}

impl Knitter {
    fn new(spec: &Arc<AlgebraSpec>, field: PrimeField, limits: KnitLimits) -> Result<Self> {
        let n = spec.vertex_count();
        let mut pending = Vec::with_capacity(n);
        for x in 0..n {
            let p = projective_rep(spec, x, field);
            let mut rad = Vec::with_capacity(n);
            for y in 0..n {
                let d = p.dim()[y];
                rad.push(if y == x {
                    FMatrix::zeros(field, 0, d)
                } else {
                    FMatrix::identity(field, d)
                });
            }
            let sq = sub_quotient(&p, &SubspaceTuple::from_echelon(rad))?;
            let summands: Vec<(Representation, Morphism)> =
                decompose_with_embeddings(&sq.sub, limits.seed, limits.draw_budget)?
                    .into_iter()
                    .map(|(m, emb)| (m, sq.inclusion.compose(&emb)))
                    .collect();
            pending.push(PendingProjective {
                rep: p,
                matched: vec![None; summands.len()],
                summands,
                inserted: false,
            });
        }
        Ok(Knitter {
            spec: spec.clone(),
            field,
            limits,
            injectives: (0..n).map(|y| injective_rep(spec, y, field)).collect(),
            pending,
            vertices: Vec::new(),
            arrows: Vec::new(),
            tau: BTreeMap::new(),
            index: BTreeMap::new(),
            processed: Vec::new(),
            awaited_by: Vec::new(),
        })
    }

    /// Adds a vertex, then inserts every projective it completes.
    fn add_vertex(
        &mut self,
        rep: Representation,
        projective: Option<usize>,
        incoming: Vec<(usize, Morphism)>,
    ) -> Result<usize> {
        let mut queue = vec![(rep, projective, incoming)];
        let mut first = None;
        while let Some((rep, projective, incoming)) = queue.pop() {
            let v = self.insert(rep, projective, incoming)?;
            first.get_or_insert(v);
            let mut completed = Vec::new();
            for (x, pp) in self.pending.iter_mut().enumerate() {
                if pp.inserted {
                    continue;
                }
                for (k, (s, emb)) in pp.summands.iter().enumerate() {
                    if pp.matched[k].is_some() {
                        continue;
                    }
                    if let Some(phi) = iso_between(&self.vertices[v].rep, s) {
                        if pp.matched.iter().flatten().any(|(u, _)| *u == v) {
                            return Err(Error::NotDirected(format!(
                                "radical of P_{} has a repeated summand {}",
                                self.spec.quiver().vertices()[x],
                                self.vertices[v].id
                            )));
                        }
                        pp.matched[k] = Some((v, emb.compose(&phi)));
                        self.awaited_by[v].push(x);
                    }
                }
                if pp.matched.iter().all(Option::is_some) {
                    pp.inserted = true;
                    completed.push(x);
                }
            }
            // pop() takes from the back: push in reverse to insert in vertex order
            for &x in completed.iter().rev() {
                let pp = &self.pending[x];
                let incoming = pp.matched.iter().flatten().cloned().collect();
                queue.push((pp.rep.clone(), Some(x), incoming));
            }
        }
        Ok(first.expect("at least one vertex inserted"))
    }

    fn insert(
        &mut self,
        rep: Representation,
        projective: Option<usize>,
        incoming: Vec<(usize, Morphism)>,
    ) -> Result<usize> {
        let id = rep.dim().id();
        if self.vertices.len() >= self.limits.max_vertices {
            return Err(Error::NotRepresentationFinite(self.limits.max_vertices));
        }
        if self.index.contains_key(&id) {
            return Err(Error::NotDirected(format!(
                "two non-isomorphic indecomposables share dimension vector {id}"
            )));
        }
        if !check_relations(&rep) {
            return Err(Error::NotDirected(format!("vertex {id} violates the relations")));
        }
        if !is_brick_like_local(&rep) {
            return Err(Error::NotDirected(format!("vertex {id} is decomposable")));
        }
        let injective = self
            .injectives
            .iter()
            .position(|i| iso_between(i, &rep).is_some());
        let v = self.vertices.len();
        self.index.insert(id.clone(), v);
        self.vertices.push(ArVertex {
            id,
            rep,
            projective,
            injective,
        });
        self.processed.push(false);
        self.awaited_by.push(Vec::new());
        for (u, map) in incoming {
            self.arrows.push(ArArrow {
                source: u,
                target: v,
                map,
            });
        }
        Ok(v)
    }

    fn predecessors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().filter(move |a| a.target == v).map(|a| a.source)
    }

    fn is_ready(&self, v: usize) -> bool {
        if self.processed[v] || self.predecessors(v).any(|u| !self.processed[u]) {
            return false;
        }
        self.awaited_by[v].iter().all(|&x| self.pending[x].inserted)
    }

    fn process(&mut self, v: usize) -> Result<()> {
        self.processed[v] = true;
        if self.vertices[v].injective.is_some() {
            return Ok(());
        }
        let out: Vec<&ArArrow> = self.arrows.iter().filter(|a| a.source == v).collect();
        let x = &self.vertices[v];
        if out.is_empty() {
            return Err(Error::EtaNotInjective(x.id.clone()));
        }
        let f = self.field;
        let targets: Vec<&Representation> = out.iter().map(|a| &self.vertices[a.target].rep).collect();
        let middle = direct_sum(&self.spec, f, &targets);
        let eta = Morphism {
            maps: (0..x.rep.dim().len())
                .map(|y| {
                    let blocks: Vec<&FMatrix> = out.iter().map(|a| &a.map.maps[y]).collect();
                    FMatrix::vstack(f, x.rep.dim()[y], &blocks)
                })
                .collect(),
        };
        if !eta.is_injective() {
            return Err(Error::EtaNotInjective(x.id.clone()));
        }
        let sq = sub_quotient(&middle, &SubspaceTuple::image(&eta))?;
        if sq.quot.total_dim() == 0 {
            return Err(Error::EtaNotInjective(format!(
                "{} (η is an isomorphism, so the vertex is injective)",
                x.id
            )));
        }
        let mut components = Vec::with_capacity(out.len());
        let mut offsets = vec![0usize; x.rep.dim().len()];
        for e in &targets {
            let map = Morphism {
                maps: (0..offsets.len())
                    .map(|y| {
                        let pm = &sq.projection.maps[y];
                        pm.block(0, offsets[y], pm.rows(), e.dim()[y])
                    })
                    .collect(),
            };
            for (y, o) in offsets.iter_mut().enumerate() {
                *o += e.dim()[y];
            }
            components.push(map);
        }
        let incoming: Vec<(usize, Morphism)> = out.iter().map(|a| a.target).zip(components).collect();
        let z = self.add_vertex(sq.quot, None, incoming)?;
        self.tau.insert(z, v);
        Ok(())
    }

    fn run(mut self) -> Result<ArQuiver> {
        for x in 0..self.pending.len() {
            if self.pending[x].summands.is_empty() && !self.pending[x].inserted {
                self.pending[x].inserted = true;
                let rep = self.pending[x].rep.clone();
                self.add_vertex(rep, Some(x), Vec::new())?;
            }
        }
        loop {
            let next = (0..self.vertices.len())
                .filter(|&v| self.is_ready(v))
                .min_by(|&a, &b| self.vertices[a].id.cmp(&self.vertices[b].id));
            match next {
                Some(v) => self.process(v)?,
                None => break,
            }
        }
        if let Some(v) = self.processed.iter().position(|&d| !d) {
            return Err(Error::NotDirected(format!(
                "knitting stalled before vertex {} could be processed",
                self.vertices[v].id
            )));
        }
        if let Some(x) = self.pending.iter().position(|pp| !pp.inserted) {
            return Err(Error::NotDirected(format!(
                "projective P_{} was never reached",
                self.spec.quiver().vertices()[x]
            )));
        }
        ArQuiver::assemble(
            self.spec,
            self.field,
            self.vertices,
            self.arrows,
            self.tau,
            self.index,
        )
    }
}

/// Knits the AR quiver of `spec` over `F_p`.
pub fn knit(spec: &Arc<AlgebraSpec>, p: u64, limits: KnitLimits) -> Result<ArQuiver> {
    let field = PrimeField::new(p)?;
    Knitter::new(spec, field, limits)?.run()
}

impl ArQuiver {
    fn assemble(
        spec: Arc<AlgebraSpec>,
        field: PrimeField,
        vertices: Vec<ArVertex>,
        arrows: Vec<ArArrow>,
        tau: BTreeMap<usize, usize>,
        index: BTreeMap<String, usize>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for a in &arrows {
            if !seen.insert((a.source, a.target)) {
                return Err(Error::NotDirected(format!(
                    "arrow {} -> {} has nontrivial valuation",
                    vertices[a.source].id, vertices[a.target].id
                )));
            }
        }
        let n = vertices.len();
        let hom: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).map(|j| hom_dim(&vertices[i].rep, &vertices[j].rep)).collect())
            .collect();
        for i in 0..n {
            if hom[i][i] != 1 {
                return Err(Error::NonUnitriangularHomMatrix(format!(
                    "dim End({}) = {}",
                    vertices[i].id, hom[i][i]
                )));
            }
            for j in 0..i {
                if hom[i][j] != 0 {
                    return Err(Error::NotDirected(format!(
                        "Hom({}, {}) is nonzero against the knitting order",
                        vertices[i].id, vertices[j].id
                    )));
                }
            }
        }
        Ok(ArQuiver {
            spec,
            field,
            vertices,
            arrows,
            tau,
            hom,
            index,
        })
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn vertices(&self) -> &[ArVertex] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[ArArrow] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn vertex(&self, id: &str) -> Option<&ArVertex> {
        self.index_of(id).map(|i| &self.vertices[i])
    }

    /// `τ` of a non-projective vertex.
    pub fn tau(&self, v: usize) -> Option<usize> {
        self.tau.get(&v).copied()
    }

    /// `H[i][j] = dim Hom(X_i, X_j)`, upper unitriangular.
    pub fn hom_matrix(&self) -> &[Vec<usize>] {
        &self.hom
    }

    pub fn predecessors(&self, v: usize) -> Vec<usize> {
        self.arrows.iter().filter(|a| a.target == v).map(|a| a.source).collect()
    }

    pub fn successors(&self, v: usize) -> Vec<usize> {
        self.arrows.iter().filter(|a| a.source == v).map(|a| a.target).collect()
    }

    fn arrow_between(&self, s: usize, t: usize) -> Option<&ArArrow> {
        self.arrows.iter().find(|a| a.source == s && a.target == t)
    }

    /// The vertex id of the simple module at quiver vertex `x`.
    pub fn simple_id(&self, x: usize) -> String {
        let mut d = vec![0; self.spec.vertex_count()];
        d[x] = 1;
        DimVector::new(d).id()
    }

    pub fn projective_id(&self, x: usize) -> Option<&str> {
        self.vertices
            .iter()
            .find(|v| v.projective == Some(x))
            .map(|v| v.id.as_str())
    }

    pub fn injective_id(&self, y: usize) -> Option<&str> {
        self.vertices
            .iter()
            .find(|v| v.injective == Some(y))
            .map(|v| v.id.as_str())
    }

    /// The almost split sequence ending at `z`, checked for exactness.
    pub fn ar_sequence(&self, z: &str) -> Result<ArSequence> {
        let zi = self
            .index_of(z)
            .ok_or_else(|| Error::InvalidInput(format!("unknown AR vertex {z}")))?;
        let Some(x) = self.tau(zi) else {
            return Err(Error::IsProjective(z.to_string()));
        };
        let middle = self.predecessors(zi);
        let mut eta = Vec::new();
        let mut nu = Vec::new();
        for &e in &middle {
            let (Some(a), Some(b)) = (self.arrow_between(x, e), self.arrow_between(e, zi)) else {
                return Err(Error::NotDirected(format!("mesh ending at {z} is incomplete")));
            };
            eta.push(a.map.clone());
            nu.push(b.map.clone());
        }
        let nv = self.spec.vertex_count();
        let f = self.field;
        let xr = &self.vertices[x].rep;
        let zr = &self.vertices[zi].rep;
        for y in 0..nv {
            let mut comp = FMatrix::zeros(f, zr.dim()[y], xr.dim()[y]);
            for (a, b) in eta.iter().zip(&nu) {
                comp = comp.add(&b.maps[y].mul(&a.maps[y]));
            }
            let mid: usize = middle.iter().map(|&e| self.vertices[e].rep.dim()[y]).sum();
            if !comp.is_zero() || mid != xr.dim()[y] + zr.dim()[y] {
                return Err(Error::NotDirected(format!("sequence ending at {z} is not exact")));
            }
        }
        Ok(ArSequence {
            translate: x,
            middle,
            eta,
            nu,
        })
    }

    /// JSON export: vertices with dimension, flags and `τ`, and arrows.
    pub fn to_json(&self, with_maps: bool) -> Value {
        let q = self.spec.quiver();
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut o = json!({
                    "id": v.id,
                    "dim": v.rep.dim(),
                    "projective": v.projective.is_some(),
                    "injective": v.injective.is_some(),
                    "tau": self.tau(i).map(|t| self.vertices[t].id.clone()),
                });
                if with_maps {
                    let maps: BTreeMap<&str, Vec<Vec<u64>>> = q
                        .arrows()
                        .iter()
                        .enumerate()
                        .map(|(ai, a)| (a.id.as_str(), v.rep.map(ai).to_rows()))
                        .collect();
                    o["maps"] = json!(maps);
                }
                o
            })
            .collect();
        let arrows: Vec<Value> = self
            .arrows
            .iter()
            .map(|a| {
                let mut o = json!({
                    "source": self.vertices[a.source].id,
                    "target": self.vertices[a.target].id,
                });
                if with_maps {
                    let maps: BTreeMap<&str, Vec<Vec<u64>>> = q
                        .vertices()
                        .iter()
                        .zip(&a.map.maps)
                        .map(|(x, m)| (x.as_str(), m.to_rows()))
                        .collect();
                    o["maps"] = json!(maps);
                }
                o
            })
            .collect();
        json!({ "p": self.field.p(), "vertices": vertices, "arrows": arrows })
    }

    pub fn to_data(&self) -> ArQuiverData {
        ArQuiverData {
            p: self.field.p(),
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexData {
                    dim: v.rep.dim().entries().to_vec(),
                    projective: v.projective,
                    injective: v.injective,
                    maps: v.rep.maps().iter().map(FMatrix::to_rows).collect(),
                })
                .collect(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowData {
                    source: a.source,
                    target: a.target,
                    maps: a.map.maps.iter().map(FMatrix::to_rows).collect(),
                })
                .collect(),
            tau: self.tau.iter().map(|(&z, &x)| (z, x)).collect(),
        }
    }

    /// Rebuilds a quiver from cached data, rechecking every invariant that
    /// does not require re-knitting.
    pub fn from_data(spec: &Arc<AlgebraSpec>, data: &ArQuiverData) -> Result<Self> {
        let field = PrimeField::new(data.p)?;
        let bad = |what: &str| Error::InvalidInput(format!("corrupt AR quiver data: {what}"));
        let to_matrix = |rows: &Vec<Vec<u64>>, r: usize, c: usize| -> Result<FMatrix> {
            if rows.len() != r || rows.iter().any(|row| row.len() != c || row.iter().any(|&x| x >= data.p)) {
                return Err(bad("matrix shape"));
            }
            Ok(FMatrix::from_fn(field, r, c, |i, j| rows[i][j]))
        };
        let q = spec.quiver();
        let mut vertices = Vec::new();
        let mut index = BTreeMap::new();
        for v in &data.vertices {
            let dim = DimVector::new(v.dim.clone());
            if dim.len() != q.vertex_count() || v.maps.len() != q.arrows().len() {
                return Err(bad("vertex shape"));
            }
            let maps = q
                .arrows()
                .iter()
                .zip(&v.maps)
                .map(|(a, m)| to_matrix(m, dim[a.target], dim[a.source]))
                .collect::<Result<Vec<_>>>()?;
            let rep = Representation::new(spec.clone(), field, dim, maps)?;
            if !check_relations(&rep) {
                return Err(bad("relations"));
            }
            let id = rep.dim().id();
            index.insert(id.clone(), vertices.len());
            vertices.push(ArVertex {
                id,
                rep,
                projective: v.projective,
                injective: v.injective,
            });
        }
        let n = vertices.len();
        let mut arrows = Vec::new();
        for a in &data.arrows {
            if a.source >= n || a.target >= n || a.maps.len() != q.vertex_count() {
                return Err(bad("arrow endpoints"));
            }
            let (s, t) = (&vertices[a.source].rep, &vertices[a.target].rep);
            let maps = (0..q.vertex_count())
                .map(|y| to_matrix(&a.maps[y], t.dim()[y], s.dim()[y]))
                .collect::<Result<Vec<_>>>()?;
            arrows.push(ArArrow {
                source: a.source,
                target: a.target,
                map: Morphism { maps },
            });
        }
        let tau: BTreeMap<usize, usize> = data.tau.iter().copied().collect();
        if tau.iter().any(|(&z, &x)| z >= n || x >= n) || index.len() != n {
            return Err(bad("vertex ids"));
        }
        let ar = Self::assemble(spec.clone(), field, vertices, arrows, tau, index)?;
        for z in ar.tau.keys() {
            ar.ar_sequence(&ar.vertices[*z].id)?;
        }
        Ok(ar)
    }
}

/// Serializable form of an [`ArQuiver`], used for caching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArQuiverData {
    pub p: u64,
    pub vertices: Vec<VertexData>,
    pub arrows: Vec<ArrowData>,
    pub tau: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexData {
    pub dim: Vec<usize>,
    pub projective: Option<usize>,
    pub injective: Option<usize>,
    pub maps: Vec<Vec<Vec<u64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowData {
    pub source: usize,
    pub target: usize,
    pub maps: Vec<Vec<Vec<u64>>>,
}

/// Persistent storage for knitted quivers, keyed by algebra and prime.
pub trait ArStore: Send + Sync {
    fn load(&self, spec: &AlgebraSpec, p: u64) -> Option<ArQuiverData>;
    fn save(&self, spec: &AlgebraSpec, p: u64, data: &ArQuiverData);
}

/// Field-independent shape of a knitted quiver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuiverShape {
    pub vertices: Vec<String>,
    pub projectives: Vec<String>,
    pub arrows: Vec<(String, String)>,
    pub tau: Vec<(String, String)>,
}

impl ArQuiver {
    pub fn shape(&self) -> QuiverShape {
        let id = |i: usize| self.vertices[i].id.clone();
        let mut vertices: Vec<String> = self.vertices.iter().map(|v| v.id.clone()).collect();
        vertices.sort();
        let mut projectives: Vec<String> = self
            .vertices
            .iter()
            .filter(|v| v.projective.is_some())
            .map(|v| v.id.clone())
            .collect();
        projectives.sort();
        let mut arrows: Vec<(String, String)> =
            self.arrows.iter().map(|a| (id(a.source), id(a.target))).collect();
        arrows.sort();
        let mut tau: Vec<(String, String)> = self.tau.iter().map(|(&z, &x)| (id(z), id(x))).collect();
        tau.sort();
        QuiverShape {
            vertices,
            projectives,
            arrows,
            tau,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldIndependenceReport {
    pub primes: Vec<u64>,
    pub shape: QuiverShape,
}

/// Knits over every prime and requires identical shapes under the
/// dimension-vector matching.
pub fn check_field_independence(
    spec: &Arc<AlgebraSpec>,
    primes: &[u64],
    limits: KnitLimits,
) -> Result<FieldIndependenceReport> {
    if primes.len() < 2 {
        return Err(Error::InvalidInput("need at least two primes".into()));
    }
    let quivers = primes
        .iter()
        .map(|&p| knit(spec, p, limits))
        .collect::<Result<Vec<_>>>()?;
    let reference = quivers[0].shape();
    for (p, ar) in primes.iter().zip(&quivers).skip(1) {
        let s = ar.shape();
        if s != reference {
            return Err(Error::FieldDependenceDetected(format!(
                "AR quiver over F_{p} differs from the one over F_{}",
                primes[0]
            )));
        }
    }
    Ok(FieldIndependenceReport {
        primes: primes.to_vec(),
        shape: reference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_algebra;

    fn spec(json: &str) -> Arc<AlgebraSpec> {
        Arc::new(parse_algebra(json).unwrap())
    }

    const A2: &str = r#"{"vertices": ["1","2"], "arrows": [{"id":"a","from":"1","to":"2"}]}"#;

    #[test]
    fn point_has_one_vertex() {
        let ar = knit(&spec(r#"{"vertices": ["1"]}"#), 2, KnitLimits::default()).unwrap();
        assert_eq!(ar.len(), 1);
        assert!(ar.arrows().is_empty());
        let v = &ar.vertices()[0];
        assert_eq!((v.projective, v.injective), (Some(0), Some(0)));
    }

    #[test]
    fn a2_by_hand() {
        let ar = knit(&spec(A2), 3, KnitLimits::default()).unwrap();
        let ids: Vec<&str> = ar.vertices().iter().map(|v| v.id.as_str()).collect();
        assert_eq!(ids, ["0-1", "1-1", "1-0"]);
        assert_eq!(ar.arrows().len(), 2);
        assert_eq!(ar.tau(2), Some(0));
        let seq = ar.ar_sequence("1-0").unwrap();
        assert_eq!(seq.translate, 0);
        assert_eq!(seq.middle, vec![1]);
        assert!(matches!(ar.ar_sequence("1-1"), Err(Error::IsProjective(_))));
    }

    #[test]
    fn vertex_budget_is_enforced() {
        let limits = KnitLimits {
            max_vertices: 2,
            ..KnitLimits::default()
        };
        assert_eq!(
            knit(&spec(A2), 2, limits).unwrap_err(),
            Error::NotRepresentationFinite(2)
        );
    }

    #[test]
    fn kronecker_is_rejected() {
        let kr = spec(
            r#"{"vertices": ["1","2"], "arrows": [{"id":"a","from":"1","to":"2"},{"id":"b","from":"1","to":"2"}]}"#,
        );
        let err = knit(&kr, 2, KnitLimits { max_vertices: 40, ..KnitLimits::default() }).unwrap_err();
        assert!(matches!(err, Error::NotDirected(_) | Error::NotRepresentationFinite(_)), "{err:?}");
    }

    #[test]
    fn data_round_trip() {
        let s = spec(A2);
        let ar = knit(&s, 5, KnitLimits::default()).unwrap();
        let data = ar.to_data();
        let text = serde_json::to_string(&data).unwrap();
        let back: ArQuiverData = serde_json::from_str(&text).unwrap();
        let ar2 = ArQuiver::from_data(&s, &back).unwrap();
        assert_eq!(ar2.to_data(), data);
        assert_eq!(ar2.shape(), ar.shape());
    }
}
