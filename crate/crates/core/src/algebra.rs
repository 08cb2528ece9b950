//! Bound quiver algebras `B = KQ/I` given by an acyclic quiver and integral
//! zero / commutativity relations, their path bases, and the indecomposable
//! projective and injective representations over any prime field.
//!
//! Paths are written in composition order: `["b", "a"]` means `a` first,
//! then `b`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffla::{FMatrix, PrimeField};
use crate::reps::{DimVector, Representation};

/// The on-disk JSON form of an algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowDocument>,
    #[serde(default)]
    pub relations: Vec<RelationDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDocument {
    pub id: String,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RelationDocument {
    Zero { path: Vec<String> },
    Commutativity { lhs: Vec<String>, rhs: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    /// Vertices in an order where every arrow points forward, or the id of a
    /// vertex on a cycle.
    fn topological_order(&self) -> std::result::Result<Vec<usize>, usize> {
        let n = self.vertices.len();
        let mut indegree = vec![0usize; n];
        for a in &self.arrows {
            indegree[a.target] += 1;
        }
        let mut ready: Vec<usize> = (0..n).rev().filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indegree[a.target] -= 1;
                if indegree[a.target] == 0 {
                    ready.push(a.target);
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err((0..n).find(|&v| indegree[v] > 0).unwrap())
        }
    }

    /// Every path (trivial ones included) grouped by `(source, target)`.
    fn all_paths(&self) -> BTreeMap<(usize, usize), Vec<Path>> {
        let mut out: BTreeMap<(usize, usize), Vec<Path>> = BTreeMap::new();
        for x in 0..self.vertices.len() {
            let mut stack = vec![Path::trivial(x)];
            while let Some(p) = stack.pop() {
                for (ai, a) in self.arrows.iter().enumerate() {
                    if a.source == p.target {
                        stack.push(Path::arrow(a, ai).compose(&p));
                    }
                }
                out.entry((p.source, p.target)).or_default().push(p);
            }
        }
        for paths in out.values_mut() {
            paths.sort_by(|a, b| self.cmp_paths(a, b));
        }
        out
    }

    /// Length first, then lexicographic on the written arrow ids.
    pub fn cmp_paths(&self, a: &Path, b: &Path) -> Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            let ia = a.arrows.iter().map(|&i| &self.arrows[i].id);
            let ib = b.arrows.iter().map(|&i| &self.arrows[i].id);
            ia.cmp(ib)
        })
    }

    /// Symmetric generalized Cartan matrix `2I - (A + A^T)` of the
    /// underlying graph.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.vertices.len();
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        for a in &self.arrows {
            c[a.source][a.target] -= 1;
            c[a.target][a.source] -= 1;
        }
        c
    }
}

/// A path in the quiver, arrows listed in composition order (leftmost
/// applied last). A trivial path has no arrows and `source == target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(x: usize) -> Self {
        Path {
            source: x,
            target: x,
            arrows: Vec::new(),
        }
    }

    fn arrow(a: &Arrow, index: usize) -> Self {
        Path {
            source: a.source,
            target: a.target,
            arrows: vec![index],
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &Path) -> Path {
        assert_eq!(inner.target, self.source, "paths not composable");
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&inner.arrows);
        Path {
            source: inner.source,
            target: self.target,
            arrows,
        }
    }

    pub fn display(&self, quiver: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e_{}", quiver.vertices[self.source])
        } else {
            self.arrows
                .iter()
                .map(|&i| quiver.arrows[i].id.as_str())
                .collect::<Vec<_>>()
                .join("")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Zero,
    Commutativity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub kind: RelationKind,
    pub lhs: Path,
    pub rhs: Option<Path>,
}

/// A validated algebra `KQ/I` in field-independent integral form.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraSpec {
    document: AlgebraDocument,
    quiver: Quiver,
    relations: Vec<Relation>,
    path_basis: Vec<Path>,
    nilpotency_bound: usize,
    warnings: Vec<String>,
    pair_basis: BTreeMap<(usize, usize), Vec<usize>>,
    reductions: HashMap<Path, Vec<i64>>,
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.document.name.as_deref().unwrap_or("algebra");
        write!(
            f,
            "{name}: {} vertices, {} arrows, {} relations, dim {}",
            self.quiver.vertex_count(),
            self.quiver.arrows.len(),
            self.relations.len(),
            self.path_basis.len()
        )
    }
}

/// Parses and validates a JSON algebra document.
pub fn parse_algebra(text: &str) -> Result<AlgebraSpec> {
    let doc: AlgebraDocument =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    AlgebraSpec::from_document(doc)
}

impl AlgebraSpec {
    pub fn from_document(document: AlgebraDocument) -> Result<Self> {
        let quiver = build_quiver(&document)?;
        if let Err(v) = quiver.topological_order() {
            return Err(Error::CyclicQuiver(quiver.vertices[v].clone()));
        }
        let relations = document
            .relations
            .iter()
            .map(|r| build_relation(&quiver, r))
            .collect::<Result<Vec<_>>>()?;
        let basis = reduce_paths(&quiver, &relations)?;
        let longest = basis.longest;
        let mut spec = AlgebraSpec {
            document,
            quiver,
            relations,
            path_basis: basis.path_basis,
            nilpotency_bound: longest + 1,
            warnings: Vec::new(),
            pair_basis: basis.pair_basis,
            reductions: basis.reductions,
        };
        for (&(x, y), b) in &spec.pair_basis {
            if b.len() > 1 {
                spec.warnings.push(format!(
                    "not schurian: {} basis paths from {} to {}",
                    b.len(),
                    spec.quiver.vertices[x],
                    spec.quiver.vertices[y]
                ));
            }
        }
        Ok(spec)
    }

    pub fn document(&self) -> &AlgebraDocument {
        &self.document
    }

    pub fn name(&self) -> Option<&str> {
        self.document.name.as_deref()
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn path_basis(&self) -> &[Path] {
        &self.path_basis
    }

    pub fn dimension(&self) -> usize {
        self.path_basis.len()
    }

    /// Longest path length plus one, so every path of length `N` is zero.
    pub fn nilpotency_bound(&self) -> usize {
        self.nilpotency_bound
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    /// Basis paths from `x` to `y`.
    pub fn basis_between(&self, x: usize, y: usize) -> Vec<&Path> {
        self.pair_basis
            .get(&(x, y))
            .map(|ix| ix.iter().map(|&i| &self.path_basis[i]).collect())
            .unwrap_or_default()
    }

    /// Coordinates of `path` modulo the ideal, against `basis_between`.
    pub fn reduce(&self, path: &Path) -> &[i64] {
        self.reductions
            .get(path)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn is_path_algebra(&self) -> bool {
        self.relations.is_empty()
    }
}

fn build_quiver(doc: &AlgebraDocument) -> Result<Quiver> {
    let mut vertices: Vec<String> = Vec::new();
    for v in &doc.vertices {
        if v.is_empty() {
            return Err(Error::Parse("empty vertex id".into()));
        }
        if vertices.contains(v) {
            return Err(Error::Parse(format!("duplicate vertex id {v:?}")));
        }
        vertices.push(v.clone());
    }
    let mut arrows: Vec<Arrow> = Vec::new();
    for a in &doc.arrows {
        if a.id.is_empty() {
            return Err(Error::Parse("empty arrow id".into()));
        }
        if arrows.iter().any(|b| b.id == a.id) {
            return Err(Error::Parse(format!("duplicate arrow id {:?}", a.id)));
        }
        let endpoint = |v: &str| {
            vertices.iter().position(|w| w == v).ok_or_else(|| {
                Error::Parse(format!("arrow {:?} uses undeclared vertex {v:?}", a.id))
            })
        };
        arrows.push(Arrow {
            id: a.id.clone(),
            source: endpoint(&a.from)?,
            target: endpoint(&a.to)?,
        });
    }
    Ok(Quiver { vertices, arrows })
}

fn build_path(quiver: &Quiver, ids: &[String]) -> Result<Path> {
    if ids.len() < 2 {
        return Err(Error::InadmissibleRelation(format!(
            "path {ids:?} has length {} < 2",
            ids.len()
        )));
    }
    let arrows = ids
        .iter()
        .map(|id| {
            quiver
                .arrow_index(id)
                .ok_or_else(|| Error::Parse(format!("relation uses unknown arrow {id:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    for w in arrows.windows(2) {
        let (outer, inner) = (&quiver.arrows[w[0]], &quiver.arrows[w[1]]);
        if inner.target != outer.source {
            return Err(Error::Parse(format!(
                "path {ids:?} is not composable at {}{}",
                outer.id, inner.id
            )));
        }
    }
    Ok(Path {
        source: quiver.arrows[*arrows.last().unwrap()].source,
        target: quiver.arrows[arrows[0]].target,
        arrows,
    })
}

fn build_relation(quiver: &Quiver, doc: &RelationDocument) -> Result<Relation> {
    match doc {
        RelationDocument::Zero { path } => Ok(Relation {
            kind: RelationKind::Zero,
            lhs: build_path(quiver, path)?,
            rhs: None,
        }),
        RelationDocument::Commutativity { lhs, rhs } => {
            let l = build_path(quiver, lhs)?;
            let r = build_path(quiver, rhs)?;
            if (l.source, l.target) != (r.source, r.target) {
                return Err(Error::InadmissibleRelation(format!(
                    "commutativity pair {lhs:?} / {rhs:?} is not parallel"
                )));
            }
            if l == r {
                return Err(Error::InadmissibleRelation(format!(
                    "commutativity relation {lhs:?} = {rhs:?} is trivial"
                )));
            }
            Ok(Relation {
                kind: RelationKind::Commutativity,
                lhs: l,
                rhs: Some(r),
            })
        }
    }
}

struct BasisData {
    path_basis: Vec<Path>,
    pair_basis: BTreeMap<(usize, usize), Vec<usize>>,
    reductions: HashMap<Path, Vec<i64>>,
    longest: usize,
}

/// Recomputes the coset-representative path basis of a validated algebra.
pub fn compute_path_basis(spec: &AlgebraSpec) -> Result<Vec<Path>> {
    Ok(reduce_paths(&spec.quiver, &spec.relations)?.path_basis)
}

/// Exact rational elimination of the relation span inside every `e_y KQ e_x`.
///
/// Columns are ordered from the largest path down, so pivots land on the
/// largest paths and the smallest path of each coset survives as its
/// representative.
fn reduce_paths(quiver: &Quiver, relations: &[Relation]) -> Result<BasisData> {
    let all = quiver.all_paths();
    let longest = all
        .values()
        .flat_map(|ps| ps.iter().map(Path::len))
        .max()
        .unwrap_or(0);
    let empty = Vec::new();
    let paths_between = |x: usize, y: usize| all.get(&(x, y)).unwrap_or(&empty);

    let mut chosen: BTreeMap<(usize, usize), Vec<Path>> = BTreeMap::new();
    let mut pending: Vec<((usize, usize), Vec<(Path, Vec<i64>)>)> = Vec::new();

    for (&(x, y), paths) in &all {
        // paths are sorted ascending; column k holds paths[n - 1 - k]
        let n = paths.len();
        let col_of: HashMap<&Path, usize> =
            paths.iter().enumerate().map(|(i, p)| (p, n - 1 - i)).collect();
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for r in relations {
            let (s, t) = (r.lhs.source, r.lhs.target);
            for u in paths_between(t, y) {
                for w in paths_between(x, s) {
                    let mut row = vec![BigRational::zero(); n];
                    let l = u.compose(&r.lhs).compose(w);
                    row[col_of[&l]] += BigRational::one();
                    if let Some(rhs) = &r.rhs {
                        let rr = u.compose(rhs).compose(w);
                        row[col_of[&rr]] -= BigRational::one();
                    }
                    rows.push(row);
                }
            }
        }
        let pivots = rational_rref(&mut rows, n);
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let basis_cols: Vec<usize> = (0..n).rev().filter(|c| !pivot_cols.contains(c)).collect();
        let basis: Vec<Path> = basis_cols.iter().map(|&c| paths[n - 1 - c].clone()).collect();

        let mut rewrites = Vec::new();
        for (bi, &c) in basis_cols.iter().enumerate() {
            let mut v = vec![0i64; basis_cols.len()];
            v[bi] = 1;
            rewrites.push((paths[n - 1 - c].clone(), v));
        }
        for &(ri, c) in &pivots {
            let path = paths[n - 1 - c].clone();
            let mut v = Vec::with_capacity(basis_cols.len());
            for &bc in &basis_cols {
                let coeff = -rows[ri][bc].clone();
                let int = coeff
                    .is_integer()
                    .then(|| coeff.to_integer())
                    .filter(|k| k.abs() <= BigInt::one())
                    .and_then(|k| k.to_i64());
                match int {
                    Some(k) => v.push(k),
                    None => {
                        return Err(Error::NonIntegralRewrite(format!(
                            "path {} rewrites with coefficient {coeff}",
                            path.display(quiver)
                        )))
                    }
                }
            }
            rewrites.push((path, v));
        }
        if !basis.is_empty() {
            chosen.insert((x, y), basis);
        }
        pending.push(((x, y), rewrites));
    }

    let mut path_basis: Vec<Path> = chosen.values().flatten().cloned().collect();
    path_basis.sort_by(|a, b| {
        quiver
            .cmp_paths(a, b)
            .then_with(|| (a.source, a.target).cmp(&(b.source, b.target)))
    });
    let index_of: HashMap<&Path, usize> =
        path_basis.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let pair_basis = chosen
        .iter()
        .map(|(&k, ps)| (k, ps.iter().map(|p| index_of[p]).collect()))
        .collect();
    let reductions = pending.into_iter().flat_map(|(_, rw)| rw).collect();
    Ok(BasisData {
        path_basis,
        pair_basis,
        reductions,
        longest,
    })
}

/// In-place reduced row echelon form over `Q`; returns `(row, pivot column)`.
fn rational_rref(rows: &mut [Vec<BigRational>], cols: usize) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(i) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(i, r);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for k in 0..rows.len() {
            if k != r && !rows[k][c].is_zero() {
                let factor = rows[k][c].clone();
                for j in 0..cols {
                    let delta = &factor * &rows[r][j];
                    rows[k][j] -= delta;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    pivots
}

/// The indecomposable projective `P_x`: at `y` the basis paths from `x` to
/// `y`; an arrow acts by post-composition followed by reduction.
pub fn projective_rep(spec: &Arc<AlgebraSpec>, x: usize, field: PrimeField) -> Representation {
    let q = spec.quiver();
    let n = q.vertex_count();
    let dim = DimVector::new((0..n).map(|y| spec.basis_between(x, y).len()).collect());
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let src = spec.basis_between(x, a.source);
            let mut m = FMatrix::zeros(field, dim[a.target], src.len());
            for (j, p) in src.iter().enumerate() {
                let image = Path::arrow(a, ai).compose(p);
                for (i, &c) in spec.reduce(&image).iter().enumerate() {
                    m.set(i, j, field.from_i64(c));
                }
            }
            m
        })
        .collect();
    Representation::new(spec.clone(), field, dim, maps).expect("projective shapes are consistent")
}

/// The indecomposable injective `I_y`: at `z` the dual of the basis paths
/// from `z` to `y`; an arrow `a` sends a functional `f` to `q ↦ f(q a)`.
pub fn injective_rep(spec: &Arc<AlgebraSpec>, y: usize, field: PrimeField) -> Representation {
    let q = spec.quiver();
    let n = q.vertex_count();
    let dim = DimVector::new((0..n).map(|z| spec.basis_between(z, y).len()).collect());
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let tgt = spec.basis_between(a.target, y);
            let mut m = FMatrix::zeros(field, tgt.len(), dim[a.source]);
            for (i, qp) in tgt.iter().enumerate() {
                let pre = qp.compose(&Path::arrow(a, ai));
                for (j, &c) in spec.reduce(&pre).iter().enumerate() {
                    m.set(i, j, field.from_i64(c));
                }
            }
            m
        })
        .collect();
    Representation::new(spec.clone(), field, dim, maps).expect("injective shapes are consistent")
}
