//! Representations of a bound quiver over `F_p`: homomorphism spaces,
//! subrepresentations and quotients, direct sums, Fitting-lemma
//! decomposition and identification against a knitted AR quiver.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Index};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, Path};
use crate::error::{Error, Result};
use crate::ffla::{FMatrix, PrimeField};
use crate::knit::ArQuiver;

/// Seed used by `decompose` when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed;
/// Random endomorphism draws allowed per decomposition.
pub const DEFAULT_DRAW_BUDGET: usize = 256;
/// Largest `|End|` that `aut_order` will enumerate by default.
pub const DEFAULT_AUT_BOUND: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimVector(Vec<usize>);

impl DimVector {
    pub fn new(entries: Vec<usize>) -> Self {
        DimVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &DimVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        if !other.le(self) {
            return None;
        }
        Some(DimVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn scaled(&self, k: usize) -> DimVector {
        DimVector(self.0.iter().map(|a| a * k).collect())
    }

    /// Rendered as `d1-d2-...-dn`; this doubles as the AR vertex id.
    pub fn id(&self) -> String {
        self.0
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }

    pub fn parse_id(s: &str) -> Option<DimVector> {
        s.split('-')
            .map(|t| t.parse().ok())
            .collect::<Option<Vec<usize>>>()
            .map(DimVector)
    }
}

impl Index<usize> for DimVector {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl Add for &DimVector {
    type Output = DimVector;
    fn add(self, rhs: &DimVector) -> DimVector {
        assert_eq!(self.0.len(), rhs.0.len());
        DimVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// A module `M(B, a) = ⊕ M(B, x)^{a(x)}` named by AR vertex ids. Zero
/// multiplicities are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiplicityVector(BTreeMap<String, u32>);

impl MultiplicityVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(id: impl Into<String>) -> Self {
        let mut m = Self::default();
        m.add(id, 1);
        m
    }

    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, u32)>) -> Self {
        let mut m = Self::default();
        for (id, k) in pairs {
            m.add(id, k);
        }
        m
    }

    pub fn add(&mut self, id: impl Into<String>, k: u32) {
        if k == 0 {
            return;
        }
        *self.0.entry(id.into()).or_insert(0) += k;
    }

    pub fn get(&self, id: &str) -> u32 {
        self.0.get(id).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn summand_count(&self) -> u32 {
        self.0.values().sum()
    }

    /// The id of the only summand, if this is a single indecomposable.
    pub fn as_indecomposable(&self) -> Option<&str> {
        match self.0.iter().next() {
            Some((id, 1)) if self.0.len() == 1 => Some(id),
            _ => None,
        }
    }

    pub fn sum(&self, other: &MultiplicityVector) -> MultiplicityVector {
        let mut out = self.clone();
        for (id, k) in other.iter() {
            out.add(id, k);
        }
        out
    }
}

impl fmt::Display for MultiplicityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A vertex-indexed tuple of matrices `f_x : M_x -> N_x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub maps: Vec<FMatrix>,
}

impl Morphism {
    pub fn identity(m: &Representation) -> Self {
        Morphism {
            maps: m
                .dim
                .entries()
                .iter()
                .map(|&d| FMatrix::identity(m.field, d))
                .collect(),
        }
    }

    pub fn zero(from: &Representation, to: &Representation) -> Self {
        Morphism {
            maps: (0..from.dim.len())
                .map(|x| FMatrix::zeros(from.field, to.dim[x], from.dim[x]))
                .collect(),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Morphism) -> Morphism {
        Morphism {
            maps: self
                .maps
                .iter()
                .zip(&inner.maps)
                .map(|(a, b)| a.mul(b))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(FMatrix::is_zero)
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(FMatrix::is_injective)
    }

    pub fn is_surjective(&self) -> bool {
        self.maps.iter().all(FMatrix::is_surjective)
    }

    pub fn is_invertible(&self) -> bool {
        self.maps.iter().all(FMatrix::is_invertible)
    }

    pub fn rank(&self) -> usize {
        self.maps.iter().map(FMatrix::rank).sum()
    }

    /// `Σ coeffs[i] * basis[i]`; the basis must be nonempty.
    pub fn combination(basis: &[Morphism], coeffs: &[u64]) -> Morphism {
        let mut out = Morphism {
            maps: basis[0]
                .maps
                .iter()
                .map(|m| FMatrix::zeros(m.field(), m.rows(), m.cols()))
                .collect(),
        };
        for (b, &c) in basis.iter().zip(coeffs) {
            for (o, m) in out.maps.iter_mut().zip(&b.maps) {
                o.add_scaled(m, c);
            }
        }
        out
    }

    fn flatten(&self) -> Vec<u64> {
        self.maps
            .iter()
            .flat_map(|m| m.to_rows().into_iter().flatten())
            .collect()
    }

    pub fn sub_scalar(&self, lambda: u64) -> Morphism {
        Morphism {
            maps: self
                .maps
                .iter()
                .map(|m| m.sub(&FMatrix::identity(m.field(), m.rows()).scale(lambda)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u64) -> Morphism {
        Morphism {
            maps: self.maps.iter().map(|m| m.pow(e)).collect(),
        }
    }
}

/// A module over the instantiated algebra: one matrix per arrow, with
/// `rows = dim at target` and `cols = dim at source`.
#[derive(Clone)]
pub struct Representation {
    spec: Arc<AlgebraSpec>,
    field: PrimeField,
    dim: DimVector,
    maps: Vec<FMatrix>,
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation")
            .field("p", &self.field.p())
            .field("dim", &self.dim)
            .field("maps", &self.maps)
            .finish()
    }
}

impl PartialEq for Representation {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.dim == other.dim && self.maps == other.maps
    }
}

impl Eq for Representation {}

impl Representation {
    pub fn new(
        spec: Arc<AlgebraSpec>,
        field: PrimeField,
        dim: DimVector,
        maps: Vec<FMatrix>,
    ) -> Result<Self> {
        let q = spec.quiver();
        if dim.len() != q.vertex_count() || maps.len() != q.arrows().len() {
            return Err(Error::InvalidInput(
                "representation does not match the quiver".into(),
            ));
        }
        for (a, m) in q.arrows().iter().zip(&maps) {
            if m.field() != field || m.rows() != dim[a.target] || m.cols() != dim[a.source] {
                return Err(Error::InvalidInput(format!(
                    "matrix for arrow {} has shape {}x{}, expected {}x{}",
                    a.id,
                    m.rows(),
                    m.cols(),
                    dim[a.target],
                    dim[a.source]
                )));
            }
        }
        Ok(Representation {
            spec,
            field,
            dim,
            maps,
        })
    }

    pub fn zero(spec: &Arc<AlgebraSpec>, field: PrimeField) -> Self {
        let dim = DimVector::zero(spec.vertex_count());
        Self::with_zero_maps(spec, field, dim)
    }

    /// The semisimple module with the given dimension vector.
    pub fn with_zero_maps(spec: &Arc<AlgebraSpec>, field: PrimeField, dim: DimVector) -> Self {
        let maps = spec
            .quiver()
            .arrows()
            .iter()
            .map(|a| FMatrix::zeros(field, dim[a.target], dim[a.source]))
            .collect();
        Representation {
            spec: spec.clone(),
            field,
            dim,
            maps,
        }
    }

    pub fn simple(spec: &Arc<AlgebraSpec>, field: PrimeField, x: usize) -> Self {
        let mut d = vec![0; spec.vertex_count()];
        d[x] = 1;
        Self::with_zero_maps(spec, field, DimVector::new(d))
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> &DimVector {
        &self.dim
    }

    pub fn total_dim(&self) -> usize {
        self.dim.total()
    }

    pub fn map(&self, arrow: usize) -> &FMatrix {
        &self.maps[arrow]
    }

    pub fn maps(&self) -> &[FMatrix] {
        &self.maps
    }

    /// The composite along a path (identity for a trivial path).
    pub fn path_map(&self, path: &Path) -> FMatrix {
        let mut acc = FMatrix::identity(self.field, self.dim[path.source]);
        for &a in path.arrows.iter().rev() {
            acc = self.maps[a].mul(&acc);
        }
        acc
    }

    fn same_category(&self, other: &Representation) -> bool {
        self.field == other.field
            && (Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec)
    }
}

/// True iff every relation holds as a matrix identity.
pub fn check_relations(m: &Representation) -> bool {
    m.spec.relations().iter().all(|r| {
        let lhs = m.path_map(&r.lhs);
        match &r.rhs {
            None => lhs.is_zero(),
            Some(rhs) => lhs == m.path_map(rhs),
        }
    })
}

/// Linear system whose kernel is `Hom(m, n)`.
fn hom_system(m: &Representation, n: &Representation) -> (FMatrix, Vec<usize>, usize) {
    assert!(m.same_category(n), "representations over different algebras or fields");
    let f = m.field;
    let nv = m.dim.len();
    let mut offsets = Vec::with_capacity(nv);
    let mut vars = 0;
    for x in 0..nv {
        offsets.push(vars);
        vars += n.dim[x] * m.dim[x];
    }
    let arrows = m.spec.quiver().arrows();
    let eqs: usize = arrows.iter().map(|a| n.dim[a.target] * m.dim[a.source]).sum();
    let mut sys = FMatrix::zeros(f, eqs, vars);
    let mut row = 0;
    for (ai, a) in arrows.iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let (ma, na) = (&m.maps[ai], &n.maps[ai]);
        for r in 0..n.dim[t] {
            for c in 0..m.dim[s] {
                // (f_t M_a)[r][c]
                for k in 0..m.dim[t] {
                    let v = ma.get(k, c);
                    if v != 0 {
                        let col = offsets[t] + r * m.dim[t] + k;
                        sys.set(row, col, f.add(sys.get(row, col), v));
                    }
                }
                // - (N_a f_s)[r][c]
                for k in 0..n.dim[s] {
                    let v = na.get(r, k);
                    if v != 0 {
                        let col = offsets[s] + k * m.dim[s] + c;
                        sys.set(row, col, f.sub(sys.get(row, col), v));
                    }
                }
                row += 1;
            }
        }
    }
    (sys, offsets, vars)
}

/// Basis of `Hom(m, n)`.
pub fn hom_space(m: &Representation, n: &Representation) -> Vec<Morphism> {
    let (sys, offsets, _) = hom_system(m, n);
    sys.nullspace()
        .into_iter()
        .map(|v| Morphism {
            maps: (0..m.dim.len())
                .map(|x| {
                    let (rows, cols) = (n.dim[x], m.dim[x]);
                    FMatrix::from_fn(m.field, rows, cols, |i, j| v[offsets[x] + i * cols + j])
                })
                .collect(),
        })
        .collect()
}

pub fn hom_dim(m: &Representation, n: &Representation) -> usize {
    let (sys, _, vars) = hom_system(m, n);
    vars - sys.rank()
}

/// Per-vertex subspaces, each stored as a reduced echelon basis (rows).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubspaceTuple {
    bases: Vec<FMatrix>,
}

impl SubspaceTuple {
    /// Normalizes each spanning set to its reduced echelon basis.
    pub fn new(spanning: Vec<FMatrix>) -> Self {
        SubspaceTuple {
            bases: spanning.iter().map(FMatrix::rref_rows).collect(),
        }
    }

    /// Trusts that every basis is already in reduced echelon form.
    pub fn from_echelon(bases: Vec<FMatrix>) -> Self {
        SubspaceTuple { bases }
    }

    pub fn zero(m: &Representation) -> Self {
        SubspaceTuple {
            bases: m
                .dim
                .entries()
                .iter()
                .map(|&d| FMatrix::zeros(m.field, 0, d))
                .collect(),
        }
    }

    pub fn full(m: &Representation) -> Self {
        SubspaceTuple {
            bases: m
                .dim
                .entries()
                .iter()
                .map(|&d| FMatrix::identity(m.field, d))
                .collect(),
        }
    }

    /// The image of a morphism into `target`.
    pub fn image(f: &Morphism) -> Self {
        SubspaceTuple {
            bases: f.maps.iter().map(FMatrix::column_space).collect(),
        }
    }

    pub fn kernel(f: &Morphism) -> Self {
        SubspaceTuple {
            bases: f.maps.iter().map(FMatrix::kernel_basis).collect(),
        }
    }

    pub fn bases(&self) -> &[FMatrix] {
        &self.bases
    }

    pub fn dim(&self) -> DimVector {
        DimVector::new(self.bases.iter().map(FMatrix::rows).collect())
    }
}

/// A subrepresentation, its quotient, and the canonical maps between them.
#[derive(Debug, Clone)]
pub struct SubQuotient {
    pub sub: Representation,
    pub quot: Representation,
    pub inclusion: Morphism,
    pub projection: Morphism,
}

fn pivots_of(basis: &FMatrix) -> Vec<usize> {
    (0..basis.rows())
        .map(|i| basis.row(i).iter().position(|&x| x != 0).expect("zero row in echelon basis"))
        .collect()
}

fn complement_of(d: usize, pivots: &[usize]) -> Vec<usize> {
    (0..d).filter(|c| !pivots.contains(c)).collect()
}

/// `v` minus its component along the echelon basis.
fn reduce_mod(field: PrimeField, v: &mut [u64], basis: &FMatrix, pivots: &[usize]) {
    for (i, &pc) in pivots.iter().enumerate() {
        let c = v[pc];
        if c != 0 {
            for (x, &b) in v.iter_mut().zip(basis.row(i)) {
                *x = field.sub(*x, field.mul(c, b));
            }
        }
    }
}

/// Restricts `m` to the subspace tuple `u` and forms the induced quotient,
/// whose basis is the non-pivot coordinates of each echelon basis.
pub fn sub_quotient(m: &Representation, u: &SubspaceTuple) -> Result<SubQuotient> {
    let f = m.field;
    let nv = m.dim.len();
    if u.bases.len() != nv || (0..nv).any(|x| u.bases[x].cols() != m.dim[x]) {
        return Err(Error::InvalidInput("subspace tuple shape mismatch".into()));
    }
    let pivots: Vec<Vec<usize>> = u.bases.iter().map(pivots_of).collect();
    let comps: Vec<Vec<usize>> = (0..nv).map(|x| complement_of(m.dim[x], &pivots[x])).collect();

    let mut sub_maps = Vec::new();
    let mut quot_maps = Vec::new();
    for (ai, a) in m.spec.quiver().arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let ma = &m.maps[ai];
        let mut sm = FMatrix::zeros(f, u.bases[t].rows(), u.bases[s].rows());
        for j in 0..u.bases[s].rows() {
            let mut v = ma.mul_vec(u.bases[s].row(j));
            for (i, &pc) in pivots[t].iter().enumerate() {
                sm.set(i, j, v[pc]);
            }
            reduce_mod(f, &mut v, &u.bases[t], &pivots[t]);
            if v.iter().any(|&x| x != 0) {
                return Err(Error::NotClosed);
            }
        }
        sub_maps.push(sm);

        let mut qm = FMatrix::zeros(f, comps[t].len(), comps[s].len());
        for (j, &c) in comps[s].iter().enumerate() {
            let mut v = ma.column(c);
            reduce_mod(f, &mut v, &u.bases[t], &pivots[t]);
            for (i, &qc) in comps[t].iter().enumerate() {
                qm.set(i, j, v[qc]);
            }
        }
        quot_maps.push(qm);
    }

    let inclusion = Morphism {
        maps: u.bases.iter().map(FMatrix::transpose).collect(),
    };
    let projection = Morphism {
        maps: (0..nv)
            .map(|x| {
                let mut pm = FMatrix::zeros(f, comps[x].len(), m.dim[x]);
                for k in 0..m.dim[x] {
                    let mut e = vec![0u64; m.dim[x]];
                    e[k] = 1;
                    reduce_mod(f, &mut e, &u.bases[x], &pivots[x]);
                    for (i, &qc) in comps[x].iter().enumerate() {
                        pm.set(i, k, e[qc]);
                    }
                }
                pm
            })
            .collect(),
    };
    let sub = Representation {
        spec: m.spec.clone(),
        field: f,
        dim: u.dim(),
        maps: sub_maps,
    };
    let quot = Representation {
        spec: m.spec.clone(),
        field: f,
        dim: DimVector::new(comps.iter().map(Vec::len).collect()),
        maps: quot_maps,
    };
    Ok(SubQuotient {
        sub,
        quot,
        inclusion,
        projection,
    })
}

/// Block-diagonal direct sum. An empty list gives the zero module.
pub fn direct_sum(
    spec: &Arc<AlgebraSpec>,
    field: PrimeField,
    parts: &[&Representation],
) -> Representation {
    let n = spec.vertex_count();
    let dim = parts
        .iter()
        .fold(DimVector::zero(n), |acc, m| &acc + &m.dim);
    let maps = (0..spec.quiver().arrows().len())
        .map(|ai| {
            let blocks: Vec<&FMatrix> = parts.iter().map(|m| &m.maps[ai]).collect();
            FMatrix::block_diagonal(field, &blocks)
        })
        .collect();
    Representation {
        spec: spec.clone(),
        field,
        dim,
        maps,
    }
}

/// Certifies that `End(m)` is local with residue field `F_p`: every basis
/// endomorphism is a scalar plus a nilpotent, and the nilpotent parts
/// generate a nilpotent algebra.
pub fn is_brick_like_local(m: &Representation) -> bool {
    let n = m.total_dim();
    if n == 0 {
        return false;
    }
    let end = hom_space(m, m);
    if end.len() == 1 {
        return true;
    }
    let f = m.field;
    let mut nil_parts = Vec::with_capacity(end.len());
    for e in &end {
        let lambda = (0..f.p()).find(|&l| e.sub_scalar(l).pow(n as u64).is_zero());
        match lambda {
            Some(l) => nil_parts.push(e.sub_scalar(l)),
            None => return false,
        }
    }
    let width: usize = m.dim.entries().iter().map(|d| d * d).sum();
    let span_basis = |elems: &[Morphism]| -> Vec<Morphism> {
        let vecs: Vec<Vec<u64>> = elems.iter().map(Morphism::flatten).collect();
        let r = FMatrix::from_vectors(f, width, &vecs).rref_rows();
        (0..r.rows()).map(|i| unflatten(m, r.row(i))).collect()
    };
    let generators = span_basis(&nil_parts);
    if generators.len() + 1 != end.len() {
        return false;
    }
    let mut power = generators.clone();
    for _ in 0..=n {
        if power.is_empty() {
            return true;
        }
        let products: Vec<Morphism> = power
            .iter()
            .flat_map(|x| generators.iter().map(move |g| x.compose(g)))
            .collect();
        power = span_basis(&products);
    }
    power.is_empty()
}

fn unflatten(m: &Representation, v: &[u64]) -> Morphism {
    let mut off = 0;
    Morphism {
        maps: m
            .dim
            .entries()
            .iter()
            .map(|&d| {
                let mm = FMatrix::from_fn(m.field, d, d, |i, j| v[off + i * d + j]);
                off += d * d;
                mm
            })
            .collect(),
    }
}

/// An isomorphism `a -> b` between indecomposables, if one exists. The
/// non-invertible maps form a proper subspace in that case, so some basis
/// element of `Hom(a, b)` is invertible.
pub fn iso_between(a: &Representation, b: &Representation) -> Option<Morphism> {
    if a.dim != b.dim {
        return None;
    }
    hom_space(a, b).into_iter().find(Morphism::is_invertible)
}

/// Splits `m` into indecomposable summands, each with its embedding into `m`.
pub fn decompose_with_embeddings(
    m: &Representation,
    seed: u64,
    budget: usize,
) -> Result<Vec<(Representation, Morphism)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = budget;
    let mut out = Vec::new();
    split(m, Morphism::identity(m), &mut rng, &mut draws, budget, &mut out)?;
    Ok(out)
}

fn split(
    m: &Representation,
    emb: Morphism,
    rng: &mut ChaCha8Rng,
    draws: &mut usize,
    budget: usize,
    out: &mut Vec<(Representation, Morphism)>,
) -> Result<()> {
    let n = m.total_dim();
    if n == 0 {
        return Ok(());
    }
    if is_brick_like_local(m) {
        out.push((m.clone(), emb));
        return Ok(());
    }
    let end = hom_space(m, m);
    let p = m.field.p();
    loop {
        if *draws == 0 {
            return Err(Error::DecompositionBudgetExceeded(budget));
        }
        *draws -= 1;
        let coeffs: Vec<u64> = (0..end.len()).map(|_| rng.gen_range(0..p)).collect();
        let f = Morphism::combination(&end, &coeffs);
        for lambda in 0..p {
            // Fitting: M = Im(g^n) ⊕ Ker(g^n)
            let g = f.sub_scalar(lambda).pow(n as u64);
            let r = g.rank();
            if r == 0 || r == n {
                continue;
            }
            for tuple in [SubspaceTuple::image(&g), SubspaceTuple::kernel(&g)] {
                let sq = sub_quotient(m, &tuple)?;
                split(&sq.sub, emb.compose(&sq.inclusion), rng, draws, budget, out)?;
            }
            return Ok(());
        }
    }
}

/// Indecomposable summands of `m` grouped by isomorphism class, in order of
/// first appearance.
pub fn decompose(m: &Representation, seed: u64) -> Result<Vec<(Representation, usize)>> {
    let parts = decompose_with_embeddings(m, seed, DEFAULT_DRAW_BUDGET)?;
    let mut classes: Vec<(Representation, usize)> = Vec::new();
    for (x, _) in parts {
        match classes.iter_mut().find(|(y, _)| iso_between(&x, y).is_some()) {
            Some(entry) => entry.1 += 1,
            None => classes.push((x, 1)),
        }
    }
    Ok(classes)
}

/// `dim Hom(X_i, m)` for every vertex of the AR quiver, in AR order.
pub fn hom_profile(m: &Representation, ar: &ArQuiver) -> Vec<usize> {
    ar.vertices().iter().map(|v| hom_dim(&v.rep, m)).collect()
}

/// Multiplicities of the AR vertices in `m`, solved from the unitriangular
/// system `H · mult = (dim Hom(X_i, m))_i`.
pub fn identify(m: &Representation, ar: &ArQuiver) -> Result<MultiplicityVector> {
    let h = hom_profile(m, ar);
    let mult = solve_multiplicities(ar, &h)?;
    let mut dim = DimVector::zero(m.dim.len());
    let mut out = MultiplicityVector::zero();
    for (v, &k) in ar.vertices().iter().zip(&mult) {
        dim = &dim + &v.rep.dim.scaled(k as usize);
        out.add(v.id.clone(), k);
    }
    if dim != m.dim {
        return Err(Error::NegativeMultiplicity(format!(
            "summands have dimension {dim}, module has {}",
            m.dim
        )));
    }
    Ok(out)
}

pub(crate) fn solve_multiplicities(ar: &ArQuiver, h: &[usize]) -> Result<Vec<u32>> {
    let hm = ar.hom_matrix();
    let n = hm.len();
    let mut mult = vec![0i64; n];
    for i in (0..n).rev() {
        if hm[i][i] != 1 {
            return Err(Error::NonUnitriangularHomMatrix(format!(
                "dim End({}) = {}",
                ar.vertices()[i].id,
                hm[i][i]
            )));
        }
        let rest: i64 = (i + 1..n).map(|j| hm[i][j] as i64 * mult[j]).sum();
        let k = h[i] as i64 - rest;
        if k < 0 {
            return Err(Error::NegativeMultiplicity(format!(
                "vertex {} gets multiplicity {k}",
                ar.vertices()[i].id
            )));
        }
        mult[i] = k;
    }
    Ok(mult.into_iter().map(|k| k as u32).collect())
}

/// `|Aut(m)|` by enumerating all of `End(m)`.
pub fn aut_order(m: &Representation, bound: u128) -> Result<u128> {
    let end = hom_space(m, m);
    let p = m.field.p();
    let size = (p as u128).checked_pow(end.len() as u32).unwrap_or(u128::MAX);
    if size > bound {
        return Err(Error::ResourceBound(format!(
            "|End| = {p}^{} exceeds {bound}",
            end.len()
        )));
    }
    if end.is_empty() {
        return Ok(1);
    }
    let mut coeffs = vec![0u64; end.len()];
    let mut count = 0u128;
    loop {
        if Morphism::combination(&end, &coeffs).is_invertible() {
            count += 1;
        }
        if !odometer(&mut coeffs, p) {
            break;
        }
    }
    Ok(count)
}

/// Advances a base-`p` counter; false once it wraps back to zero.
pub(crate) fn odometer(digits: &mut [u64], p: u64) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < p {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_algebra, projective_rep};

    const A2: &str = r#"{"vertices": ["1","2"], "arrows": [{"id":"a","from":"1","to":"2"}]}"#;
    const A3: &str = r#"{"vertices": ["1","2","3"],
        "arrows": [{"id":"a","from":"1","to":"2"},{"id":"b","from":"2","to":"3"}]}"#;
    const A3_ZERO: &str = r#"{"vertices": ["1","2","3"],
        "arrows": [{"id":"a","from":"1","to":"2"},{"id":"b","from":"2","to":"3"}],
        "relations": [{"kind":"zero","path":["b","a"]}]}"#;
    const SQUARE: &str = r#"{"vertices": ["1","2","3","4"],
        "arrows": [{"id":"a","from":"1","to":"2"},{"id":"b","from":"1","to":"3"},
                   {"id":"c","from":"2","to":"4"},{"id":"d","from":"3","to":"4"}],
        "relations": [{"kind":"commutativity","lhs":["c","a"],"rhs":["d","b"]}]}"#;
    const SQUARE_FREE: &str = r#"{"vertices": ["1","2","3","4"],
        "arrows": [{"id":"a","from":"1","to":"2"},{"id":"b","from":"1","to":"3"},
                   {"id":"c","from":"2","to":"4"},{"id":"d","from":"3","to":"4"}]}"#;

    fn spec(json: &str) -> Arc<AlgebraSpec> {
        Arc::new(parse_algebra(json).unwrap())
    }

    fn k(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn relation_checks() {
        let s = spec(A3_ZERO);
        let f = k(3);
        assert!(check_relations(&Representation::simple(&s, f, 1)));
        assert!(check_relations(&projective_rep(&s, 0, f)));
        let id = FMatrix::identity(f, 1);
        let faithful =
            Representation::new(s.clone(), f, DimVector::new(vec![1, 1, 1]), vec![id.clone(), id])
                .unwrap();
        assert!(!check_relations(&faithful));
    }

    #[test]
    fn a2_hom_dimensions() {
        let s = spec(A2);
        let f = k(5);
        let s1 = Representation::simple(&s, f, 0);
        let s2 = Representation::simple(&s, f, 1);
        let p1 = projective_rep(&s, 0, f);
        assert_eq!(hom_space(&s1, &s2).len(), 0);
        assert_eq!(hom_space(&p1, &s1).len(), 1);
        assert_eq!(hom_space(&s2, &p1).len(), 1);
        assert_eq!(hom_dim(&s1, &p1), 0);
        for h in hom_space(&s2, &p1) {
            for (ai, a) in s.quiver().arrows().iter().enumerate() {
                assert_eq!(
                    h.maps[a.target].mul(s2.map(ai)),
                    p1.map(ai).mul(&h.maps[a.source])
                );
            }
        }
    }

    #[test]
    fn sub_quotient_examples() {
        let s = spec(A2);
        let f = k(3);
        let p1 = projective_rep(&s, 0, f);
        let zero = sub_quotient(&p1, &SubspaceTuple::zero(&p1)).unwrap();
        assert_eq!(zero.sub.total_dim(), 0);
        assert_eq!(zero.quot, p1);
        let full = sub_quotient(&p1, &SubspaceTuple::full(&p1)).unwrap();
        assert_eq!(full.sub, p1);
        assert_eq!(full.quot.total_dim(), 0);

        let socle = SubspaceTuple::new(vec![FMatrix::zeros(f, 0, 1), FMatrix::identity(f, 1)]);
        let sq = sub_quotient(&p1, &socle).unwrap();
        assert_eq!(sq.sub, Representation::simple(&s, f, 1));
        assert_eq!(sq.quot, Representation::simple(&s, f, 0));
        assert!(sq.projection.compose(&sq.inclusion).is_zero());

        let top = SubspaceTuple::new(vec![FMatrix::identity(f, 1), FMatrix::zeros(f, 0, 1)]);
        assert_eq!(sub_quotient(&p1, &top).unwrap_err(), Error::NotClosed);
    }

    #[test]
    fn direct_sum_examples() {
        let s = spec(A2);
        let f = k(2);
        let s1 = Representation::simple(&s, f, 0);
        let s2 = Representation::simple(&s, f, 1);
        let p1 = projective_rep(&s, 0, f);
        assert_eq!(direct_sum(&s, f, &[]).total_dim(), 0);
        let ss = direct_sum(&s, f, &[&s1, &s2]);
        assert_eq!(ss.dim().entries(), &[1, 1]);
        assert!(ss.map(0).is_zero());
        assert_eq!(direct_sum(&s, f, &[&p1, &s1]).dim().entries(), &[2, 1]);
    }

    #[test]
    fn decompose_examples() {
        let s = spec(A2);
        for p in [2, 3, 7] {
            let f = k(p);
            let p1 = projective_rep(&s, 0, f);
            let d = decompose(&p1, DEFAULT_SEED).unwrap();
            assert_eq!(d.len(), 1);
            assert_eq!(d[0], (p1.clone(), 1));
            let s1 = Representation::simple(&s, f, 0);
            let d = decompose(&direct_sum(&s, f, &[&s1, &s1]), DEFAULT_SEED).unwrap();
            assert_eq!(d.len(), 1);
            assert_eq!(d[0].1, 2);
            assert_eq!(d[0].0.dim(), s1.dim());
        }
    }

    #[test]
    fn radical_of_square_projectives() {
        for (json, expected) in [(SQUARE, vec![vec![0, 1, 1, 1]]), (SQUARE_FREE, vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]])] {
            let s = spec(json);
            for p in [2, 3] {
                let f = k(p);
                let p1 = projective_rep(&s, 0, f);
                let mut rad = vec![FMatrix::zeros(f, 0, 1)];
                rad.extend((1..4).map(|y| FMatrix::identity(f, p1.dim()[y])));
                let rad = sub_quotient(&p1, &SubspaceTuple::new(rad)).unwrap().sub;
                let parts = decompose_with_embeddings(&rad, DEFAULT_SEED, DEFAULT_DRAW_BUDGET)
                    .unwrap();
                let mut dims: Vec<Vec<usize>> =
                    parts.iter().map(|(x, _)| x.dim().entries().to_vec()).collect();
                dims.sort();
                assert_eq!(dims, expected);
                for (x, emb) in &parts {
                    assert!(emb.is_injective());
                    assert!(is_brick_like_local(x));
                }
                // the summands' images span the whole radical
                let total: usize = parts.iter().map(|(x, _)| x.total_dim()).sum();
                assert_eq!(total, rad.total_dim());
            }
        }
    }

    #[test]
    fn decomposable_modules_are_not_local() {
        let s = spec(A3);
        let f = k(2);
        let s2 = Representation::simple(&s, f, 1);
        let p2 = projective_rep(&s, 1, f);
        assert!(is_brick_like_local(&p2));
        assert!(!is_brick_like_local(&direct_sum(&s, f, &[&s2, &p2])));
        assert!(!is_brick_like_local(&Representation::zero(&s, f)));
    }

    #[test]
    fn aut_orders() {
        let s = spec(A2);
        let s1_2 = Representation::simple(&s, k(2), 0);
        let s1_5 = Representation::simple(&s, k(5), 0);
        assert_eq!(aut_order(&s1_2, DEFAULT_AUT_BOUND).unwrap(), 1);
        assert_eq!(aut_order(&s1_5, DEFAULT_AUT_BOUND).unwrap(), 4);
        let double = direct_sum(&s, k(2), &[&s1_2, &s1_2]);
        assert_eq!(aut_order(&double, DEFAULT_AUT_BOUND).unwrap(), 6);
        assert!(matches!(aut_order(&double, 10), Err(Error::ResourceBound(_))));
    }

    #[test]
    fn dim_vector_ids_round_trip() {
        let d = DimVector::new(vec![1, 0, 12]);
        assert_eq!(d.id(), "1-0-12");
        assert_eq!(DimVector::parse_id("1-0-12"), Some(d));
        assert_eq!(DimVector::parse_id("1-x"), None);
    }
}
