//! The degenerate Hall algebra and the Riedtmann algebra in bounded degree,
//! the Lie algebras `K(B)` and `L(B)` spanned by indecomposables, the sign
//! twist between them, and simply-laced root systems for comparison.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ffla::primes;
use crate::hall::{class_dim, hall_polynomial, ArFamily, HallConfig, HallPolynomial};
use crate::knit::ArQuiver;
use crate::reps::{DimVector, MultiplicityVector};

/// Finite integer combination of isomorphism classes. Zero coefficients
/// are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GradedVector(BTreeMap<MultiplicityVector, i64>);

impl GradedVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(class: MultiplicityVector) -> Self {
        let mut v = Self::default();
        v.add_term(class, 1);
        v
    }

    pub fn add_term(&mut self, class: MultiplicityVector, k: i64) {
        if k == 0 {
            return;
        }
        let e = self.0.entry(class.clone()).or_insert(0);
        *e += k;
        if *e == 0 {
            self.0.remove(&class);
        }
    }

    pub fn add_scaled(&mut self, other: &GradedVector, k: i64) {
        for (c, &v) in &other.0 {
            self.add_term(c.clone(), k * v);
        }
    }

    pub fn sub(&self, other: &GradedVector) -> GradedVector {
        let mut out = self.clone();
        out.add_scaled(other, -1);
        out
    }

    pub fn coefficient(&self, class: &MultiplicityVector) -> i64 {
        self.0.get(class).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiplicityVector, i64)> {
        self.0.iter().map(|(c, &k)| (c, k))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Serialize for GradedVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (c, k) in &self.0 {
            map.serialize_entry(&c.to_string(), k)?;
        }
        map.end()
    }
}

/// All `a` with `Σ a(x) dim X = d`, in lexicographic order of the
/// multiplicities listed along the AR order.
pub fn enumerate_module_classes(ar: &ArQuiver, d: &DimVector) -> Vec<MultiplicityVector> {
    fn go(
        ar: &ArQuiver,
        i: usize,
        rest: &DimVector,
        current: &mut Vec<(usize, u32)>,
        out: &mut Vec<MultiplicityVector>,
    ) {
        if rest.is_zero() {
            out.push(MultiplicityVector::from_pairs(
                current.iter().map(|&(v, k)| (ar.vertices()[v].id.clone(), k)),
            ));
            return;
        }
        if i == ar.len() {
            return;
        }
        let dim = ar.vertices()[i].rep.dim();
        let mut k = 0u32;
        let mut left = rest.clone();
        loop {
            if k > 0 {
                current.push((i, k));
            }
            go(ar, i + 1, &left, current, out);
            if k > 0 {
                current.pop();
            }
            match left.checked_sub(dim) {
                Some(l) if !dim.is_zero() => left = l,
                _ => break,
            }
            k += 1;
        }
    }
    let mut out = Vec::new();
    go(ar, 0, d, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Bounded-degree access to `H(Γ)₁` and `R(B)`, caching every Hall
/// polynomial it interpolates.
pub struct HallAlgebra {
    family: Arc<ArFamily>,
    config: HallConfig,
    base: Arc<ArQuiver>,
    polynomials: Mutex<BTreeMap<(MultiplicityVector, MultiplicityVector, MultiplicityVector), HallPolynomial>>,
}

impl HallAlgebra {
    pub fn new(family: Arc<ArFamily>, config: HallConfig) -> Result<Self> {
        let p = primes()
            .find(|p| !config.excluded_primes.contains(p))
            .expect("infinitely many primes");
        let base = family.get(p)?;
        Ok(HallAlgebra {
            family,
            config,
            base,
            polynomials: Mutex::new(BTreeMap::new()),
        })
    }

    /// The AR quiver used to enumerate classes and name basis elements.
    pub fn ar(&self) -> &Arc<ArQuiver> {
        &self.base
    }

    pub fn family(&self) -> &Arc<ArFamily> {
        &self.family
    }

    pub fn polynomial(
        &self,
        a: &MultiplicityVector,
        c: &MultiplicityVector,
        b: &MultiplicityVector,
    ) -> Result<HallPolynomial> {
        let key = (a.clone(), c.clone(), b.clone());
        if let Some(p) = self.polynomials.lock().expect("cache poisoned").get(&key) {
            return Ok(p.clone());
        }
        let poly = hall_polynomial(&self.family, a, c, b, &self.config)?;
        self.polynomials
            .lock()
            .expect("cache poisoned")
            .insert(key, poly.clone());
        Ok(poly)
    }

    /// Every polynomial computed so far.
    pub fn polynomials(&self) -> Vec<HallPolynomial> {
        self.polynomials
            .lock()
            .expect("cache poisoned")
            .values()
            .cloned()
            .collect()
    }

    fn middles(&self, x: &MultiplicityVector, y: &MultiplicityVector) -> Result<Vec<MultiplicityVector>> {
        let spec = self.base.spec();
        let d = &class_dim(spec, x)? + &class_dim(spec, y)?;
        Ok(enumerate_module_classes(&self.base, &d))
    }

    /// `u_c u_a = Σ_b φ_{ca}^b(1) u_b`.
    pub fn hall_product(&self, c: &MultiplicityVector, a: &MultiplicityVector) -> Result<GradedVector> {
        let mut out = GradedVector::zero();
        for b in self.middles(a, c)? {
            let k = self.polynomial(a, c, &b)?.evaluate(1);
            out.add_term(b, k);
        }
        Ok(out)
    }

    /// `v_M v_N = Σ_X χ(E(M, N; X)) v_X`, where `M` is the submodule.
    pub fn riedtmann_product(&self, m: &MultiplicityVector, n: &MultiplicityVector) -> Result<GradedVector> {
        let mut out = GradedVector::zero();
        for x in self.middles(m, n)? {
            let k = self.polynomial(m, n, &x)?.evaluate(1);
            out.add_term(x, k);
        }
        Ok(out)
    }

    /// Bilinear extension of `hall_product`.
    pub fn multiply(&self, x: &GradedVector, y: &GradedVector) -> Result<GradedVector> {
        let mut out = GradedVector::zero();
        for (c, k) in x.terms() {
            for (a, l) in y.terms() {
                out.add_scaled(&self.hall_product(c, a)?, k * l);
            }
        }
        Ok(out)
    }

    /// `[u_x, u_y] = u_x u_y - u_y u_x`.
    pub fn lie_table_k(&self) -> Result<LieTable> {
        self.lie_table(LieKind::Ringel)
    }

    /// `[v_x, v_y] = v_x v_y - v_y v_x`.
    pub fn lie_table_l(&self) -> Result<LieTable> {
        self.lie_table(LieKind::Riedtmann)
    }

    fn lie_table(&self, kind: LieKind) -> Result<LieTable> {
        let ar = &self.base;
        let basis: Vec<String> = ar.vertices().iter().map(|v| v.id.clone()).collect();
        let dims: Vec<DimVector> = ar.vertices().iter().map(|v| v.rep.dim().clone()).collect();
        let n = basis.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let product = |x: &MultiplicityVector, y: &MultiplicityVector| match kind {
            LieKind::Ringel => self.hall_product(x, y),
            LieKind::Riedtmann => self.riedtmann_product(x, y),
        };
        let entries: Vec<((usize, usize), GradedVector)> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let (x, y) = (MultiplicityVector::single(&basis[i]), MultiplicityVector::single(&basis[j]));
                let bracket = product(&x, &y)?.sub(&product(&y, &x)?);
                let summed = &dims[i] + &dims[j];
                for (class, _) in bracket.terms() {
                    let single = class.as_indecomposable();
                    if single.is_none() || bracket.len() > 1 || single.map(|id| ar.vertex(id).map(|v| v.rep.dim())) != Some(Some(&summed)) {
                        return Err(Error::NotClosedOnIndecomposables(format!(
                            "[{}, {}] has support {class}",
                            basis[i], basis[j]
                        )));
                    }
                }
                Ok(((i, j), bracket))
            })
            .collect::<Result<_>>()?;
        let brackets: BTreeMap<(usize, usize), GradedVector> =
            entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let mut table = LieTable {
            kind,
            basis,
            dims,
            brackets,
            direction_violations: Vec::new(),
        };
        if kind == LieKind::Ringel {
            table.direction_violations = self.direction_violations(&table)?;
        }
        Ok(table)
    }

    /// Ext-direction: a nonzero `φ_{X_i X_j}^{Z}` with `Z` indecomposable
    /// forces `j < pos(Z) < i`. Bracket direction: a nonzero bracket with
    /// support `Z` comes from exactly one of the two orders.
    fn direction_violations(&self, table: &LieTable) -> Result<Vec<String>> {
        let ar = &self.base;
        let n = table.basis.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let summed = &table.dims[i] + &table.dims[j];
                let Some(z) = ar.vertex(&summed.id()).map(|v| ar.index_of(&v.id).expect("indexed")) else {
                    continue;
                };
                let (c, a, b) = (
                    MultiplicityVector::single(&table.basis[i]),
                    MultiplicityVector::single(&table.basis[j]),
                    MultiplicityVector::single(&table.basis[z]),
                );
                let nonzero = !self.polynomial(&a, &c, &b)?.is_zero();
                if nonzero && !(j < z && z < i) {
                    out.push(format!(
                        "extension of {} by {} lands at {} outside the directed order",
                        table.basis[i], table.basis[j], table.basis[z]
                    ));
                }
                if i < j {
                    if let Some(br) = table.brackets.get(&(i, j)) {
                        let reverse = !self.polynomial(&c, &a, &b)?.is_zero();
                        if nonzero == reverse {
                            out.push(format!(
                                "[{}, {}] = {:?} but both orders have Hall number {}",
                                table.basis[i],
                                table.basis[j],
                                br.terms().next().map(|(k, v)| (k.to_string(), v)),
                                if nonzero { "nonzero" } else { "zero" }
                            ));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Checks `(xy)z = x(yz)` on all class triples with total dimension at
    /// most `max_total`.
    pub fn associativity_check(&self, max_total: usize) -> Result<AssociativityReport> {
        let ar = &self.base;
        let nv = ar.spec().vertex_count();
        let mut classes = Vec::new();
        for d in dim_vectors_up_to(nv, max_total) {
            for c in enumerate_module_classes(ar, &d) {
                classes.push((d.total(), c));
            }
        }
        let mut triples = Vec::new();
        for (dx, x) in &classes {
            for (dy, y) in &classes {
                for (dz, z) in &classes {
                    if dx + dy + dz <= max_total {
                        triples.push((x, y, z));
                    }
                }
            }
        }
        let failures: Vec<String> = triples
            .par_iter()
            .map(|&(x, y, z)| -> Result<Option<String>> {
                let (gx, gy, gz) = (
                    GradedVector::basis(x.clone()),
                    GradedVector::basis(y.clone()),
                    GradedVector::basis(z.clone()),
                );
                let left = self.multiply(&self.multiply(&gx, &gy)?, &gz)?;
                let right = self.multiply(&gx, &self.multiply(&gy, &gz)?)?;
                Ok((left != right).then(|| format!("({x})({y})({z})")))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Ok(AssociativityReport {
            triples_checked: triples.len(),
            passed: failures.is_empty(),
            failures,
        })
    }
}

fn dim_vectors_up_to(n: usize, max_total: usize) -> Vec<DimVector> {
    let mut out = Vec::new();
    let mut d = vec![0usize; n];
    loop {
        out.push(DimVector::new(d.clone()));
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            d[i] += 1;
            if d.iter().sum::<usize>() <= max_total {
                break;
            }
            d[i] = 0;
            i += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LieKind {
    /// `K(B)` inside the degenerate Hall algebra.
    Ringel,
    /// `L(B)` inside the Riedtmann algebra.
    Riedtmann,
}

/// Structure constants on the indecomposables; only nonzero `[i, j]` with
/// `i < j` are stored.
#[derive(Debug, Clone, Serialize)]
pub struct LieTable {
    pub kind: LieKind,
    pub basis: Vec<String>,
    pub dims: Vec<DimVector>,
    #[serde(serialize_with = "serialize_brackets")]
    pub brackets: BTreeMap<(usize, usize), GradedVector>,
    pub direction_violations: Vec<String>,
}

fn serialize_brackets<S: Serializer>(
    b: &BTreeMap<(usize, usize), GradedVector>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        i: usize,
        j: usize,
        value: &'a GradedVector,
    }
    s.collect_seq(b.iter().map(|(&(i, j), value)| Entry { i, j, value }))
}

impl LieTable {
    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == id)
    }

    /// `[e_i, e_j]` as `(target index, coefficient)`, using antisymmetry.
    pub fn bracket(&self, i: usize, j: usize) -> Option<(usize, i64)> {
        let (key, sign) = if i < j { ((i, j), 1) } else { ((j, i), -1) };
        let v = self.brackets.get(&key)?;
        let (class, k) = v.terms().next()?;
        let id = class.as_indecomposable()?;
        Some((self.index_of(id)?, sign * k))
    }

    fn bracket_vec(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let n = self.basis.len();
        let mut out = vec![0i64; n];
        for i in (0..n).filter(|&i| x[i] != 0) {
            for j in (0..n).filter(|&j| y[j] != 0) {
                if let Some((t, k)) = self.bracket(i, j) {
                    out[t] += x[i] * y[j] * k;
                }
            }
        }
        out
    }

    /// Text matrix of structure constants: row `i`, column `j` shows
    /// `k·t` when `[e_i, e_j] = k e_t`.
    pub fn to_text(&self) -> String {
        let n = self.basis.len();
        let cell = |i: usize, j: usize| match self.bracket(i, j) {
            Some((t, k)) => format!("{k}*{}", self.basis[t]),
            None => "0".to_string(),
        };
        let cells: Vec<Vec<String>> = (0..n).map(|i| (0..n).map(|j| cell(i, j)).collect()).collect();
        let width = cells
            .iter()
            .flatten()
            .chain(&self.basis)
            .map(String::len)
            .max()
            .unwrap_or(1);
        let mut s = format!("{:width$}", "");
        for b in &self.basis {
            s.push_str(&format!(" {b:>width$}"));
        }
        s.push('\n');
        for (i, row) in cells.iter().enumerate() {
            s.push_str(&format!("{:>width$}", self.basis[i]));
            for c in row {
                s.push_str(&format!(" {c:>width$}"));
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AssociativityReport {
    pub triples_checked: usize,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IsomorphismReport {
    pub pairs_checked: usize,
    pub passed: bool,
    pub mismatches: Vec<String>,
}

/// `ε(x) = (-1)^{dim x - 1}`.
pub fn sign(dim: &DimVector) -> i64 {
    if dim.total() % 2 == 1 {
        1
    } else {
        -1
    }
}

/// Checks that `u_x ↦ ε(x) v_x` intertwines the two bracket tables.
pub fn verify_isomorphism(k: &LieTable, l: &LieTable) -> IsomorphismReport {
    let mut mismatches = Vec::new();
    if k.basis != l.basis {
        mismatches.push("tables have different bases".to_string());
        return IsomorphismReport {
            pairs_checked: 0,
            passed: false,
            mismatches,
        };
    }
    let n = k.basis.len();
    let mut pairs = 0;
    for i in 0..n {
        for j in i + 1..n {
            pairs += 1;
            // F([u_i, u_j]) versus [F u_i, F u_j]
            let lhs = k.bracket(i, j).map(|(t, c)| (t, c * sign(&k.dims[t])));
            let rhs = l
                .bracket(i, j)
                .map(|(t, c)| (t, c * sign(&k.dims[i]) * sign(&k.dims[j])));
            if lhs != rhs {
                mismatches.push(format!(
                    "[{}, {}]: F applied to the K bracket gives {:?}, the L bracket gives {:?}",
                    k.basis[i], k.basis[j], lhs, rhs
                ));
            }
        }
    }
    IsomorphismReport {
        pairs_checked: pairs,
        passed: mismatches.is_empty(),
        mismatches,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct JacobiReport {
    pub triples_checked: usize,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0` on all basis triples.
pub fn jacobi_check(t: &LieTable) -> JacobiReport {
    let n = t.basis.len();
    let unit = |i: usize| {
        let mut v = vec![0i64; n];
        v[i] = 1;
        v
    };
    let mut checked = 0;
    let mut failures = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                checked += 1;
                let (x, y, z) = (unit(i), unit(j), unit(k));
                let a = t.bracket_vec(&x, &t.bracket_vec(&y, &z));
                let b = t.bracket_vec(&y, &t.bracket_vec(&z, &x));
                let c = t.bracket_vec(&z, &t.bracket_vec(&x, &y));
                if (0..n).any(|m| a[m] + b[m] + c[m] != 0) {
                    failures.push(format!("({}, {}, {})", t.basis[i], t.basis[j], t.basis[k]));
                }
            }
        }
    }
    JacobiReport {
        triples_checked: checked,
        passed: failures.is_empty(),
        failures,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootSystem {
    pub cartan: Vec<Vec<i64>>,
    /// Sorted by height, then lexicographically.
    pub positive_roots: Vec<Vec<i64>>,
}

/// Largest root count accepted before declaring infinite type.
pub const ROOT_BOUND: usize = 10_000;

/// Positive roots by closing the simple roots under simple reflections
/// that keep them positive.
pub fn positive_roots(cartan: &[Vec<i64>]) -> Result<RootSystem> {
    let n = cartan.len();
    for (i, row) in cartan.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidInput("Cartan matrix is not square".into()));
        }
        for (j, &c) in row.iter().enumerate() {
            let ok = if i == j { c == 2 } else { c == cartan[j][i] && c <= 0 };
            if !ok {
                return Err(Error::InvalidInput(format!(
                    "not a symmetric generalized Cartan matrix at ({i}, {j})"
                )));
            }
            if i != j && c < -1 {
                return Err(Error::NotFiniteType(format!("entry ({i}, {j}) is {c}")));
            }
        }
    }
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(r) = queue.pop_front() {
        for i in 0..n {
            let pairing: i64 = (0..n).map(|j| cartan[i][j] * r[j]).sum();
            let mut s = r.clone();
            s[i] -= pairing;
            if s.iter().all(|&x| x >= 0) && s.iter().any(|&x| x > 0) && seen.insert(s.clone()) {
                if seen.len() > ROOT_BOUND {
                    return Err(Error::NotFiniteType(format!(
                        "more than {ROOT_BOUND} positive roots"
                    )));
                }
                queue.push_back(s);
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = seen.into_iter().collect();
    roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    Ok(RootSystem {
        cartan: cartan.to_vec(),
        positive_roots: roots,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RootComparison {
    pub bijection: bool,
    pub bracket_iff_root: bool,
    pub unit_constants: bool,
    pub nonzero_pairs: usize,
    pub passed: bool,
    pub details: Vec<String>,
}

/// Compares a Lie table of a Dynkin path algebra against its root system.
pub fn compare_with_root_system(t: &LieTable, rs: &RootSystem) -> RootComparison {
    let mut details = Vec::new();
    let as_root = |d: &DimVector| -> Vec<i64> { d.entries().iter().map(|&x| x as i64).collect() };
    let dims: BTreeSet<Vec<i64>> = t.dims.iter().map(as_root).collect();
    let roots: BTreeSet<Vec<i64>> = rs.positive_roots.iter().cloned().collect();
    let bijection = dims == roots && dims.len() == t.basis.len();
    if !bijection {
        details.push(format!(
            "{} basis elements against {} positive roots",
            t.basis.len(),
            rs.positive_roots.len()
        ));
    }
    let n = t.basis.len();
    let mut bracket_iff_root = true;
    let mut unit_constants = true;
    let mut nonzero_pairs = 0;
    for i in 0..n {
        for j in i + 1..n {
            let sum = as_root(&(&t.dims[i] + &t.dims[j]));
            let b = t.bracket(i, j);
            if b.is_some() {
                nonzero_pairs += 1;
            }
            if b.is_some() != roots.contains(&sum) {
                bracket_iff_root = false;
                details.push(format!("[{}, {}] = {:?} but sum is a root: {}", t.basis[i], t.basis[j], b, roots.contains(&sum)));
            }
            if let Some((_, k)) = b {
                if k.abs() != 1 {
                    unit_constants = false;
                    details.push(format!("[{}, {}] has constant {k}", t.basis[i], t.basis[j]));
                }
            }
        }
    }
    RootComparison {
        bijection,
        bracket_iff_root,
        unit_constants,
        nonzero_pairs,
        passed: bijection && bracket_iff_root && unit_constants,
        details,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_algebra;
    use crate::knit::KnitLimits;

    const A2: &str = r#"{"vertices": ["1","2"], "arrows": [{"id":"a","from":"1","to":"2"}]}"#;

    fn a2() -> HallAlgebra {
        let fam = ArFamily::new(Arc::new(parse_algebra(A2).unwrap()), KnitLimits::default());
        HallAlgebra::new(Arc::new(fam), HallConfig::default()).unwrap()
    }

    fn mv(pairs: &[(&str, u32)]) -> MultiplicityVector {
        MultiplicityVector::from_pairs(pairs.iter().map(|&(k, v)| (k, v)))
    }

    #[test]
    fn a2_classes() {
        let alg = a2();
        let ar = alg.ar();
        assert_eq!(enumerate_module_classes(ar, &DimVector::new(vec![1, 1])).len(), 2);
        assert_eq!(
            enumerate_module_classes(ar, &DimVector::new(vec![0, 0])),
            vec![MultiplicityVector::zero()]
        );
        assert_eq!(
            enumerate_module_classes(ar, &DimVector::new(vec![2, 0])),
            vec![mv(&[("1-0", 2)])]
        );
    }

    #[test]
    fn a2_products() {
        let alg = a2();
        let (s1, s2, p1) = (mv(&[("1-0", 1)]), mv(&[("0-1", 1)]), mv(&[("1-1", 1)]));
        let split = mv(&[("1-0", 1), ("0-1", 1)]);
        let u = alg.hall_product(&s1, &s2).unwrap();
        assert_eq!((u.coefficient(&p1), u.coefficient(&split), u.len()), (1, 1, 2));
        let u = alg.hall_product(&s2, &s1).unwrap();
        assert_eq!((u.coefficient(&split), u.len()), (1, 1));
        assert_eq!(alg.hall_product(&MultiplicityVector::zero(), &p1).unwrap(), GradedVector::basis(p1.clone()));
        let v = alg.riedtmann_product(&s2, &s1).unwrap();
        assert_eq!((v.coefficient(&p1), v.coefficient(&split)), (1, 1));
        let v = alg.riedtmann_product(&s1, &s2).unwrap();
        assert_eq!((v.coefficient(&split), v.len()), (1, 1));
        assert_eq!(alg.riedtmann_product(&MultiplicityVector::zero(), &s1).unwrap(), GradedVector::basis(s1));
    }

    #[test]
    fn a2_tables() {
        let alg = a2();
        let k = alg.lie_table_k().unwrap();
        let l = alg.lie_table_l().unwrap();
        let (s1, s2, p1) = (k.index_of("1-0").unwrap(), k.index_of("0-1").unwrap(), k.index_of("1-1").unwrap());
        assert_eq!(k.bracket(s1, s2), Some((p1, 1)));
        assert_eq!(l.bracket(s2, s1), Some((p1, 1)));
        assert_eq!(l.bracket(s1, s2), Some((p1, -1)));
        assert_eq!(k.bracket(s1, s1), None);
        assert_eq!(k.brackets.len(), 1);
        assert!(k.direction_violations.is_empty(), "{:?}", k.direction_violations);
        assert!(verify_isomorphism(&k, &l).passed);
        let j = jacobi_check(&k);
        assert_eq!((j.triples_checked, j.passed), (1, true));
        let rs = positive_roots(&alg.ar().spec().quiver().cartan_matrix()).unwrap();
        let cmp = compare_with_root_system(&k, &rs);
        assert!(cmp.passed, "{:?}", cmp.details);
        assert_eq!(cmp.nonzero_pairs, 1);
    }

    #[test]
    fn root_counts() {
        let a = |n: usize| -> Vec<Vec<i64>> {
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { 2 } else if i.abs_diff(j) == 1 { -1 } else { 0 }).collect())
                .collect()
        };
        assert_eq!(positive_roots(&a(2)).unwrap().positive_roots.len(), 3);
        assert_eq!(positive_roots(&a(3)).unwrap().positive_roots.len(), 6);
        let mut d4 = vec![vec![0i64; 4]; 4];
        for (i, row) in d4.iter_mut().enumerate() {
            row[i] = 2;
        }
        for i in 0..3 {
            d4[i][3] = -1;
            d4[3][i] = -1;
        }
        assert_eq!(positive_roots(&d4).unwrap().positive_roots.len(), 12);
        let kronecker = vec![vec![2, -2], vec![-2, 2]];
        assert!(matches!(positive_roots(&kronecker), Err(Error::NotFiniteType(_))));
        let mut affine_a = a(3);
        affine_a[0][2] = -1;
        affine_a[2][0] = -1;
        assert!(matches!(positive_roots(&affine_a), Err(Error::NotFiniteType(_))));
    }

    #[test]
    fn zero_table_is_trivially_fine() {
        let t = LieTable {
            kind: LieKind::Ringel,
            basis: vec!["1".into(), "2".into(), "3".into()],
            dims: vec![DimVector::new(vec![1]); 3],
            brackets: BTreeMap::new(),
            direction_violations: Vec::new(),
        };
        assert!(jacobi_check(&t).passed);
        assert!(verify_isomorphism(&t, &t).passed);
    }

    #[test]
    fn a2_associativity() {
        let r = a2().associativity_check(3).unwrap();
        assert!(r.passed, "{:?}", r.failures);
        assert!(r.triples_checked > 0);
    }
}
