//! Hall numbers `F_{N2,N1}^M` (submodules `U ≅ N1` of `M` with
//! `M/U ≅ N2`) over prime fields, by Grassmannian enumeration or by
//! counting monomorphisms, and exact interpolation of Hall polynomials.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraSpec;
use crate::error::{Error, Result};
use crate::ffla::{enumerate_subspaces, gaussian_binomial, primes, FMatrix, DEFAULT_ENUMERATION_CAP};
use crate::knit::{knit, ArQuiver, ArStore, KnitLimits};
use crate::reps::{
    aut_order, direct_sum, hom_dim, hom_profile, hom_space, odometer, sub_quotient, DimVector,
    Morphism, MultiplicityVector, Representation, SubspaceTuple,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Hom enumeration when `p^{dim Hom(N1, M)}` is at most `hom_threshold`.
    Auto,
    Grass,
    Hom,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallConfig {
    pub strategy: Strategy,
    pub excluded_primes: Vec<u64>,
    pub hom_threshold: u128,
    pub enumeration_cap: u128,
    pub parallel: bool,
}

impl Default for HallConfig {
    fn default() -> Self {
        HallConfig {
            strategy: Strategy::Auto,
            excluded_primes: Vec::new(),
            hom_threshold: 1_000_000,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            parallel: true,
        }
    }
}

/// AR quivers of one algebra over every prime, knitted on demand.
pub struct ArFamily {
    spec: Arc<AlgebraSpec>,
    limits: KnitLimits,
    quivers: Mutex<BTreeMap<u64, Arc<ArQuiver>>>,
    store: Option<Arc<dyn ArStore>>,
}

impl ArFamily {
    pub fn new(spec: Arc<AlgebraSpec>, limits: KnitLimits) -> Self {
        ArFamily {
            spec,
            limits,
            quivers: Mutex::new(BTreeMap::new()),
            store: None,
        }
    }

    pub fn with_store(mut self, store: Arc<dyn ArStore>) -> Self {
        self.store = Some(store);
        self
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    pub fn limits(&self) -> KnitLimits {
        self.limits
    }

    pub fn get(&self, p: u64) -> Result<Arc<ArQuiver>> {
        if let Some(ar) = self.quivers.lock().expect("AR cache poisoned").get(&p) {
            return Ok(ar.clone());
        }
        let cached = self
            .store
            .as_ref()
            .and_then(|s| s.load(&self.spec, p))
            .and_then(|data| ArQuiver::from_data(&self.spec, &data).ok());
        let ar = match cached {
            Some(ar) => ar,
            None => {
                let ar = knit(&self.spec, p, self.limits)?;
                if let Some(s) = &self.store {
                    s.save(&self.spec, p, &ar.to_data());
                }
                ar
            }
        };
        let mut guard = self.quivers.lock().expect("AR cache poisoned");
        Ok(guard.entry(p).or_insert_with(|| Arc::new(ar)).clone())
    }
}

/// `M(B, a) = ⊕ X^{a(x)}` over the field of `ar`.
pub fn module(ar: &ArQuiver, a: &MultiplicityVector) -> Result<Representation> {
    let mut parts = Vec::new();
    for (id, k) in a.iter() {
        let v = ar
            .vertex(id)
            .ok_or_else(|| Error::InvalidInput(format!("unknown AR vertex {id}")))?;
        parts.extend(std::iter::repeat_n(&v.rep, k as usize));
    }
    Ok(direct_sum(ar.spec(), ar.field(), &parts))
}

/// The dimension vector of `M(B, a)`, read off the vertex ids.
pub fn class_dim(spec: &AlgebraSpec, a: &MultiplicityVector) -> Result<DimVector> {
    let n = spec.vertex_count();
    let mut d = DimVector::zero(n);
    for (id, k) in a.iter() {
        let v = DimVector::parse_id(id)
            .filter(|v| v.len() == n)
            .ok_or_else(|| Error::InvalidInput(format!("malformed AR vertex id {id}")))?;
        d = &d + &v.scaled(k as usize);
    }
    Ok(d)
}

fn dims_add_up(n1: &Representation, n2: &Representation, m: &Representation) -> bool {
    n1.dim().len() == m.dim().len() && &(n1.dim() + n2.dim()) == m.dim()
}

fn image_lands_in(m_a: &FMatrix, u_s: &FMatrix, u_t: &FMatrix) -> bool {
    if u_s.rows() == 0 {
        return true;
    }
    let images = m_a.mul(&u_s.transpose()).transpose();
    let stacked = FMatrix::vstack(m_a.field(), u_t.cols(), &[u_t, &images]);
    stacked.rank() == u_t.rows()
}

/// Counts arrow-closed subspace tuples `U` of `m` with `U ≅ n1` and
/// `m/U ≅ n2`, comparing Hom profiles against the AR quiver.
pub fn hall_number_grass(
    ar: &ArQuiver,
    n1: &Representation,
    n2: &Representation,
    m: &Representation,
    cap: u128,
) -> Result<u64> {
    if !dims_add_up(n1, n2, m) {
        return Ok(0);
    }
    let n = m.dim().len();
    let p = m.field().p();
    let total = (0..n).fold(1u128, |acc, x| {
        acc.saturating_mul(gaussian_binomial(m.dim()[x], n1.dim()[x], p))
    });
    if total > cap {
        return Err(Error::ResourceBound(format!(
            "{total} subspace tuples exceed the cap of {cap}"
        )));
    }
    let choices: Vec<Vec<FMatrix>> = (0..n)
        .map(|x| enumerate_subspaces(m.dim()[x], n1.dim()[x], m.field(), cap).map(Iterator::collect))
        .collect::<Result<_>>()?;
    let sub_profile = hom_profile(n1, ar);
    let quot_profile = hom_profile(n2, ar);
    let mut search = GrassSearch {
        ar,
        m,
        choices: &choices,
        sub_profile,
        quot_profile,
        chosen: Vec::with_capacity(n),
        count: 0,
    };
    search.extend()?;
    Ok(search.count)
}

struct GrassSearch<'a> {
    ar: &'a ArQuiver,
    m: &'a Representation,
    choices: &'a [Vec<FMatrix>],
    sub_profile: Vec<usize>,
    quot_profile: Vec<usize>,
    chosen: Vec<usize>,
    count: u64,
}

impl GrassSearch<'_> {
    /// Arrows whose later endpoint is the most recently chosen vertex map
    /// the chosen subspaces into each other.
    fn closed_at(&self, y: usize) -> bool {
        let arrows = self.m.spec().quiver().arrows();
        arrows.iter().enumerate().all(|(ai, a)| {
            let (s, t) = (a.source, a.target);
            s.max(t) != y
                || image_lands_in(
                    self.m.map(ai),
                    &self.choices[s][self.chosen[s]],
                    &self.choices[t][self.chosen[t]],
                )
        })
    }

    fn extend(&mut self) -> Result<()> {
        let y = self.chosen.len();
        if y == self.choices.len() {
            let tuple = SubspaceTuple::from_echelon(
                self.chosen
                    .iter()
                    .enumerate()
                    .map(|(x, &k)| self.choices[x][k].clone())
                    .collect(),
            );
            let sq = sub_quotient(self.m, &tuple)?;
            if hom_profile(&sq.sub, self.ar) == self.sub_profile
                && hom_profile(&sq.quot, self.ar) == self.quot_profile
            {
                self.count += 1;
            }
            return Ok(());
        }
        for k in 0..self.choices[y].len() {
            self.chosen.push(k);
            if self.closed_at(y) {
                self.extend()?;
            }
            self.chosen.pop();
        }
        Ok(())
    }
}

/// Counts monomorphisms `n1 -> m` with cokernel `≅ n2` divided by
/// `|Aut(n1)|`, or dually epimorphisms `m -> n2` with kernel `≅ n1` divided
/// by `|Aut(n2)|`, whichever Hom space is smaller.
pub fn hall_number_hom(
    ar: &ArQuiver,
    n1: &Representation,
    n2: &Representation,
    m: &Representation,
    bound: u128,
) -> Result<u64> {
    if !dims_add_up(n1, n2, m) {
        return Ok(0);
    }
    let into = hom_space(n1, m);
    let onto = hom_space(m, n2);
    let mono = into.len() <= onto.len();
    let (basis, zero, fixed, other) = if mono {
        (into, Morphism::zero(n1, m), n1, n2)
    } else {
        (onto, Morphism::zero(m, n2), n2, n1)
    };
    let p = m.field().p();
    let size = (p as u128).checked_pow(basis.len() as u32).unwrap_or(u128::MAX);
    if size > bound {
        return Err(Error::ResourceBound(format!(
            "|Hom| = {p}^{} exceeds {bound}",
            basis.len()
        )));
    }
    let profile = hom_profile(other, ar);
    let mut count = 0u64;
    let mut test = |f: &Morphism| -> Result<()> {
        let complement = if mono {
            if !f.is_injective() {
                return Ok(());
            }
            sub_quotient(m, &SubspaceTuple::image(f))?.quot
        } else {
            if !f.is_surjective() {
                return Ok(());
            }
            sub_quotient(m, &SubspaceTuple::kernel(f))?.sub
        };
        if hom_profile(&complement, ar) == profile {
            count += 1;
        }
        Ok(())
    };
    if basis.is_empty() {
        test(&zero)?;
    } else {
        let mut coeffs = vec![0u64; basis.len()];
        loop {
            test(&Morphism::combination(&basis, &coeffs))?;
            if !odometer(&mut coeffs, p) {
                break;
            }
        }
    }
    if count == 0 {
        return Ok(0);
    }
    let aut = aut_order(fixed, bound)? as u64;
    if !count.is_multiple_of(aut) {
        return Err(Error::NonIntegralOrbitCount { count, aut });
    }
    Ok(count / aut)
}

/// Left exactness of `Hom(X, -)` and `Hom(-, X)` on `0 -> n1 -> m -> n2 -> 0`
/// bounds the profiles of `m`; a violation means no such sequence exists.
fn hom_obstruction(ar: &ArQuiver, n1: &Representation, n2: &Representation, m: &Representation) -> bool {
    ar.vertices().iter().any(|v| {
        let x = &v.rep;
        hom_dim(x, m) > hom_dim(x, n1) + hom_dim(x, n2)
            || hom_dim(m, x) > hom_dim(n1, x) + hom_dim(n2, x)
    })
}

/// `F_{c,a}^b` over the field of `ar` with the configured strategy.
pub fn hall_number(
    ar: &ArQuiver,
    a: &MultiplicityVector,
    c: &MultiplicityVector,
    b: &MultiplicityVector,
    config: &HallConfig,
) -> Result<u64> {
    let (n1, n2, m) = (module(ar, a)?, module(ar, c)?, module(ar, b)?);
    if !dims_add_up(&n1, &n2, &m) || hom_obstruction(ar, &n1, &n2, &m) {
        return Ok(0);
    }
    let use_hom = match config.strategy {
        Strategy::Hom => true,
        Strategy::Grass => false,
        Strategy::Auto => {
            let h = hom_dim(&n1, &m) as u32;
            (ar.field().p() as u128)
                .checked_pow(h)
                .is_some_and(|s| s <= config.hom_threshold)
        }
    };
    if use_hom {
        hall_number_hom(ar, &n1, &n2, &m, config.enumeration_cap)
    } else {
        hall_number_grass(ar, &n1, &n2, &m, config.enumeration_cap)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub a: MultiplicityVector,
    pub c: MultiplicityVector,
    pub b: MultiplicityVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Interpolation nodes followed by the validation prime.
    pub primes: Vec<u64>,
    pub degree_bound: usize,
    pub validation_prime: Option<u64>,
    pub counts: Vec<(u64, u64)>,
    pub excluded_primes: Vec<u64>,
    pub retried: bool,
}

/// `φ_{ca}^b` with integer coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallPolynomial {
    pub coefficients: Vec<i64>,
    pub triple: Triple,
    pub provenance: Provenance,
}

impl HallPolynomial {
    pub fn evaluate(&self, t: i64) -> i64 {
        self.coefficients.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// Coefficients (constant first) of the unique polynomial of degree
/// `< points.len()` through the given points.
pub fn interpolate(points: &[(i64, i64)]) -> Vec<BigRational> {
    let n = points.len();
    let mut out = vec![BigRational::zero(); n];
    for (i, &(xi, yi)) in points.iter().enumerate() {
        // basis polynomial Π_{j≠i} (T - x_j) / (x_i - x_j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, coeff) in basis.iter().enumerate() {
                next[k + 1] += coeff;
                next[k] -= coeff * BigRational::from_integer(BigInt::from(xj));
            }
            basis = next;
            denom *= BigRational::from_integer(BigInt::from(xi - xj));
        }
        let scale = BigRational::from_integer(BigInt::from(yi)) / denom;
        for (k, coeff) in basis.into_iter().enumerate() {
            out[k] += coeff * &scale;
        }
    }
    out
}

fn integral_coefficients(coeffs: &[BigRational], triple: &Triple) -> Result<Vec<i64>> {
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        if !c.is_integer() {
            return Err(Error::NonIntegralCoefficients(format!(
                "coefficient {c} for {}, {}, {}",
                triple.a, triple.c, triple.b
            )));
        }
        out.push(
            c.to_integer()
                .to_i64()
                .ok_or_else(|| Error::ResourceBound(format!("coefficient {c} overflows i64")))?,
        );
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    Ok(out)
}

/// `deg φ ≤ min(Σ e_x (d_x - e_x), dim Hom(A, B) - dim End(A))`: the
/// first counts points of a product of Grassmannians, the second bounds
/// monomorphisms `A -> B` modulo `Aut(A)`.
pub fn degree_bound(ar: &ArQuiver, a: &MultiplicityVector, b: &MultiplicityVector) -> Result<usize> {
    let spec = ar.spec();
    let e = class_dim(spec, a)?;
    let d = class_dim(spec, b)?;
    let grass: usize = (0..e.len()).map(|x| e[x] * d[x].saturating_sub(e[x])).sum();
    let h = ar.hom_matrix();
    let pairing = |u: &MultiplicityVector, v: &MultiplicityVector| -> Result<i64> {
        let mut s = 0i64;
        for (i, k) in u.iter() {
            for (j, l) in v.iter() {
                let (Some(i), Some(j)) = (ar.index_of(i), ar.index_of(j)) else {
                    return Err(Error::InvalidInput("unknown AR vertex".into()));
                };
                s += (k * l) as i64 * h[i][j] as i64;
            }
        }
        Ok(s)
    };
    let hom = (pairing(a, b)? - pairing(a, a)?).max(0) as usize;
    Ok(grass.min(hom))
}

fn check_ids(ar: &ArQuiver, t: &Triple) -> Result<()> {
    for v in [&t.a, &t.c, &t.b] {
        for (id, _) in v.iter() {
            if ar.index_of(id).is_none() {
                return Err(Error::InvalidInput(format!("unknown AR vertex {id}")));
            }
        }
    }
    Ok(())
}

/// Interpolates `φ_{ca}^b` from counts at the first `D + 2` usable primes,
/// holding the last one out for validation.
pub fn hall_polynomial(
    family: &ArFamily,
    a: &MultiplicityVector,
    c: &MultiplicityVector,
    b: &MultiplicityVector,
    config: &HallConfig,
) -> Result<HallPolynomial> {
    let triple = Triple {
        a: a.clone(),
        c: c.clone(),
        b: b.clone(),
    };
    let spec = family.spec();
    let (da, dc, db) = (class_dim(spec, a)?, class_dim(spec, c)?, class_dim(spec, b)?);
    let first = primes()
        .find(|p| !config.excluded_primes.contains(p))
        .expect("infinitely many primes");
    let ar = family.get(first)?;
    check_ids(&ar, &triple)?;
    let mut excluded = config.excluded_primes.clone();
    if &da + &dc != db {
        return Ok(HallPolynomial {
            coefficients: Vec::new(),
            triple,
            provenance: Provenance {
                primes: Vec::new(),
                degree_bound: 0,
                validation_prime: None,
                counts: Vec::new(),
                excluded_primes: excluded,
                retried: false,
            },
        });
    }
    let degree = degree_bound(&ar, a, b)?;
    let mut retried = false;
    loop {
        let nodes: Vec<u64> = primes().filter(|p| !excluded.contains(p)).take(degree + 2).collect();
        let count_at = |&p: &u64| -> Result<(u64, u64)> {
            let ar = family.get(p)?;
            Ok((p, hall_number(&ar, a, c, b, config)?))
        };
        let counts: Vec<(u64, u64)> = if config.parallel {
            nodes.par_iter().map(count_at).collect::<Result<_>>()?
        } else {
            nodes.iter().map(count_at).collect::<Result<_>>()?
        };
        let points: Vec<(i64, i64)> = counts[..=degree]
            .iter()
            .map(|&(p, n)| (p as i64, n as i64))
            .collect();
        let coefficients = integral_coefficients(&interpolate(&points), &triple)?;
        let (vp, vn) = counts[degree + 1];
        let poly = HallPolynomial {
            coefficients,
            triple: triple.clone(),
            provenance: Provenance {
                primes: nodes.clone(),
                degree_bound: degree,
                validation_prime: Some(vp),
                counts: counts.clone(),
                excluded_primes: excluded.clone(),
                retried,
            },
        };
        if poly.evaluate(vp as i64) == vn as i64 {
            return Ok(poly);
        }
        if retried {
            return Err(Error::InconsistentCounts(format!(
                "{}, {}, {}: interpolation predicts {} at p = {vp}, counted {vn}",
                triple.a,
                triple.c,
                triple.b,
                poly.evaluate(vp as i64)
            )));
        }
        retried = true;
        excluded.push(nodes[0]);
    }
}

/// `χ(E(M(a), M(c); M(b))) = φ_{ca}^b(1)`.
pub fn euler_characteristic(
    family: &ArFamily,
    a: &MultiplicityVector,
    c: &MultiplicityVector,
    b: &MultiplicityVector,
    config: &HallConfig,
) -> Result<i64> {
    Ok(hall_polynomial(family, a, c, b, config)?.evaluate(1))
}
