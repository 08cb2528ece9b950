use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use hallie_core::algebra::{parse_algebra, AlgebraSpec};
use hallie_core::ffla::FMatrix;
use hallie_core::hall::{hall_number_grass, hall_number_hom, module};
use hallie_core::knit::{knit, ArQuiver, KnitLimits};
use hallie_core::reps::{
    decompose, direct_sum, hom_space, identify, is_brick_like_local, sub_quotient, DimVector,
    Morphism, MultiplicityVector, Representation, SubspaceTuple,
};
use proptest::prelude::*;

const ALGEBRAS: [&str; 5] = ["a2", "a3", "a3_alt", "a3_zero", "d4"];
const PRIMES: [u64; 2] = [2, 3];

fn load(name: &str) -> Arc<AlgebraSpec> {
    let path = format!("{}/../../algebras/{name}.json", env!("CARGO_MANIFEST_DIR"));
    Arc::new(parse_algebra(&std::fs::read_to_string(path).unwrap()).unwrap())
}

/// Knitted once per (algebra, prime) and shared across cases.
fn quivers() -> &'static BTreeMap<(usize, u64), ArQuiver> {
    static CELL: OnceLock<BTreeMap<(usize, u64), ArQuiver>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = BTreeMap::new();
        for (i, name) in ALGEBRAS.iter().enumerate() {
            let spec = load(name);
            for p in PRIMES {
                out.insert((i, p), knit(&spec, p, KnitLimits::default()).unwrap());
            }
        }
        out
    })
}

fn quiver(alg: usize, prime: usize) -> &'static ArQuiver {
    &quivers()[&(alg, PRIMES[prime])]
}

/// Multiplicities drawn from `picks`, each an index into the AR vertices.
fn class(ar: &ArQuiver, picks: &[usize]) -> MultiplicityVector {
    let mut mv = MultiplicityVector::zero();
    for &i in picks {
        mv.add(ar.vertices()[i % ar.len()].id.clone(), 1);
    }
    mv
}

/// Applies `v -> (1 + c e_ij) v` at vertex `x`, which conjugates every arrow
/// map at `x` without changing the isomorphism class.
fn shear(m: &Representation, x: usize, i: usize, j: usize, c: u64) -> Representation {
    let d = m.dim()[x];
    if d < 2 || i % d == j % d {
        return m.clone();
    }
    let field = m.field();
    let (i, j) = (i % d, j % d);
    let mut e = FMatrix::identity(field, d);
    e.set(i, j, c);
    let mut e_inv = FMatrix::identity(field, d);
    e_inv.set(i, j, field.neg(c));
    let maps = m
        .spec()
        .quiver()
        .arrows()
        .iter()
        .zip(m.maps())
        .map(|(a, f)| {
            let mut f = f.clone();
            if a.target == x {
                f = e.mul(&f);
            }
            if a.source == x {
                f = f.mul(&e_inv);
            }
            f
        })
        .collect();
    Representation::new(m.spec().clone(), field, m.dim().clone(), maps).unwrap()
}

fn scrambled(m: &Representation, ops: &[(usize, usize, usize, u64)]) -> Representation {
    let n = m.dim().len();
    ops.iter().fold(m.clone(), |acc, &(x, i, j, c)| {
        shear(&acc, x % n, i, j, 1 + c % (m.field().p() - 1))
    })
}

fn ops() -> impl Strategy<Value = Vec<(usize, usize, usize, u64)>> {
    prop::collection::vec((0..4usize, 0..8usize, 0..8usize, 0..8u64), 0..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn identify_recovers_scrambled_sums(
        alg in 0..ALGEBRAS.len(),
        prime in 0..PRIMES.len(),
        picks in prop::collection::vec(0..64usize, 0..5),
        ops in ops(),
    ) {
        let ar = quiver(alg, prime);
        let mv = class(ar, &picks);
        let m = scrambled(&module(ar, &mv).unwrap(), &ops);
        prop_assert_eq!(identify(&m, ar).unwrap(), mv);
    }

    #[test]
    fn identify_is_additive(
        alg in 0..ALGEBRAS.len(),
        left in prop::collection::vec(0..64usize, 0..3),
        right in prop::collection::vec(0..64usize, 0..3),
    ) {
        let ar = quiver(alg, 0);
        let (a, b) = (class(ar, &left), class(ar, &right));
        let (ma, mb) = (module(ar, &a).unwrap(), module(ar, &b).unwrap());
        let sum = direct_sum(ar.spec(), ar.field(), &[&ma, &mb]);
        let ia = identify(&ma, ar).unwrap();
        let ib = identify(&mb, ar).unwrap();
        prop_assert_eq!(identify(&sum, ar).unwrap(), ia.sum(&ib));
    }

    #[test]
    fn decompose_partitions_into_local_summands(
        alg in 0..ALGEBRAS.len(),
        prime in 0..PRIMES.len(),
        picks in prop::collection::vec(0..64usize, 1..4),
        ops in ops(),
        seed in any::<u64>(),
    ) {
        let ar = quiver(alg, prime);
        let mv = class(ar, &picks);
        let m = scrambled(&module(ar, &mv).unwrap(), &ops);
        let parts = decompose(&m, seed).unwrap();
        let mut dim = DimVector::zero(m.dim().len());
        let mut count = 0;
        for (x, k) in &parts {
            prop_assert!(is_brick_like_local(x));
            dim = &dim + &x.dim().scaled(*k);
            count += k;
        }
        prop_assert_eq!(&dim, m.dim());
        prop_assert_eq!(count as u32, mv.summand_count());
        prop_assert_eq!(parts.len(), mv.iter().count());
    }

    #[test]
    fn sub_and_quotient_dimensions_add_up(
        alg in 0..ALGEBRAS.len(),
        prime in 0..PRIMES.len(),
        src in prop::collection::vec(0..64usize, 1..3),
        dst in prop::collection::vec(0..64usize, 1..4),
        coeffs in prop::collection::vec(0..3u64, 64),
    ) {
        let ar = quiver(alg, prime);
        let x = module(ar, &class(ar, &src)).unwrap();
        let m = module(ar, &class(ar, &dst)).unwrap();
        let basis = hom_space(&x, &m);
        let f = if basis.is_empty() {
            Morphism::zero(&x, &m)
        } else {
            Morphism::combination(&basis, &coeffs[..basis.len().min(coeffs.len())])
        };
        for (target, u) in [(&m, SubspaceTuple::image(&f)), (&x, SubspaceTuple::kernel(&f))] {
            let sq = sub_quotient(target, &u).unwrap();
            prop_assert_eq!(&(sq.sub.dim() + sq.quot.dim()), target.dim());
            prop_assert!(sq.inclusion.is_injective());
            prop_assert!(sq.projection.is_surjective());
            prop_assert!(sq.projection.compose(&sq.inclusion).is_zero());
        }
    }

    #[test]
    fn counting_strategies_agree(
        alg in 0..ALGEBRAS.len(),
        prime in 0..PRIMES.len(),
        src in prop::collection::vec(0..64usize, 1..3),
        mid in prop::collection::vec(0..64usize, 1..4),
        coeffs in prop::collection::vec(0..3u64, 64),
    ) {
        let ar = quiver(alg, prime);
        let x = module(ar, &class(ar, &src)).unwrap();
        let m = module(ar, &class(ar, &mid)).unwrap();
        let basis = hom_space(&x, &m);
        let f = if basis.is_empty() {
            Morphism::zero(&x, &m)
        } else {
            Morphism::combination(&basis, &coeffs[..basis.len().min(coeffs.len())])
        };
        let sq = sub_quotient(&m, &SubspaceTuple::image(&f)).unwrap();
        // the image itself is one of the counted submodules
        let g = hall_number_grass(ar, &sq.sub, &sq.quot, &m, u128::MAX).unwrap();
        let h = hall_number_hom(ar, &sq.sub, &sq.quot, &m, u128::MAX).unwrap();
        prop_assert!(g >= 1);
        prop_assert_eq!(g, h);
        let split = direct_sum(ar.spec(), ar.field(), &[&sq.sub, &sq.quot]);
        let g = hall_number_grass(ar, &sq.sub, &sq.quot, &split, u128::MAX).unwrap();
        let h = hall_number_hom(ar, &sq.sub, &sq.quot, &split, u128::MAX).unwrap();
        prop_assert!(g >= 1);
        prop_assert_eq!(g, h);
    }
}

#[test]
fn hom_matrix_is_upper_unitriangular() {
    for ar in quivers().values() {
        let h = ar.hom_matrix();
        for (i, row) in h.iter().enumerate() {
            assert_eq!(row[i], 1);
            assert!(row[..i].iter().all(|&x| x == 0));
        }
        // arrows point forward in creation order
        for a in ar.arrows() {
            assert!(a.source < a.target);
            assert!(h[a.source][a.target] >= 1);
        }
    }
}

#[test]
fn shear_preserves_relations_and_class() {
    let ar = quiver(4, 1);
    let mv = class(ar, &[0, 5, 11]);
    let m = module(ar, &mv).unwrap();
    let s = scrambled(&m, &[(3, 0, 1, 1), (3, 1, 2, 2), (0, 0, 1, 1)]);
    assert_ne!(s, m);
    assert!(hallie_core::reps::check_relations(&s));
    assert_eq!(identify(&s, ar).unwrap(), mv);
}
