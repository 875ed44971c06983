mod common;

use num_bigint::BigUint;
use proptest::prelude::*;
use ringmat_core::group::support_primes;
use ringmat_core::matroid::{size, Subset};
use ringmat_core::{dual, gale_dual, GroundSet, Matroid, ZMatroid};

fn is_rank_function(n: usize, rk: &[u64]) -> bool {
    if rk[0] != 0 {
        return false;
    }
    for a in 0..1u32 << n {
        for b in (0..n).filter(|&b| a >> b & 1 == 0) {
            let ab = (a | 1 << b) as usize;
            if rk[ab] < rk[a as usize] || rk[ab] > rk[a as usize] + 1 {
                return false;
            }
            for c in (b + 1..n).filter(|&c| a >> c & 1 == 0) {
                let (ac, abc) = ((a | 1 << c) as usize, (a | 1 << b | 1 << c) as usize);
                if rk[ab] + rk[ac] < rk[abc] + rk[a as usize] {
                    return false;
                }
            }
        }
    }
    true
}

fn primes_with_generic(m: &ZMatroid) -> Vec<BigUint> {
    ringmat_core::group::check_primes(&support_primes(m.table()))
}

#[test]
fn realizations_are_matroids_and_closed_under_minors() {
    for m in common::matroids(1, 40, 5) {
        assert_eq!(m.is_matroid(), Ok(()), "{m}");
        for label in m.ground().labels() {
            assert_eq!(m.delete(label).unwrap().is_matroid(), Ok(()));
            assert_eq!(m.contract(label).unwrap().is_matroid(), Ok(()));
        }
    }
}

#[test]
fn direct_sums_of_realizations() {
    let ms = common::matroids(2, 16, 3);
    for pair in ms.chunks(2) {
        let right = pair[1].relabel(GroundSet::new((0..pair[1].len()).map(|i| format!("r{i}"))).unwrap()).unwrap();
        let s = pair[0].direct_sum(&right).unwrap();
        let fresh = Matroid::new(s.ground().clone(), s.table().to_vec()).unwrap();
        assert_eq!(fresh.is_matroid(), Ok(()));
    }
}

#[test]
fn generic_and_residue_ranks_are_matroids() {
    for m in common::matroids(3, 40, 5) {
        let n = m.len();
        let g: Vec<u64> = m.generic_rank().into_iter().map(|r| r as u64).collect();
        assert!(is_rank_function(n, &g));
        for p in primes_with_generic(&m) {
            let corank = m.residue_matroid(&p).unwrap();
            let rk: Vec<u64> = corank.iter().map(|c| corank[0] - c).collect();
            assert!(is_rank_function(n, &rk), "residue matroid at {p}");
        }
    }
}

#[test]
fn duality_invariants() {
    for r in common::sample(4, 40, 5) {
        let m = ZMatroid::from_realization(&r).unwrap();
        let d = dual(&m).unwrap();
        let full = m.full();
        let base = m.get(0).rank();
        for a in 0..=full {
            let da = d.get(full & !a);
            assert_eq!(da.torsion(), m.get(a).torsion());
            assert_eq!(da.rank() + base, m.get(a).rank() + size(a));
        }
        assert_eq!(dual(&d).unwrap(), m.essentialize().0);
        assert_eq!(ZMatroid::from_realization(&gale_dual(&r)).unwrap(), d);
        for p in primes_with_generic(&m) {
            let left = ringmat_core::dual_dvr(&m.localize_matroid(&p).unwrap()).unwrap();
            assert_eq!(left, d.localize_matroid(&p).unwrap());
        }
    }
}

#[test]
fn tutte_deletion_contraction_and_products() {
    use ringmat_core::tutte::tutte_class;
    for m in common::matroids(5, 30, 5) {
        let (m, _) = m.essentialize();
        let t = tutte_class(&m).unwrap();
        let (loops, coloops) = m.generic_loops_coloops();
        for (i, label) in m.ground().labels().iter().enumerate() {
            if (loops | coloops) >> i & 1 == 1 {
                continue;
            }
            let del = tutte_class(&m.delete(label).unwrap()).unwrap();
            let con = tutte_class(&m.contract(label).unwrap()).unwrap();
            assert_eq!(t, &del + &con, "element {label}");
        }
        let d = dual(&m).unwrap();
        for (mono, _) in t.terms() {
            let witnesses: Vec<Subset> = (0..=m.full())
                .filter(|&a| m.get(a).rank() == mono.cork && d.get(m.full() & !a).rank() == mono.nullity)
                .filter(|&a| ringmat_core::TorsionTag::of(m.get(a)) == mono.tag)
                .collect();
            assert!(!witnesses.is_empty());
            for a in witnesses {
                assert_eq!(ringmat_core::TorsionTag::of(d.get(m.full() & !a)), mono.tag);
            }
        }
    }
    let ms = common::matroids(6, 10, 3);
    for pair in ms.chunks(2) {
        let (a, _) = pair[0].essentialize();
        let (b, _) = pair[1].essentialize();
        let b = b.relabel(GroundSet::new((0..b.len()).map(|i| format!("s{i}"))).unwrap()).unwrap();
        let sum = a.direct_sum(&b).unwrap();
        assert_eq!(
            tutte_class(&sum).unwrap(),
            &tutte_class(&a).unwrap() * &tutte_class(&b).unwrap()
        );
    }
}

#[test]
fn classical_specialization_is_generic_tutte() {
    use ringmat_core::tutte::{classical_tutte, tutte_class, tutte_of_rank};
    for m in common::matroids(7, 30, 5) {
        let (m, _) = m.essentialize();
        let t = tutte_class(&m).unwrap();
        assert_eq!(classical_tutte(&t), tutte_of_rank(m.len(), &m.generic_rank()));
    }
}

#[test]
fn quasi_arithmetic_axioms_hold() {
    use ringmat_core::{check_axioms, to_qam};
    for m in common::matroids(8, 40, 5) {
        assert_eq!(check_axioms(&to_qam(&m)), Ok(()));
    }
}

#[test]
fn tropical_checks_hold() {
    use ringmat_core::tropical::{heights, single_exchange_check, three_term_check, valuated_matroid_check};
    use ringmat_core::ExtNat;
    for m in common::matroids(9, 25, 5) {
        for p in support_primes(m.table()) {
            let local = m.localize_matroid(&p).unwrap();
            for n in (1..=6).map(ExtNat::Fin).chain([ExtNat::Inf]) {
                let h = heights(&local, n).unwrap();
                assert!(three_term_check(&h).ok(), "three-term at p={p}, n={n:?}");
                assert!(single_exchange_check(&h).ok(), "exchange at p={p}, n={n:?}");
            }
            let (e, _) = local.essentialize();
            assert!(valuated_matroid_check(&e).unwrap().ok());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_realization_is_matroid(r in common::realization_strategy(4)) {
        let m = ZMatroid::from_realization(&r).unwrap();
        let fresh = Matroid::new(m.ground().clone(), m.table().to_vec()).unwrap();
        prop_assert_eq!(fresh.is_matroid(), Ok(()));
        let d = dual(&fresh).unwrap();
        prop_assert_eq!(d.is_matroid(), Ok(()));
    }

    #[test]
    fn essential_part_ignores_extra_free_summands(
        (n, r, k) in (1usize..=3, 0usize..=3, 1usize..=4),
        extra in 1usize..=2,
        entries in proptest::collection::vec(-6i64..=6, 3 * 7),
    ) {
        let r = r.min(n);
        let cols: Vec<Vec<i64>> = entries.chunks(3).map(|c| c[..n].to_vec()).collect();
        let padded: Vec<Vec<i64>> = cols.iter().map(|c| [&c[..], &vec![0; extra][..]].concat()).collect();
        let build = |rows: usize, cols: &[Vec<i64>]| {
            let rel = ringmat_core::IntMatrix::from_columns(rows, &cols[..r]).unwrap();
            let gens = ringmat_core::IntMatrix::from_columns(rows, &cols[3..3 + k]).unwrap();
            ZMatroid::from_realization(&ringmat_core::Realization::new(rel, gens).unwrap()).unwrap()
        };
        let (e, split) = build(n, &cols).essentialize();
        let (f, split_padded) = build(n + extra, &padded).essentialize();
        prop_assert_eq!(split_padded, split + extra);
        prop_assert_eq!(e.get(e.full()).rank(), 0);
        prop_assert_eq!(e.essentialize().0, e.clone());
        prop_assert_eq!(f, e);
    }

    #[test]
    fn permuting_ground_commutes_with_realization(r in common::realization_strategy(4), seed in any::<u64>()) {
        let k = r.len();
        let mut order: Vec<usize> = (0..k).collect();
        let mut s = seed;
        for i in (1..k).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let m = ZMatroid::from_realization(&r).unwrap();
        let lhs = ZMatroid::from_realization(&r.permute(&order)).unwrap();
        let rhs = m.permute(&order).unwrap();
        prop_assert_eq!(lhs.table(), rhs.table());
    }
}
