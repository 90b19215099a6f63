use std::collections::BTreeSet;
use std::sync::Arc;

use densprob_core::entropy::zeroed_entries;
use densprob_core::qmsets::{
    conversion_matrix, count_bases, enumerate_bases, ket_table, ket_to_density, MAX_ENUM_DIM,
};
use densprob_core::{
    expectation, gf2, logical_entropy_density, logical_entropy_partition, luders, measure,
    DensityMatrix, Event, Gf2Vector, OutcomeSpace, Partition, RandomVariable,
};
use num_bigint::BigUint;
use proptest::prelude::*;

/// A space of 1..=max outcomes with strictly positive probabilities.
fn space(max: usize) -> impl Strategy<Value = Arc<OutcomeSpace>> {
    prop::collection::vec(0.05f64..1.0, 1..=max).prop_map(|w| {
        let total: f64 = w.iter().sum();
        let probs = w.iter().map(|x| x / total).collect();
        OutcomeSpace::new((0..w.len()).map(|i| format!("u{i}")), probs).unwrap()
    })
}

/// Space plus an event mask, a partition labelling and a variable.
fn scenario(max: usize) -> impl Strategy<Value = (Arc<OutcomeSpace>, u64, u64, Vec<usize>, Vec<i8>)> {
    space(max).prop_flat_map(|u| {
        let n = u.len();
        let full = u.full_mask();
        (
            Just(u),
            1..=full,
            1..=full,
            prop::collection::vec(0..n, n),
            prop::collection::vec(-2i8..3, n),
        )
    })
}

fn partition_from_labels(u: &Arc<OutcomeSpace>, labels: &[usize]) -> Partition {
    let mut masks = vec![0u64; u.len()];
    for (i, &b) in labels.iter().enumerate() {
        masks[b] |= 1 << i;
    }
    let blocks: Vec<Event> =
        masks.into_iter().filter(|&m| m != 0).map(|m| Event::from_mask(u, m).unwrap()).collect();
    Partition::new(u, &blocks).unwrap()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn event_probability_matches_loop((u, s, t, _, _) in scenario(8)) {
        let s = Event::from_mask(&u, s).unwrap();
        let t = Event::from_mask(&u, t).unwrap();
        let brute: f64 = (0..u.len()).filter(|&i| s.mask() >> i & 1 == 1).map(|i| u.prob(i)).sum();
        prop_assert!((s.probability() - brute).abs() < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&s.probability()));
        let meet = u.mask_probability(s.mask() & t.mask());
        prop_assert!((t.conditional_probability(&s).unwrap() * s.probability() - meet).abs() < 1e-12);
    }

    #[test]
    fn partitions_sum_and_restrict((u, s, _, labels, _) in scenario(8)) {
        let pi = partition_from_labels(&u, &labels);
        let total: f64 = pi.blocks().map(|b| b.probability()).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        let s = Event::from_mask(&u, s).unwrap();
        let r = pi.restrict(&s).unwrap();
        let mut union = 0u64;
        for &b in r.block_masks() {
            prop_assert_eq!(union & b, 0);
            prop_assert!(b != 0);
            union |= b;
        }
        prop_assert_eq!(union, s.mask());
    }

    #[test]
    fn delta_decomposes_into_singletons((u, s, _, _, _) in scenario(8)) {
        let s = Event::from_mask(&u, s).unwrap();
        let delta = DensityMatrix::delta(&s).unwrap();
        let weights: Vec<f64> = s.indices().map(|i| u.prob(i) / s.probability()).collect();
        let parts: Vec<DensityMatrix> = s.indices().map(|i| DensityMatrix::delta(&u.singleton(i)).unwrap()).collect();
        let total: f64 = weights.iter().sum();
        let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let mixed = DensityMatrix::mix(&weights, &parts).unwrap();
        prop_assert!(max_diff(delta.entries(), mixed.entries()) < 1e-12);
        prop_assert_eq!(DensityMatrix::of_partition(&Partition::discrete_on(&s)).entries().len(), delta.entries().len());
        prop_assert!(max_diff(DensityMatrix::of_partition(&Partition::discrete_on(&s)).entries(), delta.entries()) < 1e-12);
    }

    #[test]
    fn purity_and_trace_of_square((u, s, _, labels, _) in scenario(8)) {
        let s = Event::from_mask(&u, s).unwrap();
        let sigma = DensityMatrix::sigma(&s).unwrap();
        let delta = DensityMatrix::delta(&s).unwrap();
        prop_assert!(sigma.is_pure());
        prop_assert_eq!(delta.is_pure(), s.len() == 1);
        let rho = DensityMatrix::of_partition(&partition_from_labels(&u, &labels));
        for m in [&sigma, &delta, &rho] {
            let sq = m.square();
            let n = m.dim();
            let tr: f64 = (0..n).map(|i| sq[i * n + i]).sum();
            prop_assert!((tr - m.trace_of_square()).abs() < 1e-9);
        }
    }

    #[test]
    fn expectation_same_for_delta_and_sigma((u, s, _, _, values) in scenario(8)) {
        let s = Event::from_mask(&u, s).unwrap();
        let f = RandomVariable::new(&u, values.iter().map(|&v| v as f64).collect()).unwrap();
        let a = expectation(&DensityMatrix::delta(&s).unwrap(), &f).unwrap();
        let b = expectation(&DensityMatrix::sigma(&s).unwrap(), &f).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn measurement_outcomes_rebuild_luders((u, s, t, _, values) in scenario(8)) {
        let f = RandomVariable::new(&u, values.iter().map(|&v| v as f64).collect()).unwrap();
        // a mixed starting state
        let a = DensityMatrix::sigma(&Event::from_mask(&u, s).unwrap()).unwrap();
        let b = DensityMatrix::sigma(&Event::from_mask(&u, t).unwrap()).unwrap();
        let rho = DensityMatrix::mix(&[0.3, 0.7], &[a, b]).unwrap();
        let outcomes = measure(&rho, &f).unwrap();
        let total: f64 = outcomes.iter().map(|o| o.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        let weights: Vec<f64> = outcomes.iter().map(|o| o.probability / total).collect();
        let posts: Vec<DensityMatrix> = outcomes.iter().map(|o| o.post_state.clone()).collect();
        let rebuilt = DensityMatrix::mix(&weights, &posts).unwrap();
        let direct = luders(&rho, &f.partition()).unwrap();
        prop_assert!(max_diff(rebuilt.entries(), direct.entries()) < 1e-12);
        for o in &outcomes {
            let again = measure(&o.post_state, &f).unwrap();
            prop_assert_eq!(again.len(), 1);
            prop_assert_eq!(again[0].value, o.value);
            prop_assert!((again[0].probability - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn luders_of_superposition_is_restricted_partition_matrix((u, s, _, labels, _) in scenario(8)) {
        let s = Event::from_mask(&u, s).unwrap();
        let pi = partition_from_labels(&u, &labels);
        let after = luders(&DensityMatrix::sigma(&s).unwrap(), &pi).unwrap();
        let restricted = DensityMatrix::of_partition(&pi.restrict(&s).unwrap());
        prop_assert!(max_diff(after.entries(), restricted.entries()) < 1e-12);
    }

    #[test]
    fn pair_draw_semantics((u, _, _, labels, _) in scenario(6)) {
        let pi = partition_from_labels(&u, &labels);
        let n = u.len();
        let mut distinct = 0.0;
        for a in 0..n {
            for b in 0..n {
                if labels[a] != labels[b] {
                    distinct += u.prob(a) * u.prob(b);
                }
            }
        }
        prop_assert!((logical_entropy_partition(&pi) - distinct).abs() < 1e-9);
        prop_assert!((logical_entropy_density(&DensityMatrix::of_partition(&pi)) - distinct).abs() < 1e-9);
    }

    #[test]
    fn luders_never_lowers_entropy((u, s, t, labels, _) in scenario(8)) {
        let a = DensityMatrix::sigma(&Event::from_mask(&u, s).unwrap()).unwrap();
        let b = DensityMatrix::delta(&Event::from_mask(&u, t).unwrap()).unwrap();
        let pi = partition_from_labels(&u, &labels);
        for rho in [a.clone(), DensityMatrix::mix(&[0.5, 0.5], &[a, b]).unwrap()] {
            let after = luders(&rho, &pi).unwrap();
            prop_assert!(logical_entropy_density(&after) >= logical_entropy_density(&rho) - 1e-12);
            let located: f64 = zeroed_entries(&rho, &pi).iter().map(|z| z.2 * z.2).sum();
            let created = logical_entropy_density(&after) - logical_entropy_density(&rho);
            prop_assert!((located - created).abs() < 1e-9);
        }
    }

    #[test]
    fn ket_table_cells_are_related_by_conversion(n in 1..=3usize, picks in prop::collection::vec(any::<prop::sample::Index>(), 1..4)) {
        let all = enumerate_bases(n).unwrap();
        let bases: Vec<_> = picks.iter().map(|i| i.get(&all).clone()).collect();
        let table = ket_table(&bases).unwrap();
        prop_assert_eq!(table.rows.len(), (1 << n) - 1);
        for row in &table.rows {
            for (i, a) in bases.iter().enumerate() {
                for (j, b) in bases.iter().enumerate() {
                    let c = conversion_matrix(a, b).unwrap();
                    prop_assert_eq!(c.mul_vec(row.coords[i]).unwrap(), row.coords[j]);
                }
            }
        }
    }

    #[test]
    fn ket_densities_are_pure(n in 1..=4usize, bits in 1u32..16) {
        let bits = bits & ((1 << n) - 1);
        prop_assume!(bits != 0);
        let basis = &enumerate_bases(n).unwrap()[0];
        let rho = ket_to_density(basis, Gf2Vector::new(bits, n).unwrap()).unwrap();
        prop_assert!(rho.validate(1e-9).is_ok());
        prop_assert!(rho.check_purity().unwrap());
    }
}

/// Ordered bases by brute force over all n-tuples, against Gauss's formula
/// and the unordered enumeration.
#[test]
fn enumeration_matches_brute_force_and_formula() {
    for n in 1..=MAX_ENUM_DIM {
        let nonzero: Vec<Gf2Vector> = (1u32..1 << n).map(|b| Gf2Vector::new(b, n).unwrap()).collect();
        let mut ordered = 0u64;
        let mut unordered = BTreeSet::new();
        let mut tuple = vec![0usize; n];
        loop {
            let vs: Vec<Gf2Vector> = tuple.iter().map(|&i| nonzero[i]).collect();
            if gf2::rank(&vs) == n {
                ordered += 1;
                let mut key: Vec<u32> = vs.iter().map(|v| v.bits()).collect();
                key.sort();
                unordered.insert(key);
            }
            // next tuple
            let mut pos = 0;
            while pos < n {
                tuple[pos] += 1;
                if tuple[pos] < nonzero.len() {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
        assert_eq!(BigUint::from(ordered), count_bases(n, true).unwrap(), "ordered n={n}");
        let listed = enumerate_bases(n).unwrap();
        assert_eq!(BigUint::from(listed.len()), count_bases(n, false).unwrap(), "unordered n={n}");
        let listed_keys: BTreeSet<Vec<u32>> =
            listed.iter().map(|b| b.vectors().iter().map(|v| v.bits()).collect()).collect();
        assert_eq!(listed_keys, unordered);
    }
}

#[test]
fn enumeration_is_sorted_and_deterministic() {
    let a = enumerate_bases(4).unwrap();
    let b = enumerate_bases(4).unwrap();
    assert_eq!(a, b);
    let keys: Vec<Vec<u32>> = a.iter().map(|x| x.vectors().iter().map(|v| v.bits()).collect()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}
