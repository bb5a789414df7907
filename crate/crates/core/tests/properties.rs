use proptest::prelude::*;
use strata_core::bracket::bracket_of;
use strata_core::combinatorics::Partition;
use strata_core::exact_arith::{rat, PiValue};
use strata_core::volumes::{volume_value, Stratum};
use strata_core::wick::{multi_bracket, LabeledSlotMap};

fn pi_value() -> impl Strategy<Value = PiValue> {
    prop::collection::vec((-20i64..20, 1i64..12, -3i64..4), 0..4).prop_map(|terms| {
        terms.into_iter().fold(PiValue::zero(), |acc, (n, d, e)| {
            &acc + &PiValue::monomial(rat(n, d), 2 * e)
        })
    })
}

fn partition(max_part: u32, max_len: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1..=max_part, 1..=max_len).prop_map(|v| Partition::new(v).unwrap())
}

fn total_weight(args: &[Partition]) -> u32 {
    args.iter().map(Partition::weight).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pi_values_form_a_ring(a in pi_value(), b in pi_value(), c in pi_value()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &PiValue::one(), a.clone());
    }

    #[test]
    fn decimal_rendering_tracks_float(n in -500i64..500, d in 1i64..500, e in -2i64..4) {
        let v = PiValue::monomial(rat(n, d), 2 * e);
        let parsed: f64 = v.to_decimal(20).parse().unwrap();
        prop_assert!((parsed - v.to_f64()).abs() <= 1e-9 * v.to_f64().abs().max(1.0));
    }

    #[test]
    fn bracket_ignores_order(mut m in prop::collection::vec(1u32..6, 1..5), seed in any::<u64>()) {
        let before = bracket_of(&m).unwrap();
        let len = m.len();
        m.rotate_left((seed as usize) % len);
        m.swap(0, (seed as usize / 7) % len);
        prop_assert_eq!(bracket_of(&m).unwrap(), before);
    }

    #[test]
    fn multi_bracket_ignores_argument_order(
        args in prop::collection::vec(partition(4, 2), 1..4)
            .prop_filter("size", |a| total_weight(a) <= 14),
    ) {
        let forward = multi_bracket(&args).unwrap();
        let mut rev = args.clone();
        rev.reverse();
        prop_assert_eq!(multi_bracket(&rev).unwrap(), forward);
    }

    #[test]
    fn multi_bracket_is_graded(
        args in prop::collection::vec(partition(5, 3), 1..5)
            .prop_filter("S + T <= 16", |a| total_weight(a) <= 16),
    ) {
        let v = multi_bracket(&args).unwrap();
        let degree = LabeledSlotMap::new(&args).unwrap().degree();
        prop_assert!(v.is_homogeneous_of(degree), "{:?}: {}", args, v);
    }

    #[test]
    fn stratum_text_round_trips(mut d in prop::collection::vec(0u32..6, 0..6)) {
        if d.iter().sum::<u32>() % 2 == 1 {
            d.push(1);
        }
        let s = Stratum::new(d).unwrap();
        let back: Stratum = s.to_string().parse().unwrap();
        prop_assert_eq!(back, s.clone());
        prop_assert_eq!(s.dim_complex(), 2 * s.genus() + s.zero_count() as u32 - 1);
    }

    #[test]
    fn partition_invariants(p in partition(9, 8)) {
        prop_assert!(p.parts().windows(2).all(|w| w[0] >= w[1]));
        let total: usize = p.multiplicities().values().sum();
        prop_assert_eq!(total, p.len());
        prop_assert_eq!(p.weight(), p.size() + p.len() as u32);
    }
}

#[test]
fn single_part_arguments_merge() {
    for a in 1..=5u32 {
        for b in 1..=5 {
            for c in 1..=5 {
                let args: Vec<Partition> = [a, b, c]
                    .iter()
                    .map(|&x| Partition::new(vec![x]).unwrap())
                    .collect();
                assert_eq!(
                    multi_bracket(&args).unwrap(),
                    bracket_of(&[a, b, c]).unwrap()
                );
            }
        }
    }
}

#[test]
fn single_part_arguments_merge_up_to_eight() {
    for total in 1..=8u32 {
        for p in strata_core::combinatorics::partitions_of_size(total) {
            let args: Vec<Partition> = p
                .parts()
                .iter()
                .map(|&x| Partition::new(vec![x]).unwrap())
                .collect();
            assert_eq!(
                multi_bracket(&args).unwrap(),
                bracket_of(p.parts()).unwrap(),
                "{p}"
            );
        }
    }
}

#[test]
fn volume_ignores_degree_order() {
    let a = volume_value(&Stratum::new(vec![1, 3, 2]).unwrap()).unwrap();
    let b = volume_value(&Stratum::new(vec![3, 2, 1]).unwrap()).unwrap();
    assert_eq!(a, b);
}
