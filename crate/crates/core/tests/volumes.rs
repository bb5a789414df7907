use strata_core::bracket::PartMultiset;
use strata_core::combinatorics::partitions_of_size;
use strata_core::exact_arith::{factorial, rat, PiValue};
use strata_core::volumes::{
    c_value, prediction, principal_volume, volume, volume_value, Stratum, VolumeOptions,
};
use strata_core::Error;

fn st(s: &str) -> Stratum {
    s.parse().unwrap()
}

fn vol(s: &str) -> PiValue {
    volume_value(&st(s)).unwrap()
}

fn all_strata(max_size: u32) -> Vec<Stratum> {
    (1..=max_size / 2)
        .flat_map(|k| partitions_of_size(2 * k))
        .map(|p| Stratum::new(p.parts().to_vec()).unwrap())
        .collect()
}

#[test]
fn c_value_examples() {
    let c = |v: &[u32]| c_value(&PartMultiset::new(v.to_vec()).unwrap()).unwrap();
    assert_eq!(c(&[3]), PiValue::monomial(rat(1, 240), 4));
    assert_eq!(c(&[2, 2]), PiValue::monomial(rat(1, 270), 4));
    assert_eq!(c(&[1]), PiValue::monomial(rat(1, 6), 2));
}

#[test]
fn low_genus_values() {
    assert_eq!(vol("2"), PiValue::monomial(rat(1, 120), 4));
    assert_eq!(vol("1,1"), PiValue::monomial(rat(1, 135), 4));
    assert_eq!(vol("0,1,1"), vol("1,1"));
    assert_eq!(vol("H()"), PiValue::monomial(rat(1, 3), 2));
    assert_eq!(vol("H(0)"), vol("H()"));
}

#[test]
fn genus_three_values() {
    let cases = [
        ("4", rat(61, 108864)),
        ("3,1", rat(16, 42525)),
        ("2,2", rat(17, 50400)),
        ("2,1,1", rat(1, 3780)),
        ("1,1,1,1", rat(1, 4860)),
    ];
    for (s, q) in cases {
        assert_eq!(vol(s), PiValue::monomial(q, 6), "H({s})");
    }
}

#[test]
fn principal_closed_form_agrees() {
    for g in 2..=4 {
        let general = volume_value(&Stratum::principal(g).unwrap()).unwrap();
        assert_eq!(principal_volume(g).unwrap(), general, "g = {g}");
    }
    assert_eq!(
        principal_volume(2).unwrap(),
        PiValue::monomial(rat(1, 135), 4)
    );
    assert!(principal_volume(1).is_err());
}

#[test]
fn volumes_are_positive_monomials_of_degree_2g() {
    for s in all_strata(6) {
        let v = volume_value(&s).unwrap();
        let (q, e) = v.as_monomial().unwrap_or_else(|| panic!("{s}: {v}"));
        assert_eq!(e, 2 * s.genus() as i64, "{s}");
        assert!(q > &rat(0, 1), "{s}");
    }
}

#[test]
fn order_and_marked_points_do_not_matter() {
    assert_eq!(vol("1,2,1"), vol("2,1,1"));
    assert_eq!(vol("0,3,0,1"), vol("3,1"));
    assert_eq!(vol("1,3"), vol("3,1"));
}

#[test]
fn main_term_tripwire() {
    // ⟨𝓕_{m_1}|…|𝓕_{m_n}⟩ should sit within 2^60 (|m|-1)! of 2|m|!
    for s in all_strata(6) {
        let m: Vec<u32> = s.stripped().iter().map(|d| d + 1).collect();
        let total: u32 = m.iter().sum();
        let prod: u64 = m.iter().map(|&x| x as u64).product();
        let c = c_value(&PartMultiset::new(m.clone()).unwrap()).unwrap();
        let bracket =
            c.to_f64() * factorial(total).to_string().parse::<f64>().unwrap() * prod as f64;
        let main = 2.0 * factorial(total).to_string().parse::<f64>().unwrap();
        let bound = 2f64.powi(60) * factorial(total - 1).to_string().parse::<f64>().unwrap();
        assert!((bracket - main).abs() <= bound, "{s}");
    }
}

#[test]
fn predictions() {
    assert_eq!(prediction(&st("2")), rat(4, 3));
    assert_eq!(prediction(&st("1,1")), rat(1, 1));
    for g in 2..=6 {
        assert_eq!(
            prediction(&Stratum::minimal(g).unwrap()),
            rat(4, 2 * g as i64 - 1)
        );
    }
}

#[test]
fn error_ordering_in_genus_three() {
    let eps = |s: &str| {
        volume(&st(s), VolumeOptions::default())
            .unwrap()
            .relative_error_f64()
    };
    assert!(eps("1,1,1,1").abs() < eps("4").abs());
    for s in all_strata(4).iter().filter(|s| s.genus() == 3) {
        let e = volume(s, VolumeOptions::default())
            .unwrap()
            .relative_error_f64()
            .abs();
        assert!(eps("1,1,1,1").abs() <= e && e <= eps("4").abs(), "{s}");
    }
}

#[test]
fn minimal_stratum_ratio_increases() {
    let ratios: Vec<f64> = (2..=4)
        .map(|g| {
            let s = Stratum::minimal(g).unwrap();
            volume_value(&s).unwrap().to_f64() * (2 * g - 1) as f64 / 4.0
        })
        .collect();
    assert!((ratios[0] - 0.6089).abs() < 1e-4);
    assert!(ratios.iter().all(|r| 0.55 < *r && *r < 1.0));
    assert!(ratios.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn guard_and_parity_errors() {
    let tight = VolumeOptions { max_weight: 6 };
    assert!(matches!(
        volume(&st("1,1,1,1"), tight),
        Err(Error::Infeasible {
            weight: 8,
            limit: 6
        })
    ));
    assert!(matches!(
        "3".parse::<Stratum>(),
        Err(Error::InvalidStratum(_))
    ));
    assert!(matches!(
        "1,x".parse::<Stratum>(),
        Err(Error::InvalidStratum(_))
    ));
}
