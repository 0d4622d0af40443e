use proptest::prelude::*;
use rotwalk::beta_expansion::*;
use rotwalk::exact_reals::{parse_angle, AngleDescriptor, Field};

fn angles() -> Vec<AngleDescriptor> {
    vec![
        parse_angle("periodic:1").unwrap(),
        parse_angle("periodic:2").unwrap(),
        parse_angle("periodic:3").unwrap(),
        parse_angle("periodic:1,2").unwrap(),
        AngleDescriptor::em2().truncate(40).unwrap(),
    ]
}

#[test]
fn rational_offsets_satisfy_digit_constraints() {
    for angle in angles() {
        let field = Field::new(&angle);
        for i in 1..200 {
            let beta = field.ratio(i, 200);
            let e = expand(&beta, &angle, 12).unwrap();
            e.verify_digits().unwrap();
            assert_eq!(*e.lattice(), LatticeStatus::NotInLattice);
            // β = Σ_{k<m} b_k f_k + β_m
            let partial = from_digits(&field, e.coeffs()).unwrap();
            assert!((&partial + e.remainder(12)).exact_eq(&beta));
        }
    }
}

#[test]
fn lattice_offsets_terminate() {
    for angle in angles() {
        let field = Field::new(&angle);
        for k in 1..20i64 {
            let beta = field.alpha().mul_int(k).frac().unwrap();
            let e = expand(&beta, &angle, 16).unwrap();
            e.verify_digits().unwrap();
            assert!(matches!(e.lattice(), LatticeStatus::InLattice { .. }));
            let end = e.support_end().expect("finite support");
            assert!(e.coeffs()[end + 1..].iter().all(|&b| b == 0));
        }
    }
}

#[test]
fn renormalized_offsets_lie_in_unit_interval() {
    for angle in angles() {
        let field = Field::new(&angle);
        for i in 1..40 {
            let beta = field.ratio(i, 41);
            let e = expand(&beta, &angle, 8).unwrap();
            for m in 1..8 {
                let (p, b) = renorm_offsets(&e, m).unwrap();
                let unit = |x: &rotwalk::exact_reals::Elem| !x.is_negative().unwrap() && x.lt(&field.int(1)).unwrap();
                // the scheme uses β^m when b_m = 0 and β̄^m otherwise
                assert!(!p.value.is_negative().unwrap());
                assert_eq!(unit(&p.value), e.coeff(m) == 0, "{angle}: m = {m}");
                assert_eq!(unit(&b.value), e.coeff(m) > 0, "{angle}: m = {m}");
            }
        }
    }
}

#[test]
fn offsets_outside_unit_interval_are_rejected() {
    let s = AngleDescriptor::sqrt2m1();
    let f = Field::new(&s);
    assert!(expand(&f.int(0), &s, 4).is_err());
    assert!(expand(&f.int(1), &s, 4).is_err());
    assert!(expand(&f.ratio(3, 2), &s, 4).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn random_rational_offsets(num in 1i64..100_000, which in 0usize..5) {
        let angle = &angles()[which];
        let field = Field::new(angle);
        let beta = field.ratio(num, 100_000);
        let e = expand(&beta, angle, 10).unwrap();
        prop_assert!(e.verify_digits().is_ok());
    }
}
