use std::cmp::Ordering;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rotwalk::discrepancy::*;
use rotwalk::exact_reals::{parse_angle, AngleDescriptor, Elem, Field};
use rotwalk::oracle::{oracle_drel_series, oracle_dstar};

fn angles() -> Vec<AngleDescriptor> {
    vec![
        AngleDescriptor::golden(),
        AngleDescriptor::sqrt2m1(),
        AngleDescriptor::sqrt13m3over2(),
        parse_angle("periodic:1,2").unwrap(),
        parse_angle("periodic:2,1,1,3").unwrap(),
        AngleDescriptor::em2().truncate(40).unwrap(),
    ]
}

fn betas(field: &std::sync::Arc<Field>) -> Vec<Elem> {
    let mut out: Vec<Elem> = (1..16).map(|i| field.ratio(i, 16)).collect();
    out.push(field.ratio(2, 5));
    for k in 1..=4 {
        out.push(field.alpha().mul_int(k).frac().unwrap());
        out.push((&field.alpha().mul_int(k) + &field.ratio(1, 3)).frac().unwrap());
    }
    out
}

#[test]
fn d_rel_matches_oracle_and_decomposes() {
    for angle in angles() {
        let field = Field::new(&angle);
        let ev = Evaluator::new(&angle).unwrap();
        for beta in betas(&field) {
            let series = oracle_drel_series(400, &angle, &beta, false).unwrap();
            let comp = oracle_drel_series(400, &angle, &beta, true).unwrap();
            for n in 1..=400u128 {
                let d = ev.d_rel(n, &beta).unwrap();
                assert!(d.value.exact_eq(&series[n as usize]), "{angle}: n = {n}, β = {beta}");
                let sum = &(&d.c_part + &d.s_part) + &d.b_part;
                assert!(sum.exact_eq(&d.value));
                let dc = ev.d_rel_complemented(n, &beta).unwrap();
                assert!(dc.value.exact_eq(&comp[n as usize]), "{angle}: complemented n = {n}, β = {beta}");
            }
        }
    }
}

#[test]
fn bounds_hold_on_every_query_and_step() {
    for angle in angles() {
        let field = Field::new(&angle);
        let ev = Evaluator::new(&angle).unwrap();
        for beta in betas(&field) {
            for n in 1..=400u128 {
                let d = ev.d_rel(n, &beta).unwrap();
                let b = disc_bounds(n, &angle).unwrap();
                assert!(d.check_bounds(&b).unwrap(), "{angle}: n = {n}, β = {beta}");
                for (i, step) in d.path.iter().enumerate() {
                    let (lo, hi) = step.s_bounds();
                    assert!(!step.s_value.lt(&lo).unwrap() && !hi.lt(&step.s_value).unwrap(), "{angle}: n = {n}, step {i}");
                    if step.next_horizon.is_some() {
                        assert_eq!(step.c_value.sign().unwrap(), Ordering::Greater);
                        assert!(step.c_value.lt(&step.gamma).unwrap());
                        let a1 = field.int(step.a1 as i64);
                        assert!(step.coef.abs().unwrap().cmp_exact(&a1).unwrap() != Ordering::Greater);
                    }
                }
            }
        }
    }
}

#[test]
fn scheme_transitions() {
    for angle in angles() {
        let field = Field::new(&angle);
        let ev = Evaluator::new(&angle).unwrap();
        for beta in betas(&field) {
            for n in (1..=2000u128).step_by(13) {
                let d = ev.d_rel(n, &beta).unwrap();
                for pair in d.path.windows(2) {
                    let (s, t) = (&pair[0], &pair[1]);
                    assert_eq!(t.n, s.next_horizon.unwrap());
                    // a barred pair follows b_1 > 0 and toggles the complement flag
                    assert_eq!(t.kind == PairKind::Barred, s.b1_positive);
                    assert_eq!(t.complemented != s.complemented, s.b1_positive);
                    let step = match (s.b1_positive, s.angle.quotient(2).unwrap()) {
                        (false, _) => 2,
                        (true, 1) => 3,
                        (true, _) => 1,
                    };
                    assert_eq!(t.shift, s.shift + step);
                }
            }
        }
    }
}

#[test]
fn c_constant_matches_closed_form() {
    for angle in angles().into_iter().take(5) {
        let field = Field::new(&angle);
        let ev = Evaluator::new(&angle).unwrap();
        for beta in betas(&field).into_iter().take(6) {
            for n in (2..=600u128).step_by(11) {
                let d = ev.d_rel(n, &beta).unwrap();
                for step in d.path.iter().filter(|s| s.next_horizon.is_some()) {
                    let c = c_constant(step.n, &step.angle).unwrap();
                    let f = c.field().clone();
                    let expect = f.linear(step.c_affine.0.clone(), step.c_affine.1.clone(), BigInt::from(1));
                    assert!(c.exact_eq(&expect), "{angle}: n = {}", step.n);
                }
            }
        }
    }
}

#[test]
fn c_constant_examples() {
    let s = AngleDescriptor::sqrt2m1();
    let f = Field::new(&s);
    // n − 1 = 5 = r_{k_1}: C = Σ (−1)^h c_h f_h = q_2 α − p_2
    let c = c_constant(6, &s).unwrap();
    assert!(c.exact_eq(&f.linear(BigInt::from(-2), BigInt::from(5), BigInt::from(1))));
}

#[test]
fn d_star_examples_and_oracle() {
    let s = AngleDescriptor::sqrt2m1();
    let f = Field::new(&s);
    assert!(d_star_exact(3, &s).unwrap().exact_eq(&f.int(1)));
    for angle in angles() {
        let series = d_star_series(300, &angle).unwrap();
        for n in 1..=300u128 {
            let exact = d_star_exact(n, &angle).unwrap();
            assert!(exact.exact_eq(&series[n as usize - 1]));
            if n <= 120 {
                assert!(exact.exact_eq(&oracle_dstar(n, &angle).unwrap()), "{angle}: n = {n}");
            }
            let bound = pinner_bound(n, &angle).unwrap();
            assert!(!exact.field().rational(bound).lt(&exact).unwrap());
        }
    }
}

#[test]
fn birkhoff_identity() {
    let s = AngleDescriptor::sqrt2m1();
    let f = Field::new(&s);
    let dev = birkhoff_dev(3, &s, &f.int(0), &f.int(0), &f.ratio(1, 2)).unwrap();
    assert!(dev.direct.exact_eq(&f.ratio(1, 2)));
    assert!(dev.via_identity.exact_eq(&dev.direct));
    let dev = birkhoff_dev(17, &s, &f.ratio(1, 3), &f.int(0), &f.int(1)).unwrap();
    assert!(dev.direct.is_zero() && dev.via_identity.is_zero());
    for angle in angles() {
        let field = Field::new(&angle);
        let mut rng = StdRng::seed_from_u64(12345);
        let mut next = |m: u64| rng.gen_range(0..m);
        for _ in 0..100 {
            let n = 1 + next(500) as u128;
            let beta = field.ratio(next(97) as i64, 97);
            let a = next(40) as i64;
            let b = a + 1 + next(40 - a as u64) as i64;
            let (g, d) = (field.ratio(a, 40), field.ratio(b, 40));
            let dev = birkhoff_dev(n, &angle, &beta, &g, &d).unwrap();
            assert!(dev.direct.exact_eq(&dev.via_identity), "{angle}: n = {n}");
        }
    }
}

#[test]
fn witness_construction() {
    let s = AngleDescriptor::sqrt13m3over2();
    let f = Field::new(&s);
    let w = witness_beta(&s, ChainKind::Even, 4).unwrap();
    assert_eq!(w.digits, vec![1, 0, 1, 0]);
    let t = rotwalk::exact_reals::convergent_table(&s, 4).unwrap();
    assert!(w.beta.exact_eq(&(&t.f_elem(&f, 0) + &t.f_elem(&f, 2))));
    assert!(!w.degenerate);
    let g = witness_beta(&AngleDescriptor::golden(), ChainKind::Even, 6).unwrap();
    assert!(g.degenerate);
    for angle in angles() {
        for kind in [ChainKind::Even, ChainKind::Odd] {
            for depth in [1, 2, 5, 12] {
                let w = witness_beta(&angle, kind, depth).unwrap();
                assert!(witness_is_admissible(&w, &angle).unwrap(), "{angle}: {kind:?} {depth}");
            }
        }
    }
}

#[test]
fn asymptotic_ratios_stay_below_quarter() {
    for angle in angles() {
        let rows = asymptotic_report(&angle, &[10, 100, 500, 1000]).unwrap();
        for row in rows {
            assert!(row.normalized > 0.0 && row.normalized <= 0.25, "{angle}: {row:?}");
        }
    }
}

#[test]
fn lattice_offsets_stay_bounded() {
    for angle in angles().into_iter().take(5) {
        let field = Field::new(&angle);
        let beta = (&field.alpha().mul_int(2) + &field.int(0)).frac().unwrap();
        let series = oracle_drel_series(10_000, &angle, &beta, false).unwrap();
        let max = series.iter().map(|x| x.abs().unwrap().to_f64()).fold(0.0, f64::max);
        assert!(max <= 2.0, "{angle}: {max}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn d_rel_random(n in 1u128..5000, num in 1i64..1000, which in 0usize..6) {
        let angle = &angles()[which];
        let field = Field::new(angle);
        let beta = field.ratio(num, 1000);
        let d = d_rel(n, angle, &beta).unwrap();
        let series = oracle_drel_series(n, angle, &beta, false).unwrap();
        prop_assert!(d.value.exact_eq(&series[n as usize]));
    }
}
