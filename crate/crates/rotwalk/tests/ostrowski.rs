use proptest::prelude::*;
use rotwalk::exact_reals::{convergent_table, parse_angle, AngleDescriptor};
use rotwalk::oracle::oracle_return_structure;
use rotwalk::ostrowski::*;

fn angles() -> Vec<AngleDescriptor> {
    vec![
        parse_angle("periodic:1").unwrap(),
        parse_angle("periodic:2").unwrap(),
        parse_angle("periodic:3").unwrap(),
        parse_angle("periodic:1,2").unwrap(),
        parse_angle("periodic:2,1,1,3").unwrap(),
        AngleDescriptor::em2().truncate(40).unwrap(),
    ]
}

/// All admissible digit vectors with value below `limit`, by exhaustive enumeration.
fn enumerate_reps(num: &Numeration, limit: u128) -> Vec<(u128, Vec<u64>)> {
    let mut top = 0;
    while num.q(top + 1) < limit {
        top += 1;
    }
    let mut out = Vec::new();
    let mut digits = vec![0u64; top + 1];
    fn rec(num: &Numeration, h: usize, digits: &mut Vec<u64>, out: &mut Vec<(u128, Vec<u64>)>, limit: u128) {
        if h == digits.len() {
            let v: u128 = digits.iter().enumerate().map(|(i, &c)| c as u128 * num.q(i)).sum();
            if v < limit && num.validate(&OstrowskiRep::new(digits.clone())).is_ok() {
                out.push((v, digits.clone()));
            }
            return;
        }
        for c in 0..=num.a(h + 1) {
            digits[h] = c;
            rec(num, h + 1, digits, out, limit);
        }
        digits[h] = 0;
    }
    rec(num, 0, &mut digits, &mut out, limit);
    out
}

#[test]
fn representation_examples() {
    let s = AngleDescriptor::sqrt2m1();
    let t = convergent_table(&s, 10).unwrap();
    let rep = to_ostrowski(7, &t).unwrap();
    assert_eq!(rep.coeffs(), &[0, 1, 1]);
    assert_eq!(rep.order(), 2);
    assert_eq!(to_ostrowski(0, &t).unwrap().order(), 0);
    assert!(to_ostrowski(0, &t).unwrap().is_empty());
    assert_eq!(from_ostrowski(&OstrowskiRep::new(vec![0, 0, 1]), &t).unwrap(), 5);
    assert_eq!(from_ostrowski(&OstrowskiRep::new(vec![0, 1, 1]), &t).unwrap(), 7);
    assert_eq!(from_ostrowski(&OstrowskiRep::default(), &t).unwrap(), 0);
    assert!(from_ostrowski(&OstrowskiRep::new(vec![1, 2]), &t).is_err());
    assert!(from_ostrowski(&OstrowskiRep::new(vec![0, 3]), &t).is_err());
    let g = convergent_table(&AngleDescriptor::golden(), 10).unwrap();
    let rep = to_ostrowski(4, &g).unwrap();
    assert_eq!(rep.coeffs(), &[0, 1, 0, 1]);
    assert_eq!(rep.order(), 3);
    let shallow = convergent_table(&s, 2).unwrap();
    assert!(matches!(to_ostrowski(5, &shallow), Err(rotwalk::Error::TableTooShallow(_))));
}

#[test]
fn unique_admissible_representation() {
    for angle in angles() {
        let num = Numeration::new(&angle, 2000).unwrap();
        let reps = enumerate_reps(&num, 400);
        let mut seen = std::collections::HashMap::new();
        for (v, d) in reps {
            assert!(seen.insert(v, d.clone()).is_none(), "{angle}: {v} represented twice");
            assert_eq!(num.to_ostrowski(v).unwrap(), OstrowskiRep::new(d));
        }
        assert_eq!(seen.len(), 400, "{angle}: every r < 400 represented");
    }
}

#[test]
fn peak_and_rk_characterization_matches_scan() {
    for angle in angles() {
        let num = Numeration::new(&angle, 20_000).unwrap();
        let (t, r) = oracle_return_structure(12_000, &angle).unwrap();
        let a1 = angle.quotient(1).unwrap();
        let mut is_r = std::collections::HashSet::new();
        let mut peak = std::collections::HashSet::new();
        for (k, &rk) in r.iter().enumerate() {
            is_r.insert(rk);
            if t[k] == a1 + 1 && k > 0 {
                peak.insert(rk);
            }
        }
        for x in 1..=10_000u128 {
            assert_eq!(num.is_return_peak(x).unwrap(), peak.contains(&x), "{angle}: peak {x}");
            assert_eq!(num.is_rk(x).unwrap(), is_r.contains(&x), "{angle}: r_k {x}");
        }
    }
}

#[test]
fn return_structure_values() {
    let s = AngleDescriptor::sqrt2m1();
    assert_eq!(t_value(0, &s).unwrap(), 3);
    assert_eq!(r_value(0, &s).unwrap(), 0);
    assert_eq!(r_value(1, &s).unwrap(), 3);
    assert_eq!(r_value(2, &s).unwrap(), 5);
    assert_eq!(t_value(2, &s).unwrap(), 3);
    let rs = ReturnStructure::new(&s).unwrap();
    let ts: Vec<u64> = (0..5).map(|k| rs.t_value(k).unwrap()).collect();
    assert_eq!(ts, vec![3, 2, 3, 2, 3]);
    for angle in angles() {
        let rs = ReturnStructure::new(&angle).unwrap();
        let (t, r) = oracle_return_structure(3000, &angle).unwrap();
        let a1 = angle.quotient(1).unwrap();
        assert_eq!(rs.t_value(0).unwrap(), a1 + 1);
        for k in 0..3000 {
            assert_eq!(rs.t_value(k).unwrap(), t[k]);
            assert_eq!(rs.r_value(k).unwrap(), r[k]);
            assert!(t[k] == a1 || t[k] == a1 + 1);
        }
    }
}

#[test]
fn peak_list_for_sqrt2m1() {
    let s = AngleDescriptor::sqrt2m1();
    let rs = ReturnStructure::new(&s).unwrap();
    assert_eq!(&rs.peaks_upto(17).unwrap(), &[0, 5, 10, 17]);
}

#[test]
fn index_maps_match_positions() {
    for angle in angles() {
        let num = Numeration::new(&angle, 1 << 40).unwrap();
        let rs = ReturnStructure::new(&angle).unwrap();
        let a1 = angle.quotient(1).unwrap();
        let mut j = 0u128;
        let mut k = 0usize;
        while j < 500 {
            if rs.t_value(k).unwrap() == a1 + 1 {
                let r = rs.r_value(k).unwrap();
                let rep = num.to_ostrowski(r).unwrap();
                let m = num.index_maps(&rep).unwrap();
                assert_eq!(m.j, j, "{angle}: r = {r}");
                assert_eq!(m.k, k as u128, "{angle}: r = {r}");
                assert_eq!(m.k_minus_j, m.k - m.j, "{angle}: r = {r}");
                j += 1;
            }
            k += 1;
        }
    }
    let s = Numeration::new(&AngleDescriptor::sqrt2m1(), 1000).unwrap();
    let m = s.index_maps(&s.to_ostrowski(5).unwrap()).unwrap();
    assert_eq!((m.k, m.j, m.k_minus_j), (2, 1, 1));
    let m = s.index_maps(&s.to_ostrowski(17).unwrap()).unwrap();
    assert_eq!((m.k, m.j), (7, 3));
    let m = s.index_maps(&OstrowskiRep::default()).unwrap();
    assert_eq!((m.k, m.j, m.k_minus_j), (0, 0, 0));
    assert!(s.index_maps(&s.to_ostrowski(7).unwrap()).is_err());
}

#[test]
fn decompose_examples_and_invariants() {
    let s = AngleDescriptor::sqrt2m1();
    let d = decompose(7, &s).unwrap();
    assert_eq!((d.j, d.r1, d.r0), (1, 1, 0));
    let d = decompose(0, &s).unwrap();
    assert_eq!((d.j, d.r1, d.r0), (0, 0, 0));
    let d = decompose(4, &s).unwrap();
    assert_eq!((d.j, d.r1, d.r0), (0, 2, 0));
    for angle in angles() {
        let num = Numeration::new(&angle, 20_000).unwrap();
        let rs = ReturnStructure::new(&angle).unwrap();
        let peaks = rs.peaks_upto(12_000).unwrap();
        let (q1, a2) = (num.q(1), num.a(2) as u128);
        for r in 0..=10_000u128 {
            let d = num.decompose(r).unwrap();
            let pos = peaks.partition_point(|&p| p <= r) - 1;
            assert_eq!(d.peak, peaks[pos]);
            assert_eq!(d.j, pos as u128);
            assert_eq!(d.peak + d.r1 * q1 + d.r0, r);
            assert!(d.r0 < q1 && d.r1 <= a2 + 1);
            assert!(r - d.peak < peaks[pos + 1] - d.peak);
            if d.j > 0 {
                let (n_r, n_p) = (num.order(r).unwrap(), num.order(d.peak).unwrap());
                assert!(n_r == n_p || n_r == n_p + 1, "{angle}: {r}");
            }
        }
    }
}

#[test]
fn order_can_exceed_peak_order() {
    // 3 = q_3 for the golden angle sits above the peak q_2 = 2 with R_1 = 1
    let num = Numeration::new(&AngleDescriptor::golden(), 100).unwrap();
    let d = num.decompose(3).unwrap();
    assert_eq!((d.peak, d.j, d.r1, d.r0), (2, 1, 1, 0));
    assert_eq!(num.order(3).unwrap(), 3);
    assert_eq!(num.order(2).unwrap(), 2);
}

#[test]
fn gaps_and_special_subsequence() {
    let s = AngleDescriptor::sqrt2m1();
    assert_eq!(gap(1, &s).unwrap(), 5);
    assert_eq!(gap(3, &s).unwrap(), 7);
    assert_eq!(special_subsequence(0, &s).unwrap(), 3);
    for angle in angles() {
        let num = Numeration::new(&angle, 100).unwrap();
        let (q1, q2) = (num.q(1), num.q(2));
        let peaks = ReturnStructure::new(&angle).unwrap().peaks_upto(20_000).unwrap();
        let mut long = Vec::new();
        for j in 1..peaks.len() {
            let g = gap(j as u128, &angle).unwrap();
            assert_eq!(g, peaks[j] - peaks[j - 1], "{angle}: g_{j}");
            assert!(g == q2 || g == q2 + q1);
            if g == q2 + q1 {
                long.push(j as u128);
            }
        }
        assert_eq!(special_subsequence(0, &angle).unwrap(), angle.quotient(3).unwrap() as u128 + 1);
        for (h, &j) in long.iter().enumerate().take(30) {
            assert_eq!(special_subsequence(h, &angle).unwrap(), j, "{angle}: j_{h}");
        }
    }
}

#[test]
fn long_gap_frequency() {
    for angle in angles().into_iter().take(5) {
        let m = 2000usize;
        let num = Numeration::new(&angle, 100).unwrap();
        let q2 = num.q(2);
        let long = (1..=m).filter(|&j| gap(j as u128, &angle).unwrap() != q2).count();
        // f_2/f_1 = α_2 for the long gaps
        let a2 = angle.gauss_shift(2).unwrap().approx_f64();
        let freq = long as f64 / m as f64;
        assert!((freq - a2).abs() <= 10.0 / m as f64, "{angle}: {freq} vs {a2}");
    }
}

proptest! {
    #[test]
    fn round_trip(r in 0u128..1_000_000, which in 0usize..6) {
        let angle = &angles()[which];
        let num = Numeration::new(angle, 1 << 40).unwrap();
        let rep = num.to_ostrowski(r).unwrap();
        prop_assert_eq!(num.from_ostrowski(&rep).unwrap(), r);
    }
}
