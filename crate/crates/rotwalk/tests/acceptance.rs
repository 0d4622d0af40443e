//! One line per acceptance criterion. Exact criteria use zero tolerance.

use std::collections::HashSet;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use rotwalk::beta_expansion::{expand, LatticeStatus};
use rotwalk::discrepancy::{asymptotic_report, d_star_series, disc_bounds, pinner_bound, Evaluator};
use rotwalk::exact_reals::{parse_angle, AngleDescriptor, Elem, Field};
use rotwalk::oracle::{oracle_drel_series, oracle_return_structure, oracle_walk, oracle_walk_series};
use rotwalk::ostrowski::{gap, special_subsequence, Numeration, ReturnStructure};
use rotwalk::walk_renorm::{linf_bound, maxpari_bounds, walk_general_with, Walker};
use rotwalk::Result;

const WALK_MAX: u128 = 10_000;
const GRID_MAX: u128 = 1_000;
const BETA_COUNT: usize = 50;

fn angles() -> Vec<AngleDescriptor> {
    vec![
        parse_angle("periodic:1").unwrap(),
        parse_angle("periodic:2").unwrap(),
        parse_angle("periodic:3").unwrap(),
        parse_angle("periodic:1,2").unwrap(),
        AngleDescriptor::em2().truncate(40).unwrap(),
    ]
}

/// 40 rationals i/41 and 10 offsets {kα}, {kα + 1/3}.
fn beta_grid(field: &Arc<Field>) -> Vec<Elem> {
    let mut out: Vec<Elem> = (1..=40).map(|i| field.ratio(i, 41)).collect();
    for k in 1..=5 {
        out.push(field.alpha().mul_int(k).frac().unwrap());
        out.push((&field.alpha().mul_int(k) + &field.ratio(1, 3)).frac().unwrap());
    }
    assert_eq!(out.len(), BETA_COUNT);
    out
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

struct Report {
    failed: Vec<usize>,
}

impl Report {
    fn line(&mut self, id: usize, outcome: Result<(bool, String)>) {
        let (ok, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        println!("criterion {id:>2}: {} | {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failed.push(id);
        }
    }
}

fn c1() -> Result<(bool, String)> {
    let mut bad = 0;
    let t = Instant::now();
    for angle in angles() {
        let series = oracle_walk_series(WALK_MAX, &angle, None)?;
        let w = Walker::new(&angle)?;
        for n in 0..=WALK_MAX {
            if w.walk(n)? != series[n as usize] {
                bad += 1;
            }
        }
    }
    let cases = 5 * (WALK_MAX + 1);
    Ok((bad == 0, format!("walk_zero = oracle_walk, n <= {WALK_MAX}, 5 angles: {bad}/{cases} mismatches, tolerance 0, {:.1?}", t.elapsed())))
}

struct GridData {
    angle: AngleDescriptor,
    betas: Vec<Elem>,
    /// walks[b][n] = S_n(α, β_b) for n ≤ GRID_MAX.
    walks: Vec<Vec<i64>>,
    /// drel[b][n] = d_n(α, β_b).
    drel: Vec<Vec<Elem>>,
}

fn grid_data() -> Result<Vec<GridData>> {
    let mut out = Vec::new();
    for angle in angles() {
        let field = Field::new(&angle);
        let betas = beta_grid(&field);
        let mut walks = Vec::new();
        let mut drel = Vec::new();
        for b in &betas {
            walks.push(oracle_walk_series(GRID_MAX, &angle, Some(b))?);
            drel.push(oracle_drel_series(GRID_MAX, &angle, b, false)?);
        }
        out.push(GridData { angle, betas, walks, drel });
    }
    Ok(out)
}

fn c2(data: &[GridData]) -> Result<(bool, String)> {
    let mut bad = 0;
    let mut cases = 0;
    for g in data {
        let w = Walker::new(&g.angle)?;
        for (b, beta) in g.betas.iter().enumerate() {
            for n in 0..=GRID_MAX {
                cases += 1;
                if walk_general_with(&w, n, beta)? != g.walks[b][n as usize] {
                    bad += 1;
                }
            }
        }
    }
    Ok((bad == 0, format!("walk_general = oracle_walk, n <= {GRID_MAX}, {BETA_COUNT} exact offsets per angle: {bad}/{cases} mismatches, tolerance 0")))
}

struct Violations {
    value: usize,
    parts: usize,
    aggregate: usize,
    step: usize,
    step_terminal: usize,
    c_range: usize,
    coef: usize,
    cases: usize,
    steps: usize,
}

fn scan_discrepancy(data: &[GridData]) -> Result<Violations> {
    let mut v = Violations { value: 0, parts: 0, aggregate: 0, step: 0, step_terminal: 0, c_range: 0, coef: 0, cases: 0, steps: 0 };
    for g in data {
        let ev = Evaluator::new(&g.angle)?;
        let field = ev.field().clone();
        let bounds: Vec<_> = (1..=GRID_MAX).map(|n| disc_bounds(n, &g.angle)).collect::<Result<_>>()?;
        for (b, beta) in g.betas.iter().enumerate() {
            for n in 1..=GRID_MAX {
                v.cases += 1;
                let d = ev.d_rel(n, beta)?;
                if !d.value.exact_eq(&g.drel[b][n as usize]) {
                    v.value += 1;
                }
                if !(&(&d.c_part + &d.s_part) + &d.b_part).exact_eq(&d.value) {
                    v.parts += 1;
                }
                if !d.check_bounds(&bounds[n as usize - 1])? {
                    v.aggregate += 1;
                }
                for step in &d.path {
                    v.steps += 1;
                    let (lo, hi) = step.s_bounds();
                    if step.s_value.lt(&lo)? || hi.lt(&step.s_value)? {
                        v.step += 1;
                        if step.next_horizon.is_none() {
                            v.step_terminal += 1;
                        }
                    }
                    if step.next_horizon.is_some() {
                        if step.c_value.is_negative()? || step.c_value.is_zero() || !step.c_value.lt(&step.gamma)? {
                            v.c_range += 1;
                        }
                        if field.int(step.a1 as i64).lt(&step.coef.abs()?)? {
                            v.coef += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(v)
}

fn c3(v: &Violations) -> Result<(bool, String)> {
    Ok((
        v.value == 0 && v.parts == 0,
        format!(
            "d_rel = oracle_drel and value = C+S+B, n <= {GRID_MAX}, {BETA_COUNT} offsets per angle: {}/{} value mismatches, {} decomposition mismatches, tolerance 0",
            v.value, v.cases, v.parts
        ),
    ))
}

fn c4(data: &[GridData]) -> Result<(bool, String)> {
    // worked instance: α = √2 − 1, β = 1/10, n = 3
    let s = AngleDescriptor::sqrt2m1();
    let f = Field::new(&s);
    let beta = f.ratio(1, 10);
    let r2 = oracle_walk(2, &s, Some(&beta))? - oracle_walk(2, &s, None)?;
    let d = |x: &Elem| -> Result<Elem> { Ok(oracle_drel_series(3, &s, x, false)?.pop().unwrap()) };
    let rhs = (&(&d(&f.ratio(2, 5))? - &d(&f.ratio(9, 10))?) - &d(&f.ratio(1, 2))?).mul_int(2);
    let worked = r2 == -2 && rhs.exact_eq(&f.int(-2));

    let mut bad = 0;
    let mut cases = 0;
    for g in data {
        let field = Field::new(&g.angle);
        let half = field.ratio(1, 2);
        let plain = oracle_walk_series(GRID_MAX, &g.angle, None)?;
        let d_half = oracle_drel_series(GRID_MAX, &g.angle, &half, false)?;
        let mut offsets = vec![field.int(0)];
        offsets.extend(g.betas.iter().filter(|b| b.lt(&half).unwrap()).cloned());
        for beta in offsets {
            let walks = oracle_walk_series(GRID_MAX, &g.angle, Some(&beta))?;
            let d_a = oracle_drel_series(GRID_MAX, &g.angle, &(&half - &beta), false)?;
            let d_b = if beta.is_zero() {
                vec![field.int(0); GRID_MAX as usize + 1]
            } else {
                oracle_drel_series(GRID_MAX, &g.angle, &(&field.int(1) - &beta), false)?
            };
            for n in 1..=GRID_MAX as usize {
                cases += 1;
                let lhs = walks[n - 1] - plain[n - 1];
                let rhs = (&(&d_a[n] - &d_b[n]) - &d_half[n]).mul_int(2);
                if !rhs.exact_eq(&field.int(lhs)) {
                    bad += 1;
                }
            }
        }
    }
    Ok((
        worked && bad == 0,
        format!("R_(n-1) = 2[d_n(1/2-b) - d_n(1-b) - d_n(1/2)] for b in [0,1/2): {bad}/{cases} mismatches, worked instance R_2 = {r2}, tolerance 0"),
    ))
}

fn c5(v: &Violations) -> Result<(bool, String)> {
    let ok = v.aggregate == 0 && v.step == 0 && v.c_range == 0 && v.coef == 0;
    Ok((
        ok,
        format!(
            "|C| < N, |B| < N, |S| <= sum(1 + a_m/4): {}/{} queries violate; per-step S bounds: {}/{} steps violate ({} on terminal steps); 0 < C < gamma: {} violations; |coef| <= a_1: {} violations",
            v.aggregate, v.cases, v.step, v.steps, v.step_terminal, v.c_range, v.coef
        ),
    ))
}

fn c6() -> Result<(bool, String)> {
    let mut bad = 0;
    let mut worst = 0f64;
    for angle in angles() {
        let series = d_star_series(GRID_MAX, &angle)?;
        for n in 1..=GRID_MAX {
            let v = &series[n as usize - 1];
            let bound = pinner_bound(n, &angle)?;
            if v.field().rational(bound.clone()).lt(v)? {
                bad += 1;
            }
            let ratio = v.to_f64() / num_traits::ToPrimitive::to_f64(&bound).unwrap();
            worst = worst.max(ratio);
        }
    }
    Ok((bad == 0, format!("nD_n* <= 1 + 3N + sum(a_m)/4, n <= {GRID_MAX}, 5 angles: {bad} violations, max ratio {worst:.4}, exact comparison")))
}

fn c7(data: &[GridData]) -> Result<(bool, String)> {
    let mut bad = 0;
    let mut cases = 0;
    for g in data {
        for n in 0..=GRID_MAX {
            cases += 1;
            let sup = g.walks.iter().map(|w| w[n as usize].abs()).max().unwrap();
            if rat(sup) > linf_bound(n, &g.angle)? {
                bad += 1;
            }
        }
    }
    Ok((bad == 0, format!("grid sup_b |S_n(a,b)| <= |S_n| + 6 sum(3 + a_m/4): {bad}/{cases} violations, exact comparison")))
}

fn c8() -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for angle in angles() {
        let num = Numeration::new(&angle, 20_000)?;
        let (t, r) = oracle_return_structure(12_000, &angle)?;
        let a1 = angle.quotient(1)?;
        let mut is_r = HashSet::new();
        let mut peaks = HashSet::new();
        let mut peak_list = Vec::new();
        for (k, &rk) in r.iter().enumerate() {
            is_r.insert(rk);
            if k == 0 || t[k] == a1 + 1 {
                peak_list.push(rk);
                if k > 0 {
                    peaks.insert(rk);
                }
            }
        }
        for x in 1..=WALK_MAX {
            if num.is_return_peak(x)? != peaks.contains(&x) || num.is_rk(x)? != is_r.contains(&x) {
                bad.push(format!("{angle}: r = {x}"));
            }
        }
        let (q1, q2) = (num.q(1), num.q(2));
        let mut long = Vec::new();
        for j in 1..peak_list.len() - 1 {
            let g = gap(j as u128, &angle)?;
            if g != peak_list[j] - peak_list[j - 1] || (g != q2 && g != q2 + q1) {
                bad.push(format!("{angle}: gap {j}"));
            }
            if g == q2 + q1 {
                long.push(j as u128);
            }
        }
        if special_subsequence(0, &angle)? != angle.quotient(3)? as u128 + 1 || long.first() != Some(&(angle.quotient(3)? as u128 + 1)) {
            bad.push(format!("{angle}: j_0"));
        }
    }
    let p2 = ReturnStructure::new(&parse_angle("periodic:2")?)?.peaks_upto(17)?;
    let list_ok = p2 == [0, 5, 10, 17];
    Ok((
        bad.is_empty() && list_ok,
        format!("peak and r_k characterization vs scan for r <= {WALK_MAX}, gaps and j_0 = a_3 + 1: {} mismatches; periodic:2 peaks {p2:?}", bad.len()),
    ))
}

fn c9() -> Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(9);
    let mut sandwich_bad = Vec::new();
    let mut only_if_bad = 0;
    let mut min_bad = 0;
    let mut ones = 0;
    let even = [parse_angle("periodic:2")?, parse_angle("periodic:2,3")?, parse_angle("periodic:4,1")?];
    for angle in &even {
        let w = Walker::new(angle)?;
        let series = oracle_walk_series(WALK_MAX, angle, None)?;
        let mut run = Vec::with_capacity(series.len());
        let (mut mx, mut mn) = (i64::MIN, i64::MAX);
        for s in &series {
            mx = mx.max(*s);
            mn = mn.min(*s);
            run.push((mx, mn));
        }
        for _ in 0..200 {
            let r = rng.gen_range(0..=WALK_MAX);
            let e = w.extrema(r)?;
            let rn = e.renorm.expect("even a_1");
            let (omax, omin) = run[r as usize];
            let diff = omax - (rn.max + e.a1 as i64 / 2);
            if diff != 0 && diff != 1 {
                sandwich_bad.push(format!("{angle} r = {r} diff {diff}"));
            }
            if diff == 1 {
                ones += 1;
                if !(rn.r1 == 0 && 2 * rn.r0 >= e.a1 as u128) {
                    only_if_bad += 1;
                }
            }
            if omin != rn.min {
                min_bad += 1;
            }
        }
    }
    let s = parse_angle("periodic:2")?;
    let series = oracle_walk_series(WALK_MAX, &s, None)?;
    let mut min_one = true;
    let mut mn = i64::MAX;
    let mut mx = i64::MIN;
    let mut run_max = Vec::new();
    for v in &series {
        mn = mn.min(*v);
        mx = mx.max(*v);
        run_max.push(mx);
        min_one &= mn == 1;
    }
    let mut peak_bad = Vec::new();
    let mut padded_bad = 0;
    let pad = rat(s.quotient(1)? as i64 / 2 + 1);
    for p in ReturnStructure::new(&s)?.peaks_upto(WALK_MAX)? {
        let b = maxpari_bounds(p, &s)?;
        let m = rat(run_max[p as usize]);
        if m < b.lower || m > b.upper {
            peak_bad.push(p);
        }
        if m < b.lower || m > &b.upper + &pad {
            padded_bad += 1;
        }
    }
    let ok = sandwich_bad.is_empty() && only_if_bad == 0 && min_bad == 0 && min_one && peak_bad.is_empty();
    Ok((
        ok,
        format!(
            "sandwich diff in {{0,1}} on 600 sampled r: {} violations {:?}; diff = 1 seen {ones} times, {only_if_bad} outside R_1 = 0, R_0 >= a_1/2; min equality {min_bad} violations; periodic:2 min = 1 {}; max in [lower, upper] at peaks fails at {:?} (padded upper + a_1/2 + 1: {padded_bad} violations)",
            sandwich_bad.len(),
            sandwich_bad.iter().take(3).collect::<Vec<_>>(),
            if min_one { "holds" } else { "fails" },
            peak_bad
        ),
    ))
}

fn c10() -> Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(10);
    let mut bad = 0;
    let mut lattice_bad = 0;
    let mut worst = 0f64;
    for angle in angles() {
        let field = Field::new(&angle);
        for _ in 0..1000 {
            let den = rng.gen_range(2..=1_000_000i64);
            let num = rng.gen_range(1..den);
            let e = expand(&field.ratio(num, den), &angle, 12)?;
            if e.verify_digits().is_err() || *e.lattice() != LatticeStatus::NotInLattice {
                bad += 1;
            }
        }
        for k in 1..=3 {
            let beta = field.alpha().mul_int(k).frac()?;
            let e = expand(&beta, &angle, 16)?;
            if e.verify_digits().is_err() || e.support_end().is_none() || !matches!(e.lattice(), LatticeStatus::InLattice { .. }) {
                lattice_bad += 1;
            }
            let series = oracle_drel_series(WALK_MAX, &angle, &beta, false)?;
            let m = series.iter().map(|x| x.abs().map(|a| a.to_f64())).collect::<Result<Vec<_>>>()?;
            worst = worst.max(m.into_iter().fold(0.0, f64::max));
        }
    }
    Ok((
        bad == 0 && lattice_bad == 0 && worst.is_finite(),
        format!("1000 random rationals per angle: {bad} digit or remainder violations; lattice offsets {{k a}}, k <= 3: {lattice_bad} without finite support, max_(n<={WALK_MAX}) |d_n| = {worst:.4}"),
    ))
}

fn c11() -> Result<(bool, String)> {
    let grid: Vec<u128> = vec![10, 50, 100, 250, 500, 1000, 2000];
    let mut out_of_range = 0;
    let (mut lo, mut hi) = (f64::MAX, 0f64);
    for angle in angles() {
        for row in asymptotic_report(&angle, &grid)? {
            lo = lo.min(row.normalized);
            hi = hi.max(row.normalized);
            if !(row.normalized > 0.0 && row.normalized <= 0.25) {
                out_of_range += 1;
            }
        }
    }
    let g = AngleDescriptor::golden();
    let w = Walker::new(&g)?;
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut rng = StdRng::seed_from_u64(11);
    let mut c = f64::MIN;
    let mut rs: Vec<u128> = (0..=6).map(|k| 10u128.pow(k)).collect();
    rs.extend((0..500).map(|_| rng.gen_range(1..=1_000_000u128)));
    for r in rs {
        let e = w.extrema(r)?;
        c = c.max(e.max as f64 - (r as f64).ln() / (6.0 * phi.ln()));
    }
    Ok((
        out_of_range == 0 && c <= 4.0,
        format!("non-asymptotic evidence only: normalized nD_n*/(sum a + 4 + 12N) in [{lo:.4}, {hi:.4}] (required (0, 1/4]); golden max S_n - log r/(6 log phi) <= {c:.4} for r <= 10^6 (required <= 4)"),
    ))
}

fn c12() -> Result<(bool, String)> {
    let angle = parse_angle("periodic:2")?;
    let t = Instant::now();
    let o = oracle_walk(1_000_000, &angle, None)?;
    let oracle_time = t.elapsed().as_secs_f64();
    let w = Walker::new(&angle)?;
    let t = Instant::now();
    let s = w.walk(1_000_000)?;
    let renorm_time = t.elapsed().as_secs_f64();
    Ok((
        o == s && oracle_time < 60.0 && renorm_time < 1.0,
        format!("oracle n = 10^6 in {oracle_time:.3}s (limit 60s), walk_zero n = 10^6 in {:.3}ms (limit 1s), values equal: {}", renorm_time * 1e3, o == s),
    ))
}

fn main() {
    let mut report = Report { failed: Vec::new() };
    report.line(1, c1());
    match grid_data() {
        Ok(data) => {
            report.line(2, c2(&data));
            match scan_discrepancy(&data) {
                Ok(v) => {
                    report.line(3, c3(&v));
                    report.line(4, c4(&data));
                    report.line(5, c5(&v));
                }
                Err(e) => {
                    for id in [3, 4, 5] {
                        report.line(id, Err(e.clone()));
                    }
                }
            }
            report.line(6, c6());
            report.line(7, c7(&data));
        }
        Err(e) => {
            for id in [2, 3, 4, 5, 6, 7] {
                report.line(id, Err(e.clone()));
            }
        }
    }
    report.line(8, c8());
    report.line(9, c9());
    report.line(10, c10());
    report.line(11, c11());
    report.line(12, c12());
    if report.failed.is_empty() {
        println!("acceptance: all 12 criteria pass");
    } else {
        println!("acceptance: failing criteria {:?}", report.failed);
        std::process::exit(1);
    }
}
