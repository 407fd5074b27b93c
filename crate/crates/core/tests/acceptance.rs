//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! All checks are exact (zero tolerance) except the timing bound in
//! criterion 12. Random inputs come from a fixed ChaCha seed.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use linrec::closedform::{companion_matrix, matrix_mk, term_via_c, term_via_corollary};
use linrec::gcdlib::{
    check_gcd_preserved, cramer_delta, gcd, multi_gcd, prop24_witness, prop25_witness,
};
use linrec::period::{
    candidate_periods_via_residue, fibonacci_family_period, fundamental_period, is_period,
    is_prime, theorem29_check,
};
use linrec::recurrence::commutation_check_window;
use linrec::scan::{family_scan, map_ordered, Execution};
use linrec::{IntMatrix, Recurrence};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_recurrence(rng: &mut ChaCha8Rng, k: usize, coeff: i64, init: i64) -> Recurrence {
    let c: Vec<i64> = (0..k).map(|_| rng.gen_range(-coeff..=coeff)).collect();
    let a: Vec<i64> = (0..k).map(|_| rng.gen_range(-init..=init)).collect();
    Recurrence::from_i64(&c, &a).unwrap()
}

/// Plain machine-integer Fibonacci residues, independent of the library.
fn fib_residues(m: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let (mut a, mut b) = (1 % m, 1 % m);
    for _ in 0..count {
        out.push(a);
        (a, b) = (b, (a + b) % m);
    }
    out
}

/// Smallest l with F_{1+l} = F_1 and F_{2+l} = F_2 mod m, confirmed over 3l
/// further terms.
fn naive_pisano(m: u64) -> u64 {
    let limit = 6 * m + 6;
    let terms = fib_residues(m, (4 * limit + 2) as usize);
    (1..=limit)
        .find(|&l| {
            let l = l as usize;
            terms[l] == terms[0]
                && terms[l + 1] == terms[1]
                && (0..3 * l).all(|n| terms[n + l] == terms[n])
        })
        .expect("Pisano period is at most 6m")
}

/// Direct residue iteration in `i128`, independent of the library.
fn direct_residues(r: &Recurrence, m: u64, count: usize) -> Vec<i128> {
    let m = m as i128;
    let red = |x: &BigInt| x.mod_floor(&BigInt::from(m)).try_into().unwrap();
    let coeffs: Vec<i128> = r.coeffs().iter().map(red).collect();
    let mut seq: Vec<i128> = r.init().iter().map(red).collect();
    let k = coeffs.len();
    while seq.len() < count {
        let n = seq.len();
        let next = (0..k)
            .map(|j| coeffs[j] * seq[n - k + j])
            .sum::<i128>()
            .rem_euclid(m);
        seq.push(next);
    }
    seq.truncate(count);
    seq
}

fn criterion_1_family() -> Outcome {
    let fib = Recurrence::fibonacci();
    let qs: Vec<u64> = (1..=99)
        .step_by(2)
        .filter(|&q| is_prime(5 * q + 2))
        .collect();
    ensure(qs.starts_with(&[1, 3, 7, 9, 13]), || {
        format!("unexpected q list {qs:?}")
    })?;
    for &q in &qs {
        let (m, ell) = fibonacci_family_period(q).map_err(|e| e.to_string())?;
        ensure(m as u64 == 5 * q + 2 && ell == 2 * (5 * q + 3), || {
            format!("q = {q}: got ({m}, {ell})")
        })?;
        let s = fib.reduce(m as u64).unwrap();
        ensure(is_period(&s, ell).unwrap(), || {
            format!("q = {q}: {ell} is not a period mod {m}")
        })?;
        let p = fundamental_period(&s)
            .unwrap()
            .ok_or(format!("q = {q}: no fundamental period"))?;
        ensure(ell % p == 0, || {
            format!("q = {q}: fundamental {p} does not divide {ell}")
        })?;
    }
    let p47 = fundamental_period(&fib.reduce(47).unwrap()).unwrap();
    ensure(p47 == Some(32), || format!("m = 47: fundamental {p47:?}"))?;
    let rows = family_scan(99, Execution::default()).map_err(|e| e.to_string())?;
    ensure(rows.len() == qs.len(), || "family scan row count".into())?;
    Ok(format!(
        "{} family moduli, all periods verified (m=47: 32 | 96)",
        qs.len()
    ))
}

fn criterion_2_pisano() -> Outcome {
    let fib = Recurrence::fibonacci();
    let spots = [(2, 3), (3, 8), (5, 20), (7, 16), (10, 60)];
    for (m, want) in spots {
        ensure(naive_pisano(m) == want, || {
            format!("oracle gives {} for m = {m}", naive_pisano(m))
        })?;
    }
    let moduli: Vec<u64> = (2..=100).collect();
    let mismatches: Vec<u64> = map_ordered(&moduli, Execution::default(), |&m| {
        let got = fundamental_period(&fib.reduce(m).unwrap()).unwrap();
        (got != Some(naive_pisano(m))).then_some(m)
    })
    .into_iter()
    .flatten()
    .collect();
    ensure(mismatches.is_empty(), || {
        format!("mismatch at m = {mismatches:?}")
    })?;
    Ok("m in [2,100] match the naive scan; spot values 3, 8, 20, 16, 60".into())
}

fn criterion_3_first_k_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases: Vec<(Recurrence, u64)> = (0..100)
        .map(|_| {
            let k = rng.gen_range(1..=4);
            (
                random_recurrence(&mut rng, k, 10, 10),
                rng.gen_range(1..=30),
            )
        })
        .collect();
    let results = map_ordered(&cases, Execution::default(), |(r, m)| {
        let s = r.reduce(*m).unwrap();
        let direct = direct_residues(r, *m, 1000 + 500 + 1);
        let mut accepted = 0u64;
        let mut violations = Vec::new();
        for ell in 1..=500u64 {
            if is_period(&s, ell).unwrap() {
                accepted += 1;
                let l = ell as usize;
                if !(0..1000).all(|n| direct[n + l] == direct[n]) {
                    violations.push(ell);
                }
            }
        }
        (accepted, violations)
    });
    let accepted: u64 = results.iter().map(|r| r.0).sum();
    let violations: usize = results.iter().map(|r| r.1.len()).sum();
    ensure(violations == 0, || {
        format!("{violations} accepted shifts fail direct evaluation")
    })?;
    ensure(accepted > 0, || "no shift was ever accepted".into())?;
    Ok(format!(
        "{accepted} accepted shifts over 100 recurrences, 0 violations"
    ))
}

fn sample_closed_form_cases() -> Vec<Recurrence> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    (0..200)
        .map(|_| {
            let k = rng.gen_range(2..=5);
            random_recurrence(&mut rng, k, 3, 5)
        })
        .collect()
}

fn criterion_4_closed_form() -> Outcome {
    let mut checked = 0;
    for r in sample_closed_form_cases() {
        let k = r.order();
        let upper = r.term_block(k as u64 + 1, k).unwrap();
        for i in 1..=k {
            let via_c = term_via_c(&r, i).unwrap();
            ensure(via_c == upper[i - 1], || {
                format!("{r:?}, i = {i}: C-expansion {via_c}")
            })?;
            if i < k {
                let via_cor = term_via_corollary(&r, i).unwrap();
                ensure(via_cor == upper[i - 1], || {
                    format!("{r:?}, i = {i}: regrouped {via_cor}")
                })?;
            }
            checked += 1;
        }
    }
    Ok(format!("200 recurrences, {checked} (R, i) pairs exact"))
}

fn criterion_5_mk() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for r in sample_closed_form_cases() {
        let k = r.order();
        let mk = matrix_mk(&r).unwrap();
        let power = companion_matrix(&r).pow(k as u64).unwrap();
        ensure(mk == power, || format!("{r:?}: M_k differs from C^k"))?;
        for _ in 0..20 {
            let init: Vec<BigInt> = (0..k)
                .map(|_| BigInt::from(rng.gen_range(-50..=50)))
                .collect();
            let moved = r.with_init(init).unwrap();
            let image = mk.mul_vec(moved.init()).unwrap();
            ensure(image == moved.term_block(k as u64 + 1, k).unwrap(), || {
                format!("{moved:?}: M_k a != (a_(k+1)..a_(2k))")
            })?;
        }
    }
    Ok("200 recurrences: M_k = C^k entrywise, 4000 re-initializations exact".into())
}

fn criterion_6_necessity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut recurrences = vec![Recurrence::fibonacci()];
    recurrences.extend((0..20).map(|_| {
        let k = rng.gen_range(2..=3);
        random_recurrence(&mut rng, k, 5, 5)
    }));
    let per_recurrence = map_ordered(&recurrences, Execution::default(), |r| {
        let mut checked = 0u64;
        let mut violations = Vec::new();
        for m in 2..=50u64 {
            let s = r.reduce(m).unwrap();
            let Some(p) = fundamental_period(&s).unwrap() else {
                continue;
            };
            for ell in (p..=500).step_by(p as usize) {
                if !is_period(&s, ell).unwrap() {
                    violations.push(format!("{ell} rejected mod {m}"));
                } else if !theorem29_check(&s, ell).unwrap() {
                    violations.push(format!("necessity fails at {ell} mod {m}"));
                }
                checked += 1;
            }
        }
        (checked, violations)
    });
    let checked: u64 = per_recurrence.iter().map(|x| x.0).sum();
    let violations: Vec<&String> = per_recurrence.iter().flat_map(|x| &x.1).collect();
    ensure(violations.is_empty(), || format!("{violations:?}"))?;
    Ok(format!("{checked} verified periods, 0 violations"))
}

fn criterion_7_residue_pipeline() -> Outcome {
    let fib = Recurrence::fibonacci();
    let got = candidate_periods_via_residue(&fib.reduce(10).unwrap(), 120).unwrap();
    ensure(got == [60, 120], || format!("Fibonacci mod 10: {got:?}"))?;
    let bound = 300;
    for m in 1..=50 {
        let s = fib.reduce(m).unwrap();
        let p = fundamental_period(&s).unwrap().unwrap();
        let candidates = candidate_periods_via_residue(&s, bound).unwrap();
        if p <= bound {
            ensure(candidates.first() == Some(&p), || {
                format!("m = {m}: {p} not first in {candidates:?}")
            })?;
        }
        ensure(candidates.iter().all(|c| c % p == 0), || {
            format!("m = {m}: non-period candidate")
        })?;
    }
    Ok("Fibonacci mod 10 -> [60, 120]; fundamental period found for every m <= 50".into())
}

fn criterion_8_strong_divisibility() -> Outcome {
    let fib = Recurrence::fibonacci();
    let terms: Vec<BigInt> = fib.terms().take(200).collect();
    let at = |n: u64| &terms[n as usize - 1];
    for m in 1..=60u64 {
        for n in 1..=60u64 {
            ensure(gcd(at(m), at(n)) == *at(m.gcd(&n)), || {
                format!("gcd(F_{m}, F_{n})")
            })?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let len = rng.gen_range(2..=6);
        let idx: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=200)).collect();
        let values: Vec<BigInt> = idx.iter().map(|&i| at(i).clone()).collect();
        let g = idx.iter().fold(0u64, |acc, &i| acc.gcd(&i));
        ensure(multi_gcd(&values).unwrap() == *at(g), || {
            format!("tuple {idx:?}")
        })?;
    }
    Ok("3600 pairs and 50 index tuples exact".into())
}

/// Product of elementary row operations: add a multiple of one row to
/// another, or swap two rows and negate one. Determinant stays +-1.
fn elementary_product(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut a = IntMatrix::identity(n);
    for _ in 0..rng.gen_range(1..=20) {
        let (i, j) = loop {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i != j {
                break (i, j);
            }
        };
        let mut rows = a.to_rows();
        if rng.gen_bool(0.8) {
            let c = BigInt::from(rng.gen_range(-3..=3));
            let scaled: Vec<BigInt> = rows[j].iter().map(|x| x * &c).collect();
            for (x, s) in rows[i].iter_mut().zip(scaled) {
                *x += s;
            }
        } else {
            rows.swap(i, j);
            for x in rows[i].iter_mut() {
                *x = -x.clone();
            }
        }
        a = IntMatrix::from_rows(rows).unwrap();
    }
    a
}

fn criterion_9_unimodular() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < 100 {
        attempts += 1;
        ensure(attempts < 100_000, || {
            "could not sample positive images".into()
        })?;
        let n = rng.gen_range(2..=5);
        let a = elementary_product(&mut rng, n);
        let det = a.det().unwrap();
        ensure(det.abs().is_one(), || {
            format!("generator produced det {det}")
        })?;
        let Some(x) = (0..200).find_map(|_| {
            let x: Vec<BigInt> = (0..n)
                .map(|_| BigInt::from(rng.gen_range(1..=50)))
                .collect();
            a.mul_vec(&x)
                .unwrap()
                .iter()
                .all(Signed::is_positive)
                .then_some(x)
        }) else {
            continue;
        };
        let outcome = check_gcd_preserved(&a, &x).map_err(|e| e.to_string())?;
        for i in 1..=n {
            let delta = cramer_delta(&a, &outcome.image, i).unwrap();
            ensure(&det * &x[i - 1] == delta, || {
                format!("Cramer fails at column {i}")
            })?;
        }
        accepted += 1;
    }
    Ok(format!(
        "100 matrices (from {attempts} draws), gcd preserved and Cramer exact"
    ))
}

fn criterion_10_witnesses() -> Outcome {
    let fib = Recurrence::fibonacci();
    let mut built = 0;
    let mut positive_z = 0;
    let mut deferred = 0;
    for m in 2..=30u64 {
        let ell = fundamental_period(&fib.reduce(m).unwrap())
            .unwrap()
            .unwrap();
        for i in 1..=10 {
            for j in 1..=10 {
                let w = prop24_witness(&fib, i, j, m, ell)
                    .map_err(|e| format!("(i={i}, j={j}, m={m}): {e}"))?;
                ensure(w.lhs_residue == w.rhs_residue, || "unequal residues".into())?;
                let out = prop25_witness(&fib, i, j, m, ell)
                    .map_err(|e| format!("(i={i}, j={j}, m={m}): {e}"))?;
                match out.witness {
                    Some(w) => {
                        ensure(out.z > 0 && w.lhs_residue == w.rhs_residue, || {
                            "bad multiple witness".into()
                        })?;
                        positive_z += 1;
                    }
                    None => {
                        ensure(out.z <= 0, || "missing witness for z > 0".into())?;
                        deferred += 1;
                    }
                }
                built += 1;
            }
        }
    }
    Ok(format!("{built} witnesses, {positive_z} multiple witnesses (z > 0), {deferred} with z <= 0, 0 violations"))
}

fn criterion_11_commutation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let recurrences: Vec<Recurrence> = (0..50)
        .map(|_| {
            let k = rng.gen_range(1..=5);
            random_recurrence(&mut rng, k, 10, 100)
        })
        .collect();
    let violations: usize = map_ordered(&recurrences, Execution::default(), |r| {
        let k = r.order();
        let terms: Vec<BigInt> = r.terms().take(50 + k).collect();
        (2..=20u64)
            .flat_map(|m| (1..=50usize).map(move |i| (m, i)))
            .filter(|&(m, i)| !commutation_check_window(r, m, &terms[i - 1..i - 1 + k]).unwrap())
            .count()
    })
    .into_iter()
    .sum();
    ensure(violations == 0, || {
        format!("{violations} squares fail to commute")
    })?;
    Ok("50 recurrences x 19 moduli x 50 positions, 0 violations".into())
}

fn criterion_12_performance() -> Outcome {
    let s = Recurrence::fibonacci().reduce(1_000_003).unwrap();
    let start = Instant::now();
    let value = s.term_fast(1_000_000_000).unwrap();
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_millis(10), || {
        format!("took {elapsed:?}")
    })?;
    let slow: Vec<u32> = s.residues().take(100_000).collect();
    for n in 1..=100_000u64 {
        ensure(s.term_fast(n).unwrap() == slow[n as usize - 1], || {
            format!("disagree at n = {n}")
        })?;
    }
    for n in [1, 2, 3, 1000, 54_321, 100_000] {
        ensure(s.term(n).unwrap() == slow[n as usize - 1], || {
            format!("iteration disagrees at n = {n}")
        })?;
    }
    Ok(format!(
        "F_1e9 mod 1000003 = {value} in {elapsed:?}; agreement for all n <= 1e5"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("1 Fibonacci 5q+2 family periods", criterion_1_family),
        ("2 Pisano periods vs naive scan", criterion_2_pisano),
        ("3 first-k period check", criterion_3_first_k_check),
        ("4 closed-form expansions", criterion_4_closed_form),
        ("5 M_k = companion^k", criterion_5_mk),
        ("6 necessary period condition", criterion_6_necessity),
        ("7 period residue pipeline", criterion_7_residue_pipeline),
        ("8 strong divisibility", criterion_8_strong_divisibility),
        ("9 unimodular gcd preservation", criterion_9_unimodular),
        ("10 residue witnesses", criterion_10_witnesses),
        (
            "11 reduction commutes with the recurrence",
            criterion_11_commutation,
        ),
        ("12 fast modular term", criterion_12_performance),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>())));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] criterion {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {name} ({secs:.2}s): {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
