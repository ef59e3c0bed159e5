//! Acceptance suite: one PASS/FAIL line per criterion, each including its
//! wall-clock limit. Exits nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hecke_core::backends::{FinitePair, Sl2};
use hecke_core::fixtures;
use hecke_core::spherical::{
    character_eval, counterexample_element, scan_positivity, CharacterPoint, DomainPolicy, SphericalElement,
};
use hecke_core::{GaussianRational, Hecke, HeckeElement, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn e(h: &Hecke<Sl2>, m: i64) -> HeckeElement<hecke_core::backends::Sl2Element> {
    h.basis(&h.canonical_double_coset(&h.backend().x(m)).unwrap())
}

fn certificate_exact() -> Check {
    let mut values = vec![];
    for q in [2u64, 3, 5, 7, 11, 13] {
        let h = Hecke::new(Sl2::new(q).map_err(|e| e.to_string())?);
        let f = counterexample_element(&h).map_err(|e| e.to_string())?;
        let qi = q as i64;
        let report = scan_positivity(&h, &f, &[Rational::from(-qi)], DomainPolicy::Enforce).map_err(|e| e.to_string())?;
        let expected = Rational::from(qi + 1) - r(qi.pow(3) + qi + 2, qi + 1);
        let value = report.rows[0].value.clone();
        ensure(value == expected && value.is_negative(), || format!("q={q}: got {value}, expected {expected}"))?;
        let cert = report.certificate.ok_or(format!("q={q}: no certificate"))?;
        ensure(cert.value == expected, || format!("q={q}: certificate value {}", cert.value))?;
        values.push(format!("q={q}:{value}"));
    }
    ensure(values[0] == "q=2:-1" && values[1] == "q=3:-4", || values.join(" "))?;
    Ok(values.join(" "))
}

fn product_ledger() -> Check {
    for q in [2u64, 3, 5] {
        let h = Hecke::new(Sl2::new(q).unwrap());
        let f = counterexample_element(&h).map_err(|e| e.to_string())?;
        let inner = h.r_inner(&f, &f).map_err(|e| e.to_string())?;
        let want = e(&h, 0)
            .scale(&GaussianRational::from_int(q as i64 + 1))
            .add(&e(&h, 1))
            .unwrap();
        ensure(inner == want, || format!("q={q}: ⟨f,f⟩_R = {inner:?}"))?;
    }
    Ok("⟨f,f⟩_R = (q+1)e₀ + e₁ for q = 2, 3, 5".into())
}

fn coset_counts() -> Check {
    let mut seen = vec![];
    for q in [2u64, 3] {
        let h = Hecke::new(Sl2::new(q).unwrap());
        for n in 1..=3i64 {
            let d = h.canonical_double_coset(&h.backend().x(n)).unwrap();
            let (l, rr) = h.coset_counts(&d).map_err(|e| e.to_string())?;
            let want = (q + 1) * q.pow(2 * n as u32 - 1);
            let delta = h.delta(&d).map_err(|e| e.to_string())?;
            ensure(l == want && rr == want && delta.is_one(), || {
                format!("q={q} n={n}: L={l} R={rr} Δ={delta}, expected L=R={want}")
            })?;
            let by_orbit = h.right_count_by_orbit(&h.backend().x(n)).map_err(|e| e.to_string())?;
            ensure(by_orbit == want, || format!("q={q} n={n}: right orbit count {by_orbit}"))?;
            seen.push(format!("{l}"));
        }
    }
    Ok(format!("L(x_n) = {}", seen.join(",")))
}

/// Random rational `z` with `1/q ≤ |z| ≤ q` and `z ≠ 1`.
fn admissible_z(rng: &mut ChaCha8Rng, q: i64) -> Rational {
    loop {
        let d = rng.gen_range(1..=30i64);
        let n = rng.gen_range((d + q - 1) / q..=d * q);
        let z = r(if rng.gen_bool(0.5) { -n } else { n }, d);
        if !z.is_one() {
            return z;
        }
    }
}

fn character_consistency() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut grid_points = 0;
    for q in [2u64, 3] {
        let h = Hecke::new(Sl2::new(q).unwrap());
        let mut zs = vec![];
        while zs.len() < 20 {
            let z = admissible_z(&mut rng, q as i64);
            if !zs.contains(&z) {
                zs.push(z);
            }
        }
        for z in &zs {
            let point = CharacterPoint::new(q, z.clone(), DomainPolicy::Enforce).map_err(|e| e.to_string())?;
            let eval = |f: &HeckeElement<_>| -> Result<Rational, String> {
                let s = SphericalElement::from_hecke(&h, f).map_err(|e| e.to_string())?;
                character_eval(&h, &point, &s).map_err(|e| e.to_string())
            };
            for m in 0..=2 {
                for n in 0..=2 {
                    let product = h.convolve(&e(&h, m), &e(&h, n)).map_err(|e| e.to_string())?;
                    let (lhs, rhs) = (eval(&product)?, eval(&e(&h, m))? * eval(&e(&h, n))?);
                    ensure(lhs == rhs, || format!("q={q} z={z} m={m} n={n}: {lhs} ≠ {rhs}"))?;
                }
            }
        }

        // every n/d with d ≤ 12 inside [1/q, q], minus z = 1
        let qi = q as i64;
        let mut grid: Vec<Rational> = (1..=12i64)
            .flat_map(|d| ((d + qi - 1) / qi..=d * qi).map(move |n| r(n, d)))
            .filter(|z| !z.is_one())
            .collect();
        grid.sort();
        grid.dedup();
        ensure(grid.len() >= 50, || format!("grid has only {} points", grid.len()))?;
        let f = counterexample_element(&h).map_err(|e| e.to_string())?;
        let report = scan_positivity(&h, &f, &grid, DomainPolicy::Enforce).map_err(|e| e.to_string())?;
        for row in &report.rows {
            ensure(!row.value.is_negative(), || format!("q={q} z={}: value {} < 0", row.z, row.value))?;
        }
        grid_points += grid.len();
    }
    Ok(format!("20 z per q, m,n ≤ 2; {grid_points} grid points nonnegative"))
}

fn oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let specs = fixtures::all();
    ensure(specs.len() >= 5, || "fewer than 5 fixtures".into())?;
    let names: Vec<_> = specs.iter().map(|(n, _)| *n).collect();
    ensure(names.contains(&"s3_transposition") && names.contains(&"s3_a3"), || "S₃ fixtures missing".into())?;
    let coeff = |rng: &mut ChaCha8Rng| {
        GaussianRational::new(r(rng.gen_range(-5..=5), rng.gen_range(1..=4)), r(rng.gen_range(-5..=5), rng.gen_range(1..=4)))
    };
    for (name, spec) in specs {
        let pair = FinitePair::load(spec).map_err(|e| e.to_string())?;
        let doubles = pair.double_cosets();
        let h = Hecke::new(pair);
        let random = |rng: &mut ChaCha8Rng| {
            let terms: Vec<_> = (0..rng.gen_range(1..=doubles.len()))
                .map(|_| (h.canonical_double_coset(&doubles[rng.gen_range(0..doubles.len())]).unwrap(), coeff(rng)))
                .collect();
            h.element(terms)
        };
        for trial in 0..100 {
            let (f1, f2) = (random(&mut rng), random(&mut rng));
            let report = h.group_algebra_oracle_check(&f1, &f2).map_err(|e| e.to_string())?;
            ensure(report.passed(), || format!("{name} trial {trial}: {}", report.mismatches.join("; ")))?;
        }
    }
    Ok(format!("{} fixtures × 100 pairs", names.len()))
}

fn dihedral_growth() -> Check {
    use hecke_core::backends::{Dihedral, DihedralElement};
    let h = Hecke::new(Dihedral);
    let a = h
        .coset_set_of(&[DihedralElement::new(0, 1).unwrap(), DihedralElement::new(1, 1).unwrap()])
        .map_err(|e| e.to_string())?;
    let report = h.growth_sequence(&a, 100).map_err(|e| e.to_string())?;
    ensure(!report.truncated && report.rows.len() == 101, || "report truncated".into())?;
    for row in &report.rows {
        ensure(row.l == 2 * row.n as u64 + 3, || format!("n={}: L={}", row.n, row.l))?;
    }
    let ratio = report.exact_ratio(100).unwrap();
    ensure(ratio <= r(101, 100), || format!("ratio at n=100 is {ratio}"))?;
    Ok(format!("L(Aⁿ) = 2n+3 for n ≤ 100; ratio(100) = {ratio} ≈ {:.5}", ratio.to_f64()))
}

fn sl2_growth() -> Check {
    let h = Hecke::new(Sl2::new(2).unwrap());
    let a = h.coset_set_of(&[h.backend().x(0), h.backend().x(1)]).map_err(|e| e.to_string())?;
    let report = h.growth_sequence(&a, 5).map_err(|e| e.to_string())?;
    ensure(!report.truncated && report.rows.len() == 6, || "report truncated".into())?;
    for row in &report.rows {
        let want = 2 * 4u64.pow(row.n + 1) - 1;
        ensure(row.l == want, || format!("n={}: L={} expected {want}", row.n, row.l))?;
    }
    let exact = format!("L(Aⁿ) = 2·4^(n+1) − 1 for n ≤ 5: {:?}", report.l_values());
    // |ratio − 4| ≤ 0.5% of 4, compared exactly
    let mut off = vec![];
    for i in 3..=5 {
        let ratio = report.exact_ratio(i).unwrap();
        let dev = (&ratio - &Rational::from(4)).abs();
        if dev > r(2, 100) {
            off.push(format!("n={i}: ratio {ratio} ≈ {:.5}, {:.3}% from 4", ratio.to_f64(), dev.to_f64() * 25.0));
        }
    }
    if off.is_empty() {
        Ok(format!("{exact}; ratios within 0.5% of 4 for n ≥ 3"))
    } else {
        Err(format!("{exact} holds, but the ratio band fails: {}", off.join("; ")))
    }
}

fn property_suites() -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hecke"))
            .args(["verify", "--suite", "all", "--trials", "100", "--seed", "2024"])
            .output()
            .map_err(|e| e.to_string())
    };
    let first = run()?;
    ensure(first.status.success(), || String::from_utf8_lossy(&first.stdout).into_owned())?;
    let second = run()?;
    ensure(first.stdout == second.stdout, || "output differs between identical runs".into())?;
    let v: Value = serde_json::from_slice(&first.stdout).map_err(|e| e.to_string())?;
    let props = v["properties"].as_array().ok_or("no properties")?;
    for p in props {
        ensure(p["trials"].as_u64() >= Some(100) && p["passed"] == true, || format!("{p}"))?;
    }
    let names: Vec<&str> = props.iter().filter_map(|p| p["name"].as_str()).collect();
    for required in [
        "associativity",
        "star_involution_laws",
        "delta_homomorphism",
        "l_equals_r_inverse",
        "norm_star_isometry",
        "norm_submultiplicative",
        "rinner_representative_independence",
        "phi_inversion_symmetry",
        "reduction_structure_constants",
    ] {
        ensure(names.contains(&required), || format!("suite lacks {required}"))?;
    }
    Ok(format!("{} properties × 100 trials, byte-identical reruns", props.len()))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, Duration, fn() -> Check); 8] = [
        (1, "certificate at z = -q, q ≤ 13", Duration::from_secs(5), certificate_exact),
        (2, "product ledger ⟨f,f⟩_R", Duration::from_secs(5), product_ledger),
        (3, "SL₂ coset counts", Duration::from_secs(60), coset_counts),
        (4, "character/engine consistency", Duration::from_secs(60), character_consistency),
        (5, "finite group algebra oracle", Duration::from_secs(30), oracle_equivalence),
        (6, "dihedral growth", Duration::from_secs(10), dihedral_growth),
        (7, "SL₂ growth", Duration::from_secs(60), sl2_growth),
        (8, "property suites", Duration::from_secs(120), property_suites),
    ];
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {id}: {name} ({:.2} s, limit {} s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
