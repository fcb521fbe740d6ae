//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use flasque::cohomology::{h_one, h_one_via_periodic_resolution, tate_minus_one, tate_zero};
use flasque::dedekind::{dedekind_criterion, cyclotomic_order_maximality};
use flasque::exactla::AbelianInvariants;
use flasque::flabby::{
    classify, twisted_line_counterexample, gaussian_twisted_line_counterexample, flabby_resolution, permutation_recognize_cp,
    phi_decompose, rational_orbit_multiplicities, TwistedLineReport, SteinitzClass, Verdict, DEFAULT_CLASS_NUMBER_ONE,
};
use flasque::groupring::{euler_phi, prime_factors, BaseRing, CyclicGroup, IntPoly};
use flasque::lattice::{
    augmentation_ideal, fixed_sublattice, permutation_lattice, random_lattice, random_permutation_lattice,
    regular_phi_sequence, RandomBlock,
};
use flasque::GroupLattice;

/// Time budget for criterion 1 (all 200 lattices together).
const COHOMOLOGY_BUDGET: Duration = Duration::from_secs(10);
/// Time budget for criterion 6, per case.
const EXAMPLE_BUDGET: Duration = Duration::from_secs(5);

const CORPUS_SEED: u64 = 0x5eed;

struct Check {
    pass: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Check {
    Check { pass: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Check {
    Check { pass: false, detail: detail.into() }
}

fn group(n: usize) -> CyclicGroup {
    CyclicGroup::new(n).unwrap()
}

/// 200 lattices over C_2, C_3, C_4, C_6 with Z-rank 1..=6.
fn cohomology_corpus() -> Vec<GroupLattice> {
    let mut out = Vec::new();
    for (k, n) in [2, 3, 4, 6].into_iter().enumerate() {
        for i in 0..50 {
            let seed = CORPUS_SEED + (k * 50 + i) as u64;
            out.push(random_lattice(BaseRing::Integers, group(n), 1 + i % 6, seed).unwrap());
        }
    }
    out
}

/// The cohomology corpus plus 12 lattices each over the other orders up to 12.
fn full_corpus() -> Vec<GroupLattice> {
    let mut out = cohomology_corpus();
    for (k, n) in [1, 5, 7, 8, 9, 10, 11, 12].into_iter().enumerate() {
        for i in 0..12 {
            let seed = CORPUS_SEED + 10_000 + (k * 12 + i) as u64;
            out.push(random_lattice(BaseRing::Integers, group(n), 1 + i % 6, seed).unwrap());
        }
    }
    out
}

fn criterion_1() -> Check {
    let corpus = cohomology_corpus();
    let start = Instant::now();
    let mut checks = 0;
    for (i, m) in corpus.iter().enumerate() {
        for h in m.group().subgroups() {
            let norm_route = h_one(m, &h).unwrap();
            let periodic = h_one_via_periodic_resolution(m, &h).unwrap();
            if norm_route != periodic {
                return fail(format!(
                    "lattice {i} (C_{}), subgroup {}: {norm_route} vs {periodic}",
                    m.group().order(),
                    h.order()
                ));
            }
            checks += 1;
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= COHOMOLOGY_BUDGET {
        return fail(format!("{checks} agreements but took {elapsed:?} (budget {COHOMOLOGY_BUDGET:?})"));
    }
    pass(format!("{} lattices, {checks} subgroup checks agree, {elapsed:.2?}", corpus.len()))
}

fn criterion_2() -> Check {
    let corpus = full_corpus();
    let mut flabby = 0;
    for (i, m) in corpus.iter().enumerate() {
        let c = match classify(m) {
            Ok(c) => c,
            Err(e) => return fail(format!("lattice {i}: {e}")),
        };
        // independent flags: H^-1 from the norm kernel, H^1 from the periodic resolution
        let subgroups = m.group().subgroups();
        let is_flabby = subgroups.iter().all(|h| tate_minus_one(m, h).unwrap().is_zero());
        let is_coflabby = subgroups.iter().all(|h| h_one_via_periodic_resolution(m, h).unwrap().is_trivial());
        if is_flabby != is_coflabby || c.is_flabby != is_flabby || c.is_coflabby != is_coflabby {
            return fail(format!(
                "lattice {i}: classify ({}, {}), direct ({is_flabby}, {is_coflabby})",
                c.is_flabby, c.is_coflabby
            ));
        }
        flabby += usize::from(is_flabby);
    }
    pass(format!("{} lattices agree ({flabby} flabby)", corpus.len()))
}

fn criterion_3() -> Check {
    for n in 1..=12 {
        let g = group(n);
        let i = augmentation_ideal(BaseRing::Integers, g);
        let expected = AbelianInvariants::from_cyclic_orders(0, &[BigInt::from(n)]);
        let a = h_one(&i, &g.whole()).unwrap();
        let b = h_one_via_periodic_resolution(&i, &g.whole()).unwrap();
        if a != expected || b != expected {
            return fail(format!("n = {n}: {a} and {b}, expected {expected}"));
        }
    }
    pass("H^1(C_n, I) = Z/n for n = 1..=12 by both routes")
}

fn criterion_4() -> Check {
    let corpus = full_corpus();
    for (i, m) in corpus.iter().enumerate() {
        let r = match flabby_resolution(m) {
            Ok(r) => r,
            Err(e) => return fail(format!("lattice {i}: {e}")),
        };
        if let Err(e) = r.sequence.verify() {
            return fail(format!("lattice {i}: not exact: {e}"));
        }
        let p = permutation_lattice(m.base(), m.group(), &r.middle_orbits).unwrap();
        if r.middle() != &p {
            return fail(format!("lattice {i}: middle term is not the permutation lattice {:?}", r.middle_orbits));
        }
        if !classify(r.outer()).unwrap().is_flabby {
            return fail(format!("lattice {i}: outer term is not flabby"));
        }
    }
    let mut problems = Vec::new();
    for n in [4, 6, 8, 9, 12] {
        let s = regular_phi_sequence(BaseRing::Integers, group(n)).unwrap();
        if let Err(e) = s.sequence.verify() {
            problems.push(format!("n = {n}: not exact: {e}"));
            continue;
        }
        match s.cokernel_orbit {
            Some(q) if s.sequence.right == permutation_lattice(BaseRing::Integers, group(n), &[q]).unwrap() => {}
            _ => {
                let a = rational_orbit_multiplicities(&s.sequence.right).unwrap();
                let negative: Vec<_> = a.iter().filter(|&&(_, k)| k < 0).collect();
                problems.push(if negative.is_empty() {
                    format!("n = {n}: cokernel Z[X]/({}) not recognised as permutation", s.cofactor)
                } else {
                    format!(
                        "n = {n}: cokernel Z[X]/({}) is not permutation (orbit multiplicities {a:?})",
                        s.cofactor
                    )
                });
            }
        }
    }
    if problems.is_empty() {
        pass(format!("{} corpus resolutions verified; explicit sequences for n = 4, 6, 8, 9, 12 exact with permutation cokernel", corpus.len()))
    } else {
        fail(format!("{} corpus resolutions verified; {}", corpus.len(), problems.join("; ")))
    }
}

/// Checks one flabby C_p-lattice against the permutation profile over Z_(p).
fn check_profile(m: &GroupLattice, p: u64, expected: Option<(usize, usize)>) -> Result<(), String> {
    let local = m.with_base(BaseRing::LocalizedAtP { p }).unwrap();
    let d = permutation_recognize_cp(m, p).map_err(|e| e.to_string())?.map_err(|e| format!("{e:?}"))?;
    let whole = local.group().whole();
    let fixed = fixed_sublattice(&local, &whole).unwrap().cols();
    let h0 = tate_zero(&local, &whole).unwrap().invariants;
    let hm1 = tate_minus_one(&local, &whole).unwrap().invariants;
    let p_usize = p as usize;
    if local.z_rank() != d.trivial + p_usize * d.regular {
        return Err(format!("Z-rank {} vs {d:?}", local.z_rank()));
    }
    if fixed != d.trivial + d.regular {
        return Err(format!("fixed rank {fixed} vs {d:?}"));
    }
    if !hm1.is_trivial() {
        return Err(format!("H^-1 = {hm1}"));
    }
    if h0.torsion_order() != BigInt::from(p).pow(d.trivial as u32) {
        return Err(format!("|H^0| = {} vs p^{}", h0.torsion_order(), d.trivial));
    }
    if let Some(e) = expected {
        if (d.trivial, d.regular) != e {
            return Err(format!("{d:?} but built from {e:?}"));
        }
    }
    Ok(())
}

fn criterion_5() -> Check {
    let mut count = 0;
    for (p, cases) in [(2u64, 34), (3, 33), (5, 33)] {
        let g = group(p as usize);
        for i in 0..cases {
            let seed = CORPUS_SEED + 20_000 + p * 100 + i as u64;
            let (m, expected) = if i % 2 == 0 {
                let r = random_permutation_lattice(BaseRing::Integers, g, 1 + i % 8, seed).unwrap();
                let trivial = r.blocks.iter().filter(|b| **b == RandomBlock::Orbit { size: 1 }).count();
                (r.lattice, Some((trivial, r.blocks.len() - trivial)))
            } else {
                let m = random_lattice(BaseRing::Integers, g, 1 + i % 4, seed).unwrap();
                (flabby_resolution(&m).unwrap().outer().clone(), None)
            };
            if let Err(e) = check_profile(&m, p, expected) {
                return fail(format!("p = {p}, case {i}: {e}"));
            }
            count += 1;
        }
    }
    pass(format!("{count} flabby lattices over C_2, C_3, C_5 match the permutation profile"))
}

fn check_example(label: &str, r: &TwistedLineReport, modulus: usize, elapsed: Duration) -> Vec<String> {
    let mut problems = Vec::new();
    if r.h_minus_one_m.blocks != [1] {
        problems.push(format!("{label}: H^-1(M) blocks {:?}, expected [1]", r.h_minus_one_m.blocks));
    }
    if r.h_zero_p.blocks.iter().any(|&b| b != modulus) {
        problems.push(format!("{label}: H^0(P) blocks {:?}, expected all {modulus}", r.h_zero_p.blocks));
    }
    if r.h_zero_e.length % modulus != 1 {
        problems.push(format!(
            "{label}: length of H^0(E) is {} = {} mod {modulus}, expected 1",
            r.h_zero_e.length,
            r.h_zero_e.length % modulus
        ));
    }
    if r.verdict != Verdict::NotInvertible {
        problems.push(format!("{label}: verdict {:?}", r.verdict));
    }
    if elapsed >= EXAMPLE_BUDGET {
        problems.push(format!("{label}: took {elapsed:?}"));
    }
    problems
}

fn criterion_6() -> Check {
    let mut problems = Vec::new();
    let mut timings = Vec::new();
    for p in [3u64, 5] {
        let start = Instant::now();
        let r = twisted_line_counterexample(p).unwrap();
        let elapsed = start.elapsed();
        timings.push(format!("p = {p} in {elapsed:.2?}"));
        problems.extend(check_example(&format!("p = {p}"), &r, p as usize - 1, elapsed));
    }
    let start = Instant::now();
    let r = gaussian_twisted_line_counterexample().unwrap();
    let elapsed = start.elapsed();
    timings.push(format!("Gaussian in {elapsed:.2?}"));
    // R = Z[i], C_2: lengths are taken mod 2
    problems.extend(check_example("Gaussian", &r, 2, elapsed));
    if problems.is_empty() {
        pass(format!("NotInvertible with residue 1 ({})", timings.join(", ")))
    } else {
        fail(format!("{} ({})", problems.join("; "), timings.join(", ")))
    }
}

fn criterion_7() -> Check {
    for n in 1..=40 {
        let r = cyclotomic_order_maximality(n).unwrap();
        let primes: Vec<u64> = r.checks.iter().map(|c| c.p).collect();
        let expected: Vec<u64> = prime_factors(n).into_iter().map(|p| p as u64).collect();
        if primes != expected || !r.checks.iter().all(|c| c.p_maximal) || !r.all_maximal {
            return fail(format!("n = {n}: checks at {primes:?}, maximal {}", r.all_maximal));
        }
    }
    let control = dedekind_criterion(&IntPoly::from_i64(&[3, 0, 1]), 2).unwrap();
    if control.p_maximal {
        return fail("X^2 + 3 reported 2-maximal");
    }
    pass(format!("Phi_n p-maximal at every p | n for n <= 40; X^2 + 3 not 2-maximal (gcd {})", control.gcd))
}

fn criterion_8() -> Check {
    let corpus = full_corpus();
    let mut components = 0;
    for (i, m) in corpus.iter().enumerate() {
        let d = phi_decompose(m).unwrap();
        let weighted: usize = d.components.iter().map(|c| euler_phi(c.d) * c.rank).sum();
        if !d.rank_identity || weighted != m.z_rank() {
            return fail(format!("lattice {i}: sum phi(d) rank = {weighted}, Z-rank {}", m.z_rank()));
        }
        for c in &d.components {
            if DEFAULT_CLASS_NUMBER_ONE.contains(&c.d) && c.steinitz.class != SteinitzClass::Trivial {
                return fail(format!("lattice {i}, d = {}: Steinitz {:?}", c.d, c.steinitz.class));
            }
            components += 1;
        }
    }
    pass(format!("{} lattices, {components} components: rank identity holds, Steinitz data trivial", corpus.len()))
}

fn structured_run(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_flasque"))
        .args(args)
        .args(["--format", "structured"])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {:?}", out.status.code()));
    }
    // everything before the timing field is the deterministic part of the report
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let cut = text.rfind("\"wall_clock_ms\"").ok_or("no timing field")?;
    Ok(text.as_bytes()[..cut].to_vec())
}

fn criterion_9() -> Check {
    let out = Command::new(env!("CARGO_BIN_EXE_flasque"))
        .args(["export", "--builtin", "random:6:5", "--seed", "17", "--format", "structured"])
        .output()
        .unwrap();
    let report: serde_json::Value = match serde_json::from_slice(&out.stdout) {
        Ok(v) => v,
        Err(e) => return fail(format!("export output is not JSON: {e}")),
    };
    let export = std::env::temp_dir().join(format!("flasque-acceptance-{}.json", std::process::id()));
    std::fs::write(&export, serde_json::to_string(&report["results"]).unwrap()).unwrap();
    let file = export.to_str().unwrap().to_string();
    let commands: Vec<Vec<&str>> = vec![
        vec!["cohomology", "--builtin", "random:6:5", "--seed", "11", "--all"],
        vec!["cohomology", &file, "--all"],
        vec!["classify", "--builtin", "random:5:4", "--seed", "2"],
        vec!["classify", &file],
        vec!["resolve", "--builtin", "random:4:4", "--seed", "9"],
        vec!["decompose", "--builtin", "random:12:6", "--seed", "3"],
        vec!["dedekind", "--n", "40"],
        vec!["twisted-line", "--p", "3"],
        vec!["twisted-line", "--gaussian"],
        vec!["export", "--builtin", "random:8:6", "--seed", "5"],
    ];
    let mut problems = Vec::new();
    for args in &commands {
        match (structured_run(args), structured_run(args)) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(_), Ok(_)) => problems.push(format!("{args:?} differs between runs")),
            (Err(e), _) | (_, Err(e)) => problems.push(e),
        }
    }
    let _ = std::fs::remove_file(&export);
    if problems.is_empty() {
        pass(format!("{} commands byte-identical across two runs", commands.len()))
    } else {
        fail(problems.join("; "))
    }
}

type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("H^1 norm route equals periodic resolution route", criterion_1),
        ("flabby and coflabby flags agree", criterion_2),
        ("H^1 of the augmentation ideal is Z/n", criterion_3),
        ("flabby resolution contract and explicit Phi_n sequences", criterion_4),
        ("permutation profile of flabby C_p-lattices over Z_(p)", criterion_5),
        ("twisted line counterexample", criterion_6),
        ("Dedekind criterion for cyclotomic polynomials", criterion_7),
        ("Phi_d rank identity and Steinitz data", criterion_8),
        ("CLI determinism", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| fail("panicked"));
        let status = if v.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!v.pass);
        println!("criterion {} {status} [{name}] {} ({:.2?})", k + 1, v.detail, start.elapsed());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
