//! End-to-end acceptance checks, one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use schurcc::arith::{self, gcd};
use schurcc::context::{build_context, BMode, SchurContext};
use schurcc::corpus::{run_corpus, CheckKind, CorpusOptions, CorpusSummary};
use schurcc::decision::{self, Verdict};
use schurcc::field::{cyclotomic, FieldSpec};
use schurcc::fixtures::{self, valid_primes, CYCLOTOMIC_CONDUCTORS};
use schurcc::local::{self, ClassScanner, DEFAULT_CLASS_BOUND};
use schurcc::residue::{complement_of_cyclic, power_subgroup, unit_group, units, ResidueSubgroup, UnitClass};

type Outcome = Result<String, String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn both_routes(ctx: &SchurContext) -> Result<(Verdict, Verdict), String> {
    let main = decision::decide(ctx).map_err(fail)?.verdict;
    let oracle = decision::oracle_decide(ctx).map_err(fail)?.verdict;
    Ok((main, oracle))
}

fn rational() -> Outcome {
    let ctx = build_context(&FieldSpec::rational(), 2, BMode::Definition).map_err(fail)?;
    let (main, oracle) = both_routes(&ctx)?;
    ensure(main == Verdict::Finite && oracle == Verdict::Finite, || format!("got {main} / {oracle}"))?;
    Ok("K = Q, p = 2: FINITE by decision and oracle".into())
}

fn cyclotomic_list() -> Outcome {
    let mut cases = 0;
    for m in CYCLOTOMIC_CONDUCTORS {
        let k = cyclotomic(m).map_err(fail)?;
        for p in valid_primes(&k) {
            let ctx = build_context(&k, p, BMode::Definition).map_err(fail)?;
            let (main, oracle) = both_routes(&ctx)?;
            ensure(main == Verdict::Finite && oracle == Verdict::Finite, || {
                format!("Q(zeta_{m}), p = {p}: {main} / {oracle}")
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (m, p) pairs FINITE by decision and oracle"))
}

fn simple_example() -> Outcome {
    let k = fixtures::simple_example().map_err(fail)?;
    let ctx = build_context(&k, 3, BMode::Definition).map_err(fail)?;
    ensure(ctx.g.order() == 9 && ctx.g.exponent() == 3, || {
        format!("|G| = {}, exp G = {}", ctx.g.order(), ctx.g.exponent())
    })?;
    ensure(ctx.a == 1 && ctx.n_f == 171, || format!("a = {}, n_F = {}", ctx.a, ctx.n_f))?;
    let gamma = ctx.gamma_p().map_err(fail)?;
    let psi = gamma
        .iter()
        .map(|&x| ctx.psi_profile(x))
        .find(|prof| prof.nu == 0 && prof.d == 1 && prof.t_group.is_trivial())
        .ok_or("no psi with nu = 0, d = 1, T = {1}")?;
    let full = decision::decide_full_scan(&ctx).map_err(fail)?;
    let restricted = decision::decide_restricted_scan(&ctx).map_err(fail)?;
    let shortcut = decision::shortcut_outside_span(&ctx).map_err(fail)?.ok_or("outside-span shortcut did not fire")?;
    let oracle = decision::oracle_decide(&ctx).map_err(fail)?;
    for d in [&full, &restricted, &shortcut, &oracle] {
        ensure(d.verdict == Verdict::Infinite, || format!("{} says {}", d.method, d.verdict))?;
    }
    Ok(format!(
        "|G| = 9 elementary abelian, n_F = 171, psi = {} has nu = 0, d = 1, T = 1; INFINITE by all four routes",
        psi.psi.value()
    ))
}

fn finite_nontrivial() -> Outcome {
    let (p, q) = (3, fixtures::smallest_q(3));
    let r = fixtures::smallest_r(p, q, 1 << 32).map_err(fail)?;
    let k = fixtures::finite_nontrivial(p, q, r).map_err(fail)?;
    let ctx = build_context(&k, p, BMode::Definition).map_err(fail)?;
    let gal = arith::vp(k.galois_group_exponent(), p);
    ensure(ctx.a == 2 && ctx.n_f == 81 * q * r && ctx.t == 1 && gal == 1, || {
        format!("a = {}, n_F = {}, t = {}, v_p(exp Gal) = {gal}", ctx.a, ctx.n_f, ctx.t)
    })?;
    let shortcut = decision::shortcut_small_exponent(&ctx).ok_or("small-exponent shortcut did not fire")?;
    let full = decision::decide_full_scan(&ctx).map_err(fail)?;
    let restricted = decision::decide_restricted_scan(&ctx).map_err(fail)?;
    let oracle = decision::oracle_decide(&ctx).map_err(fail)?;
    for d in [&shortcut, &full, &restricted, &oracle] {
        ensure(d.verdict == Verdict::Finite, || format!("{} says {}", d.method, d.verdict))?;
    }
    let nu = local::ramification_nu(&ctx, r).map_err(fail)?.nu;
    ensure(nu == 0, || format!("nu at r = {r} is {nu}"))?;
    Ok(format!("q = {q}, r = {r}, n_F = {}: FINITE by shortcut, both scans and oracle; nu(r) = 0", ctx.n_f))
}

fn sqrt2_example() -> Outcome {
    let k = fixtures::sqrt2_example().map_err(fail)?;
    let r = fixtures::sqrt2_example_prime();
    let ctx = build_context(&k, 2, BMode::Example).map_err(fail)?;
    ensure(ctx.n_f == 448 && ctx.c.is_trivial() && ctx.d_nc == Some(3), || {
        format!("n_F = {}, |C| = {}, d = {:?}", ctx.n_f, ctx.c.order(), ctx.d_nc)
    })?;
    let psi = local::frobenius(&ctx, r).map_err(fail)?;
    let dec = ctx.decompose_g(psi.pow(2)).map_err(fail)?;
    ensure((dec.j_prime, dec.j, dec.eta.value()) == (0, 3, 1), || format!("decomposition {dec}"))?;
    let rep = local::local_report(&ctx, r).map_err(fail)?;
    ensure(rep.nu == 0 && rep.beta == 1, || format!("nu = {}, beta = {}", rep.nu, rep.beta))?;
    for mode in [BMode::Example, BMode::Definition] {
        let ctx = build_context(&k, 2, mode).map_err(fail)?;
        let (main, oracle) = both_routes(&ctx)?;
        ensure(main == Verdict::Infinite && oracle == Verdict::Infinite, || {
            format!("{} mode: {main} / {oracle}", mode.as_str())
        })?;
    }
    Ok(format!("r = {r}: psi_r^2 = (0, 3, 1), nu = 0, beta = 1; INFINITE in both b modes"))
}

fn corpus_equivalence(sum: &CorpusSummary) -> Outcome {
    let bad = sum.violations_of(&[CheckKind::DecisionVsOracle, CheckKind::FullVsRestricted, CheckKind::Failure]);
    ensure(bad.is_empty(), || format!("{} mismatches, first: {}", bad.len(), bad[0]))?;
    ensure(sum.skipped.is_empty(), || format!("{} cases skipped: {}", sum.skipped.len(), sum.skipped[0]))?;
    ensure(sum.oracle_comparisons > 0 && sum.restricted_scan_comparisons > 0, || "nothing compared".into())?;
    Ok(format!(
        "{} fields, {} contexts: decision = oracle everywhere, {} full/restricted comparisons agree",
        sum.fields, sum.contexts, sum.restricted_scan_comparisons
    ))
}

/// Every class of a small context realized by two primes.
fn exhaustive_two_prime_check(ctx: &SchurContext) -> Result<usize, String> {
    let scanner = ClassScanner::new(ctx, DEFAULT_CLASS_BOUND).map_err(fail)?;
    let mut n = 0;
    for u in units(scanner.modulus()) {
        let class = scanner.report(u).map_err(fail)?;
        for skip in 0..2 {
            let r = local::realize_class(ctx, u, skip, 1 << 40).map_err(fail)?;
            let rep = local::local_report(ctx, r).map_err(fail)?;
            ensure(class.same_local_data(&rep), || format!("{class} vs {rep}"))?;
            ensure(rep.nu <= rep.beta, || format!("nu > beta at {r}"))?;
            if ctx.p != 2 && (r - 1) % ctx.p == 0 {
                ensure(rep.nu_diag == Some(rep.nu), || format!("diagnostic differs at {r}"))?;
            }
            n += 1;
        }
    }
    Ok(n)
}

fn local_properties(sum: &CorpusSummary) -> Outcome {
    let bad = sum.violations_of(&[CheckKind::LocalIndex]);
    ensure(bad.is_empty(), || format!("{} violations, first: {}", bad.len(), bad[0]))?;
    ensure(sum.classes_scanned > 0 && sum.primes_realized > 0 && sum.diagnostic_matches > 0, || {
        "corpus produced no local data".into()
    })?;
    let mut small: Vec<(FieldSpec, u64, BMode)> = vec![(FieldSpec::rational(), 2, BMode::Definition)];
    for m in CYCLOTOMIC_CONDUCTORS {
        let k = cyclotomic(m).map_err(fail)?;
        small.extend(valid_primes(&k).into_iter().map(|p| (k.clone(), p, BMode::Definition)));
    }
    small.push((fixtures::simple_example().map_err(fail)?, 3, BMode::Definition));
    small.push((fixtures::sqrt2_example().map_err(fail)?, 2, BMode::Example));
    small.push((fixtures::sqrt2_example().map_err(fail)?, 2, BMode::Definition));
    let mut realized = 0;
    for (k, p, mode) in &small {
        let ctx = build_context(k, *p, *mode).map_err(fail)?;
        realized += exhaustive_two_prime_check(&ctx)?;
    }
    Ok(format!(
        "{} classes with nu <= beta; {} corpus primes and {realized} fixture primes agree with their class; \
         {} lifting-regime diagnostics match",
        sum.classes_scanned, sum.primes_realized, sum.diagnostic_matches
    ))
}

fn is_pure(c: &ResidueSubgroup, r: UnitClass) -> bool {
    let cyclic = ResidueSubgroup::from_generators(c.modulus(), &[r.value()]).expect("cyclic subgroup");
    let exp = c.exponent();
    (1..=exp)
        .filter(|k| exp.is_multiple_of(*k))
        .all(|k| cyclic.intersection(&power_subgroup(c, k)) == power_subgroup(&cyclic, k))
}

fn algebra_layer(sum: &CorpusSummary) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5c0c);
    let mut instances = 0;
    let mut with_complement = 0;
    while instances < 1000 {
        let n = rng.gen_range(3..20_000u64);
        let gens: Vec<u64> =
            (0..rng.gen_range(1..4)).map(|_| rng.gen_range(1..n)).filter(|&x| gcd(x, n) == 1).collect();
        let c = ResidueSubgroup::from_generators(n, &gens).map_err(fail)?;
        if c.order() > 4096 {
            continue;
        }
        let r = UnitClass::new(n, c.elements()[rng.gen_range(0..c.elements().len())]).map_err(fail)?;
        let pure = is_pure(&c, r);
        match complement_of_cyclic(&c, r).map_err(fail)? {
            Some(b) => {
                let cyclic = ResidueSubgroup::from_generators(n, &[r.value()]).map_err(fail)?;
                ensure(b.order() * cyclic.order() == c.order(), || format!("order mismatch for {r}"))?;
                ensure(b.intersection(&cyclic).is_trivial(), || format!("B meets <{r}>"))?;
                ensure(b.join(&[r.value()]) == c, || format!("B<{r}> != C"))?;
                ensure(pure, || format!("complement returned for a non-summand {r}"))?;
                with_complement += 1;
            }
            None => ensure(!pure, || format!("no complement found for the summand <{r}>"))?,
        }
        instances += 1;
    }
    let bad = sum.violations_of(&[CheckKind::Decomposition]);
    ensure(bad.is_empty(), || format!("decomposition failure: {}", bad[0]))?;
    ensure(sum.elements_decomposed > 0, || "no decompositions checked".into())?;
    for n in 1..=10_000u64 {
        let mut elems = unit_group(n).elements_by_exponents(u64::MAX).map_err(fail)?;
        elems.sort_unstable();
        ensure(elems.iter().copied().eq(units(n)), || format!("unit group of {n} is not enumerated bijectively"))?;
    }
    Ok(format!(
        "1000 complement instances ({with_complement} with a complement), {} elements recomposed, unit groups n <= 10^4",
        sum.elements_decomposed
    ))
}

struct Runner {
    failures: usize,
}

impl Runner {
    fn run(&mut self, id: u32, limit: Duration, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > limit => Err(format!("{msg}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("criterion {id}: PASS ({elapsed:.2?}) {msg}"),
            Err(msg) => {
                self.failures += 1;
                println!("criterion {id}: FAIL ({elapsed:.2?}) {msg}");
            }
        }
    }
}

fn main() -> ExitCode {
    let mut runner = Runner { failures: 0 };
    runner.run(1, Duration::from_secs(1), rational);
    runner.run(2, Duration::from_secs(10), cyclotomic_list);
    runner.run(3, Duration::from_secs(5), simple_example);
    runner.run(4, Duration::from_secs(60), finite_nontrivial);
    runner.run(5, Duration::from_secs(10), sqrt2_example);

    let mut summary = None;
    runner.run(6, Duration::from_secs(15 * 60), || {
        let sum = run_corpus(&CorpusOptions { max_conductor: 120, ..CorpusOptions::default() }).map_err(fail)?;
        let out = corpus_equivalence(&sum);
        summary = Some(sum);
        out
    });
    let Some(sum) = summary else {
        println!("criterion 7: FAIL corpus unavailable");
        println!("criterion 8: FAIL corpus unavailable");
        return ExitCode::FAILURE;
    };
    runner.run(7, Duration::from_secs(15 * 60), || local_properties(&sum));
    runner.run(8, Duration::from_secs(15 * 60), || algebra_layer(&sum));

    if runner.failures == 0 {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", runner.failures);
        ExitCode::FAILURE
    }
}
