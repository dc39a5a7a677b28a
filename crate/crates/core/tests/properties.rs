use proptest::prelude::*;

use schurcc::arith::{self, gcd, pow_mod};
use schurcc::context::{build_context, build_context_with, BMode, ContextOptions, ScanOrder};
use schurcc::corpus::check_decompositions;
use schurcc::decision::{self, Verdict};
use schurcc::field::{normalize, parse_inline_field, FieldSpec};
use schurcc::fixtures::valid_primes;
use schurcc::local::{self, ClassScanner, DEFAULT_CLASS_BOUND};
use schurcc::residue::{
    complement_of_cyclic, element_order, order_mod_subgroup, power_subgroup, unit_group, units, ResidueSubgroup,
    UnitClass,
};

fn brute_order(x: UnitClass) -> u64 {
    let mut y = x;
    let mut k = 1;
    while !y.is_identity() {
        y = y * x;
        k += 1;
    }
    k
}

fn units_from(n: u64, picks: &[u64]) -> Vec<u64> {
    picks.iter().map(|&x| x % n).filter(|&x| gcd(x, n) == 1).collect()
}

/// `⟨r⟩` is a direct factor of `C` iff it is pure: `⟨r⟩ ∩ C^k = ⟨r⟩^k` for every `k`.
fn is_pure(c: &ResidueSubgroup, r: UnitClass) -> bool {
    let cyclic = ResidueSubgroup::from_generators(c.modulus(), &[r.value()]).unwrap();
    let exp = c.exponent();
    (1..=exp).filter(|k| exp.is_multiple_of(*k)).all(|k| {
        cyclic.intersection(&power_subgroup(c, k)) == power_subgroup(&cyclic, k)
    })
}

fn field_strategy(max_m: u64) -> impl Strategy<Value = FieldSpec> {
    (1..=max_m, prop::collection::vec(0u64..10_000, 0..3)).prop_map(|(m, picks)| {
        let m = if m % 4 == 2 { m / 2 } else { m };
        let gens = units_from(m, &picks);
        FieldSpec::new(m, &gens).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pow_mod_matches_repeated_multiplication(x in 0u64..1000, e in 0u64..60, n in 1u64..5000) {
        let mut acc = 1 % n;
        for _ in 0..e {
            acc = acc * (x % n) % n;
        }
        prop_assert_eq!(pow_mod(x, e, n), acc);
    }

    #[test]
    fn crt_solves_both_congruences(a in 0u64..500, m in 1u64..500, b in 0u64..500, n in 1u64..500) {
        match arith::crt(a, m, b, n) {
            Some(x) => {
                prop_assert_eq!(x % m, a % m);
                prop_assert_eq!(x % n, b % n);
                prop_assert!(x < arith::lcm(m, n));
            }
            None => prop_assert!((0..arith::lcm(m, n)).all(|x| x % m != a % m || x % n != b % n)),
        }
    }

    #[test]
    fn element_order_matches_brute_force(n in 2u64..3000, x in 1u64..3000) {
        prop_assume!(gcd(x % n, n) == 1);
        let c = UnitClass::new(n, x % n).unwrap();
        prop_assert_eq!(element_order(c), brute_order(c));
    }

    #[test]
    fn unit_group_enumeration_is_a_bijection(n in 1u64..4000) {
        let group = unit_group(n);
        let mut elems = group.elements_by_exponents(u64::MAX).unwrap();
        prop_assert_eq!(elems.len() as u64, arith::euler_phi(n));
        elems.sort_unstable();
        prop_assert_eq!(elems, units(n).collect::<Vec<_>>());
    }

    #[test]
    fn order_modulo_subgroup_matches_brute_force(n in 2u64..400, picks in prop::collection::vec(0u64..400, 1..3), x in 1u64..400) {
        prop_assume!(gcd(x % n, n) == 1);
        let h = ResidueSubgroup::from_generators(n, &units_from(n, &picks)).unwrap();
        let x = UnitClass::new(n, x % n).unwrap();
        let mut k = 1;
        let mut y = x;
        while !h.contains_class(y) {
            y = y * x;
            k += 1;
        }
        prop_assert_eq!(order_mod_subgroup(x, &h), k);
    }

    #[test]
    fn complement_of_cyclic_agrees_with_purity(n in 2u64..3000, picks in prop::collection::vec(0u64..3000, 1..4), r_pick in 0usize..1000) {
        let c = ResidueSubgroup::from_generators(n, &units_from(n, &picks)).unwrap();
        let r = UnitClass::new(n, c.elements()[r_pick % c.elements().len()]).unwrap();
        match complement_of_cyclic(&c, r).unwrap() {
            Some(b) => {
                let cyclic = ResidueSubgroup::from_generators(n, &[r.value()]).unwrap();
                prop_assert_eq!(b.order() * cyclic.order(), c.order());
                prop_assert!(b.intersection(&cyclic).is_trivial());
                prop_assert_eq!(b.join(&[r.value()]), c.clone());
                prop_assert!(is_pure(&c, r));
            }
            None => prop_assert!(!is_pure(&c, r)),
        }
    }

    #[test]
    fn normalization_ignores_redundant_conductor(field in field_strategy(60), k in 1u64..4) {
        let m = field.conductor();
        let big = m * k;
        let lifted = field.subgroup().preimage(big, u64::MAX).unwrap();
        prop_assert_eq!(normalize(big, &lifted).unwrap(), field);
    }

    #[test]
    fn inline_form_round_trips(field in field_strategy(80)) {
        let gens: Vec<String> = field.subgroup().generators().iter().map(|g| g.to_string()).collect();
        let text = format!("{}:{}", field.conductor(), gens.join(","));
        prop_assert_eq!(parse_inline_field(&text).unwrap(), field);
    }

    #[test]
    fn smallest_prime_in_class(u in 0u64..300, m in 1u64..300) {
        prop_assume!(gcd(u, m) == 1);
        let bound = 20_000;
        let expected = (0..=bound).find(|&x| x % m == u % m && arith::is_prime(x));
        prop_assert_eq!(local::find_prime_in_class(u, m, bound).ok(), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn decision_routes_agree(field in field_strategy(72), mode in prop_oneof![Just(BMode::Definition), Just(BMode::Example)]) {
        for p in valid_primes(&field) {
            let ctx = build_context(&field, p, mode).unwrap();
            prop_assert!(ctx.check_invariants().is_empty());
            prop_assert_eq!(check_decompositions(&ctx).unwrap(), ctx.g.order());
            let main = decision::decide(&ctx).unwrap();
            prop_assert_eq!(decision::oracle_decide(&ctx).unwrap().verdict, main.verdict);
            if ctx.cyclic_case {
                prop_assert_eq!(decision::decide_restricted_scan(&ctx).unwrap().verdict, main.verdict);
            }
            for s in decision::all_shortcuts(&ctx).unwrap() {
                prop_assert_eq!(s.verdict, main.verdict);
            }
            if main.verdict == Verdict::Infinite {
                prop_assert!(main.witness_psi().is_some());
            }
        }
    }

    #[test]
    fn verdict_is_independent_of_scan_order(field in field_strategy(72)) {
        for p in valid_primes(&field) {
            let up = build_context(&field, p, BMode::Definition).unwrap();
            let opts = ContextOptions { scan_order: ScanOrder::Descending, ..ContextOptions::default() };
            let down = build_context_with(&field, p, opts).unwrap();
            prop_assert_eq!(decision::decide(&up).unwrap().verdict, decision::decide(&down).unwrap().verdict);
        }
    }

    #[test]
    fn local_data_depends_only_on_the_class(field in field_strategy(60), pick in 0usize..10_000) {
        for p in valid_primes(&field) {
            let ctx = build_context(&field, p, BMode::Definition).unwrap();
            let scanner = ClassScanner::new(&ctx, DEFAULT_CLASS_BOUND).unwrap();
            let classes: Vec<u64> = units(scanner.modulus()).collect();
            let u = classes[pick % classes.len()];
            let class = scanner.report(u).unwrap();
            prop_assert!(class.nu <= class.beta);
            for skip in 0..2 {
                let r = local::realize_class(&ctx, u, skip, 1 << 40).unwrap();
                let rep = local::local_report(&ctx, r).unwrap();
                prop_assert!(class.same_local_data(&rep), "{} vs {}", class, rep);
                if p != 2 && (r - 1).is_multiple_of(p) {
                    prop_assert_eq!(rep.nu_diag, Some(rep.nu));
                }
            }
        }
    }

    #[test]
    fn witness_is_the_least_failing_psi(field in field_strategy(72)) {
        for p in valid_primes(&field) {
            let ctx = build_context(&field, p, BMode::Definition).unwrap();
            if !ctx.cyclic_case {
                continue;
            }
            let d = decision::decide_full_scan(&ctx).unwrap();
            if let Some(w) = d.witness_psi() {
                // every smaller element of Γ_p passes
                for psi in ctx.gamma_p().unwrap().into_iter().take_while(|&x| x < w) {
                    let prof = ctx.psi_profile(psi);
                    let power = psi.pow(prof.ord_mod_g);
                    prop_assert!(schurcc::residue::in_coset_union(power, ctx.sigma, ctx.q, &prof.t_group).is_some());
                }
            }
        }
    }
}

