//! Worked examples with known answers, and the checks the `examples`
//! subcommand runs against them.

use crate::arith::{self, is_prime};
use crate::context::{build_context, BMode, SchurContext};
use crate::decision::{self, Shortcut, Method, Verdict};
use crate::error::{Error, Result};
use crate::field::{compositum, cyclotomic, fixed_field, index_p_subfield, FieldSpec};
use crate::local;
use crate::residue::{element_order, UnitClass};

/// Conductors of the cyclotomic fixtures.
pub const CYCLOTOMIC_CONDUCTORS: [u64; 10] = [3, 4, 5, 7, 8, 9, 12, 15, 16, 20];

/// Primes `p` with `ζ_p ∈ K`, ascending.
pub fn valid_primes(field: &FieldSpec) -> Vec<u64> {
    let mut out = vec![2];
    out.extend(arith::prime_divisors(field.conductor()).into_iter().filter(|&p| p != 2 && field.contains_root_of_unity(p)));
    out
}

/// `K ⊂ Q(ζ_{pq})` of index `p`, containing `Q(ζ_p)`, for `p = 3, q = 19`.
pub fn simple_example() -> Result<FieldSpec> {
    Ok(fixed_field(57, &[7])?.with_name("index-3 subfield of Q(zeta_57)"))
}

/// `Q(ζ_7, √2)`, conductor 56.
pub fn sqrt2_example() -> Result<FieldSpec> {
    Ok(FieldSpec::new(56, &[15])?.with_name("Q(zeta_7, sqrt 2)"))
}

/// Smallest prime `r ≡ 5 (mod 64)` with `r² ≡ 1 (mod 7)`.
pub fn sqrt2_example_prime() -> u64 {
    (0..).map(|i| 5 + 64 * i).find(|&r| is_prime(r) && r * r % 7 == 1).expect("infinitely many")
}

/// Smallest prime `q` with `v_p(q − 1) = 2`.
pub fn smallest_q(p: u64) -> u64 {
    (3..).find(|&q| is_prime(q) && arith::vp(q - 1, p) == 2).expect("infinitely many")
}

/// Smallest prime `r` with `r ≡ 1 + p² (mod p³)` and `r ≡ k + q (mod q²)` for some
/// `k` of order `p²` modulo `q²`.
pub fn smallest_r(p: u64, q: u64, bound: u64) -> Result<u64> {
    let q2 = q * q;
    let p2 = p * p;
    let p3 = p2 * p;
    let modulus = p3;
    let start = 1 + p2;
    let admissible = |r: u64| {
        let k = (r % q2 + q2 - q) % q2;
        arith::gcd(k, q) == 1 && element_order(UnitClass::raw(q2, k)) == p2
    };
    local::primes_in_class(start, modulus, bound)
        .find(|&r| admissible(r))
        .ok_or(Error::PrimeNotFound { residue: start, modulus, bound })
}

/// Compositum of the index-`p` subfields of `Q(ζ_{p²q})` and `Q(ζ_{p²r})` over `Q(ζ_{p²})`.
pub fn finite_nontrivial(p: u64, q: u64, r: u64) -> Result<FieldSpec> {
    let k1 = index_p_subfield(p * p * q, p)?;
    let k2 = index_p_subfield(p * p * r, p)?;
    Ok(compositum(&k1, &k2)?.with_name(format!("finite nontrivial example, p = {p}, q = {q}, r = {r}")))
}

/// The outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Check {
        Check { name: name.to_string(), passed, detail }
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn expect<T: PartialEq + std::fmt::Debug>(&mut self, name: &str, got: T, want: T) {
        let passed = got == want;
        self.0.push(Check::new(name, passed, format!("got {got:?}, expected {want:?}")));
    }

    fn verdicts(&mut self, name: &str, ctx: &SchurContext, want: Verdict) -> Result<()> {
        let main = decision::decide(ctx)?;
        let oracle = decision::oracle_decide(ctx)?;
        self.expect(&format!("{name}: decision"), main.verdict, want);
        self.expect(&format!("{name}: oracle"), oracle.verdict, want);
        Ok(())
    }
}

/// Runs every fixture and reports each assertion.
pub fn run_all() -> Result<Vec<Check>> {
    let mut c = Checks(Vec::new());

    let ctx = build_context(&FieldSpec::rational(), 2, BMode::Definition)?;
    c.verdicts("Q, p = 2", &ctx, Verdict::Finite)?;

    for m in CYCLOTOMIC_CONDUCTORS {
        let k = cyclotomic(m)?;
        for p in valid_primes(&k) {
            let ctx = build_context(&k, p, BMode::Definition)?;
            c.verdicts(&format!("Q(zeta_{m}), p = {p}"), &ctx, Verdict::Finite)?;
        }
    }

    let k = simple_example()?;
    let ctx = build_context(&k, 3, BMode::Definition)?;
    c.expect("simple example: |G|", ctx.g.order(), 9);
    c.expect("simple example: exp G", ctx.g.exponent(), 3);
    c.expect("simple example: a", ctx.a, 1);
    c.expect("simple example: n_F", ctx.n_f, 171);
    c.verdicts("simple example", &ctx, Verdict::Infinite)?;
    c.expect(
        "simple example: shortcut",
        decision::shortcut_outside_span(&ctx)?.map(|d| (d.verdict, d.method)),
        Some((Verdict::Infinite, Method::Shortcut(Shortcut::OutsideSpan))),
    );

    let (p, q) = (3, smallest_q(3));
    let r = smallest_r(p, q, 1 << 32)?;
    let k = finite_nontrivial(p, q, r)?;
    let ctx = build_context(&k, p, BMode::Definition)?;
    c.expect("finite nontrivial: q", q, 19);
    c.expect("finite nontrivial: a", ctx.a, 2);
    c.expect("finite nontrivial: n_F", ctx.n_f, p.pow(4) * q * r);
    c.expect("finite nontrivial: t", ctx.t, 1);
    c.expect("finite nontrivial: v_p(exp Gal)", arith::vp(k.galois_group_exponent(), p), 1);
    c.expect(
        "finite nontrivial: shortcut",
        decision::shortcut_small_exponent(&ctx).map(|d| d.verdict),
        Some(Verdict::Finite),
    );
    c.verdicts("finite nontrivial", &ctx, Verdict::Finite)?;
    c.expect("finite nontrivial: nu at r", local::ramification_nu(&ctx, r)?.nu, 0);

    let k = sqrt2_example()?;
    let r = sqrt2_example_prime();
    let ctx = build_context(&k, 2, BMode::Example)?;
    c.expect("sqrt 2 example: n_F", ctx.n_f, 448);
    c.expect("sqrt 2 example: |C|", ctx.c.order(), 1);
    c.expect("sqrt 2 example: d", ctx.d_nc, Some(3));
    let rep = local::local_report(&ctx, r)?;
    let dec = ctx.decompose_g(rep.psi.pow(2))?;
    c.expect("sqrt 2 example: decomposition of psi_r^2", (dec.j_prime, dec.j, dec.eta.value()), (0, 3, 1));
    c.expect("sqrt 2 example: (nu, beta)", (rep.nu, rep.beta), (0, 1));
    c.verdicts("sqrt 2 example (example mode)", &ctx, Verdict::Infinite)?;
    let ctx = build_context(&k, 2, BMode::Definition)?;
    c.verdicts("sqrt 2 example (definition mode)", &ctx, Verdict::Infinite)?;

    Ok(c.0)
}
