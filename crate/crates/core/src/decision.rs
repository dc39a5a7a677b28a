//! Deciding whether `CC(K)_p` has finite index in `S(K)_p`.
//!
//! Two independent routes: a scan over the Sylow subgroup `Γ_p` testing
//! `ψ^{|ψG|}` against cosets of `T(ψ)`, and an oracle comparing `ν` with
//! `β` on every residue class mod `M`.

use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;

use crate::arith;
use crate::context::{PsiProfile, SchurContext};
use crate::error::{Error, Result};
use crate::local::{self, ClassScanner, LocalIndexReport, DEFAULT_CLASS_BOUND};
use crate::residue::{in_coset_union, ResidueSubgroup, UnitClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Finite,
    Infinite,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Finite => "FINITE",
            Verdict::Infinite => "INFINITE",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sufficient criteria that settle the question without a full scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shortcut {
    /// Cyclic case with `t + v_p(exp Gal(K/Q)) ≤ a`.
    SmallExponent,
    /// Cyclic case with `ν(ψ) ≥ min(t, d(ψ))` for all `ψ ∈ Γ_p`.
    NuDominates,
    /// Some `ψ ∈ Γ_p` has `ψ^{|ψG|} ∉ ⟨σ, ρ, T(ψ)⟩`.
    OutsideSpan,
}

impl Shortcut {
    pub fn as_str(self) -> &'static str {
        match self {
            Shortcut::SmallExponent => "small-exponent",
            Shortcut::NuDominates => "nu-dominates",
            Shortcut::OutsideSpan => "outside-span",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Every `ψ ∈ Γ_p` against `⋃ σ^i T(ψ)` (cyclic case).
    FullScan,
    /// Only `ψ` with `ν(ψ) < min(t, d(ψ))` (cyclic case).
    RestrictedScan,
    /// `ψ ∈ Γ_2 ∖ G` against the congruence and `⋃ σ^i ⟨ρ, T(ψ)⟩`.
    Noncyclic,
    Oracle,
    Shortcut(Shortcut),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::FullScan => f.write_str("full-scan"),
            Method::RestrictedScan => f.write_str("restricted-scan"),
            Method::Noncyclic => f.write_str("noncyclic"),
            Method::Oracle => f.write_str("oracle"),
            Method::Shortcut(s) => write!(f, "shortcut/{}", s.as_str()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A failing `ψ ∈ Γ_p` together with `ψ^{|ψG|}`.
    Psi { profile: PsiProfile, power: UnitClass, reason: String },
    /// A class mod `M` with `ν < β`, optionally realized by a prime.
    Class { report: LocalIndexReport, prime: Option<u64> },
    Certificate(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub method: Method,
    pub witness: Option<Witness>,
}

impl Decision {
    fn finite(method: Method) -> Decision {
        Decision { verdict: Verdict::Finite, method, witness: None }
    }

    pub fn witness_psi(&self) -> Option<UnitClass> {
        match &self.witness {
            Some(Witness::Psi { profile, .. }) => Some(profile.psi),
            Some(Witness::Class { report, .. }) => Some(report.psi),
            _ => None,
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.verdict, self.method)?;
        match &self.witness {
            Some(Witness::Psi { profile, power, reason }) => write!(
                f,
                ": psi = {}, |psi G| = {}, d = {}, nu = {}, psi^|psi G| = {}, {}",
                profile.psi.value(),
                profile.ord_mod_g,
                profile.d,
                profile.nu,
                power.value(),
                reason
            ),
            Some(Witness::Class { report, prime }) => {
                write!(f, ": {report}")?;
                if let Some(r) = prime {
                    write!(f, ", realized by r = {r}")?;
                }
                Ok(())
            }
            Some(Witness::Certificate(c)) => write!(f, ": {c}"),
            None => Ok(()),
        }
    }
}

/// `(|ψG|, d(ψ), ν(ψ))` without materializing `T(ψ)`.
fn psi_numbers(ctx: &SchurContext, psi: UnitClass) -> (u64, u32, u32) {
    let ord = ctx.order_mod_g(psi);
    let d = ctx.a.min(ctx.h_value(psi));
    let nu = ctx.a.saturating_sub(arith::vp(ord, ctx.p));
    (ord, d, nu)
}

/// Subgroups keyed by `(ν, d)`, built on first use.
struct SubgroupCache<'a> {
    ctx: &'a SchurContext,
    extra: Vec<u64>,
    map: HashMap<(u32, u32), ResidueSubgroup>,
}

impl<'a> SubgroupCache<'a> {
    fn new(ctx: &'a SchurContext, extra: Vec<u64>) -> Self {
        SubgroupCache { ctx, extra, map: HashMap::new() }
    }

    fn get(&mut self, nu: u32, d: u32) -> &ResidueSubgroup {
        let ctx = self.ctx;
        let extra = &self.extra;
        self.map.entry((nu, d)).or_insert_with(|| {
            let t = ctx.t_subgroup(nu, d);
            if extra.is_empty() {
                t
            } else {
                t.join(extra)
            }
        })
    }
}

fn require_cyclic(ctx: &SchurContext, what: &str) -> Result<()> {
    if !ctx.cyclic_case {
        return Err(Error::Invalid(format!("{what} needs G/C cyclic")));
    }
    Ok(())
}

fn psi_failure(ctx: &SchurContext, psi: UnitClass, power: UnitClass, reason: String) -> Decision {
    Decision {
        verdict: Verdict::Infinite,
        method: Method::FullScan,
        witness: Some(Witness::Psi { profile: ctx.psi_profile(psi), power, reason }),
    }
}

fn cyclic_scan(ctx: &SchurContext, restricted: bool) -> Result<Decision> {
    let method = if restricted { Method::RestrictedScan } else { Method::FullScan };
    require_cyclic(ctx, &method.to_string())?;
    let mut cache = SubgroupCache::new(ctx, Vec::new());
    for psi in ctx.gamma_p()? {
        let (ord, d, nu) = psi_numbers(ctx, psi);
        if restricted && nu >= ctx.t.min(d) {
            continue;
        }
        let power = psi.pow(ord);
        if in_coset_union(power, ctx.sigma, ctx.q, cache.get(nu, d)).is_none() {
            let mut out = psi_failure(ctx, psi, power, "outside every coset sigma^i T(psi)".into());
            out.method = method;
            return Ok(out);
        }
    }
    Ok(Decision::finite(method))
}

/// Tests every `ψ ∈ Γ_p`: `ψ^{|ψG|} ∈ ⋃_{i<q} σ^i T(ψ)`.
pub fn decide_full_scan(ctx: &SchurContext) -> Result<Decision> {
    cyclic_scan(ctx, false)
}

/// Same test, restricted to `ψ` with `ν(ψ) < min(t, d(ψ))`.
pub fn decide_restricted_scan(ctx: &SchurContext) -> Result<Decision> {
    cyclic_scan(ctx, true)
}

/// Non-cyclic `G/C` (so `p^a = 2`): every `ψ ∈ Γ_2 ∖ G` must satisfy
/// `ψ^{|ψG|} ≡ 1 (mod 2^{d+1})` and `ψ^{|ψG|} ∈ ⋃_{i<q} σ^i ⟨ρ, T(ψ)⟩`.
pub fn decide_noncyclic(ctx: &SchurContext) -> Result<Decision> {
    let Some(d_nc) = ctx.d_nc.filter(|_| !ctx.cyclic_case) else {
        return Err(Error::Invalid("noncyclic test needs G/C non-cyclic".into()));
    };
    let level = 1u64 << (d_nc + 1);
    if !ctx.n_f.is_multiple_of(level) {
        return Err(Error::InvariantViolation(format!("2^(d+1) = {level} does not divide n_F = {}", ctx.n_f)));
    }
    let mut cache = SubgroupCache::new(ctx, vec![ctx.rho.value()]);
    for psi in ctx.gamma_p()? {
        if ctx.in_g(psi.value()) {
            continue;
        }
        let (ord, d, nu) = psi_numbers(ctx, psi);
        let power = psi.pow(ord);
        let reason = if power.value() % level != 1 {
            format!("psi^|psi G| is not 1 mod {level}")
        } else if in_coset_union(power, ctx.sigma, ctx.q, cache.get(nu, d)).is_none() {
            "outside every coset sigma^i <rho, T(psi)>".to_string()
        } else {
            continue;
        };
        let mut out = psi_failure(ctx, psi, power, reason);
        out.method = Method::Noncyclic;
        return Ok(out);
    }
    Ok(Decision::finite(Method::Noncyclic))
}

/// The default route: full scan in the cyclic case, the non-cyclic test otherwise.
pub fn decide(ctx: &SchurContext) -> Result<Decision> {
    if !ctx.cyclic_case {
        return decide_noncyclic(ctx);
    }
    let full = decide_full_scan(ctx)?;
    if cfg!(debug_assertions) {
        let restricted = decide_restricted_scan(ctx)?;
        if restricted.verdict != full.verdict {
            return Err(Error::InvariantViolation(format!(
                "full scan says {} but restricted scan says {}",
                full.verdict, restricted.verdict
            )));
        }
    }
    Ok(full)
}

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    pub max_classes: u64,
    /// Realize the failing class by a prime up to this bound.
    pub realize_bound: Option<u64>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { max_classes: DEFAULT_CLASS_BOUND, realize_bound: None }
    }
}

/// `FINITE` iff `ν = β` on every unit class mod `M`.
pub fn oracle_decide(ctx: &SchurContext) -> Result<Decision> {
    oracle_decide_with(ctx, OracleOptions::default())
}

pub fn oracle_decide_with(ctx: &SchurContext, opts: OracleOptions) -> Result<Decision> {
    let scanner = ClassScanner::new(ctx, opts.max_classes)?;
    let mut failure = None;
    scanner.for_each(|report| {
        if report.nu < report.beta {
            failure = Some(*report);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    let Some(report) = failure else {
        return Ok(Decision::finite(Method::Oracle));
    };
    let prime = match (opts.realize_bound, report.source) {
        (Some(bound), local::Source::Class { residue, .. }) => Some(local::realize_class(ctx, residue, 0, bound)?),
        _ => None,
    };
    Ok(Decision { verdict: Verdict::Infinite, method: Method::Oracle, witness: Some(Witness::Class { report, prime }) })
}

/// Cyclic case: `t + v_p(exp Gal(K/Q)) ≤ a`.
pub fn shortcut_small_exponent(ctx: &SchurContext) -> Option<Decision> {
    if !ctx.cyclic_case {
        return None;
    }
    let gal = arith::vp(ctx.field.galois_group_exponent(), ctx.p);
    (ctx.t + gal <= ctx.a).then(|| Decision {
        verdict: Verdict::Finite,
        method: Method::Shortcut(Shortcut::SmallExponent),
        witness: Some(Witness::Certificate(format!("t + v_p(exp Gal(K/Q)) = {} + {} <= a = {}", ctx.t, gal, ctx.a))),
    })
}

/// Cyclic case: `ν(ψ) ≥ min(t, d(ψ))` for every `ψ ∈ Γ_p`.
pub fn shortcut_nu_dominates(ctx: &SchurContext) -> Result<Option<Decision>> {
    if !ctx.cyclic_case {
        return Ok(None);
    }
    for psi in ctx.gamma_p()? {
        let (_, d, nu) = psi_numbers(ctx, psi);
        if nu < ctx.t.min(d) {
            return Ok(None);
        }
    }
    Ok(Some(Decision {
        verdict: Verdict::Finite,
        method: Method::Shortcut(Shortcut::NuDominates),
        witness: Some(Witness::Certificate(format!("nu(psi) >= min(t, d(psi)) on Gamma_p, t = {}", ctx.t))),
    }))
}

/// Some `ψ ∈ Γ_p` with `ψ^{|ψG|} ∉ ⟨σ, ρ, T(ψ)⟩`.
pub fn shortcut_outside_span(ctx: &SchurContext) -> Result<Option<Decision>> {
    let mut cache = SubgroupCache::new(ctx, vec![ctx.sigma.value(), ctx.rho.value()]);
    for psi in ctx.gamma_p()? {
        let (ord, d, nu) = psi_numbers(ctx, psi);
        let power = psi.pow(ord);
        if !cache.get(nu, d).contains_class(power) {
            let mut out = psi_failure(ctx, psi, power, "outside <sigma, rho, T(psi)>".into());
            out.method = Method::Shortcut(Shortcut::OutsideSpan);
            return Ok(Some(out));
        }
    }
    Ok(None)
}

/// Every shortcut that applies.
pub fn all_shortcuts(ctx: &SchurContext) -> Result<Vec<Decision>> {
    let mut out: Vec<Decision> = shortcut_small_exponent(ctx).into_iter().collect();
    out.extend(shortcut_nu_dominates(ctx)?);
    out.extend(shortcut_outside_span(ctx)?);
    Ok(out)
}

/// The first shortcut that applies, if any.
pub fn fast_paths(ctx: &SchurContext) -> Result<Option<Decision>> {
    if let Some(d) = shortcut_small_exponent(ctx) {
        return Ok(Some(d));
    }
    if let Some(d) = shortcut_nu_dominates(ctx)? {
        return Ok(Some(d));
    }
    shortcut_outside_span(ctx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CcEntry {
    pub r: u64,
    pub nu: u32,
    /// `p^ν`, the order of the local part at `r`.
    pub order: u64,
}

/// Local structure of `CC(K)_p`: at odd `r ∤ m` the local part is cyclic of
/// order `p^{ν(r)}`, generated by the class of `(K(ζ_r)/K, ζ_{p^a})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CcReport {
    pub p: u64,
    pub a: u32,
    pub entries: Vec<CcEntry>,
}

impl CcReport {
    pub const UNDETERMINED: [(&'static str, &'static str); 2] = [
        ("2", "undetermined (out of scope); order at most 2"),
        ("infinity", "undetermined (out of scope); exponent at most 2"),
    ];
}

impl fmt::Display for CcReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(
                f,
                "r = {}: cyclic of order {}^{} = {}, generated by (K(zeta_{})/K, zeta_{})",
                e.r,
                self.p,
                e.nu,
                e.order,
                e.r,
                self.p.pow(self.a)
            )?;
        }
        for (place, note) in CcReport::UNDETERMINED {
            writeln!(f, "r = {place}: {note}")?;
        }
        Ok(())
    }
}

pub fn cc_report(ctx: &SchurContext, primes: &[u64]) -> Result<CcReport> {
    let entries = primes
        .iter()
        .map(|&r| {
            let nu = local::nu_r(ctx, r)?;
            Ok(CcEntry { r, nu, order: ctx.p.pow(nu) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CcReport { p: ctx.p, a: ctx.a, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{build_context, BMode};
    use crate::field::{cyclotomic, fixed_field, FieldSpec};

    #[test]
    fn rational_field_is_finite() {
        let ctx = build_context(&FieldSpec::rational(), 2, BMode::Definition).unwrap();
        assert_eq!(decide(&ctx).unwrap().verdict, Verdict::Finite);
        assert_eq!(oracle_decide(&ctx).unwrap().verdict, Verdict::Finite);
    }

    #[test]
    fn cyclotomic_fields_are_finite() {
        for m in [3u64, 4, 5, 7, 8, 9, 12] {
            let k = cyclotomic(m).unwrap();
            for p in [2u64, 3, 5, 7] {
                if !k.contains_root_of_unity(p) {
                    continue;
                }
                let ctx = build_context(&k, p, BMode::Definition).unwrap();
                assert_eq!(decide(&ctx).unwrap().verdict, Verdict::Finite, "m = {m}, p = {p}");
                assert_eq!(oracle_decide(&ctx).unwrap().verdict, Verdict::Finite, "m = {m}, p = {p}");
            }
        }
    }

    #[test]
    fn simple_example_is_infinite() {
        let k = fixed_field(57, &[7]).unwrap();
        let ctx = build_context(&k, 3, BMode::Definition).unwrap();
        let full = decide_full_scan(&ctx).unwrap();
        assert_eq!(full.verdict, Verdict::Infinite);
        let Some(Witness::Psi { profile, .. }) = &full.witness else { panic!("missing witness") };
        assert_eq!((profile.nu, profile.d), (0, 1));
        assert!(profile.t_group.is_trivial());
        assert_eq!(decide_restricted_scan(&ctx).unwrap().verdict, Verdict::Infinite);
        assert_eq!(oracle_decide(&ctx).unwrap().verdict, Verdict::Infinite);
        let fast = fast_paths(&ctx).unwrap().unwrap();
        assert_eq!(fast.method, Method::Shortcut(Shortcut::OutsideSpan));
    }

    #[test]
    fn sqrt2_example_is_infinite_in_both_modes() {
        let k = FieldSpec::new(56, &[15]).unwrap();
        for mode in [BMode::Example, BMode::Definition] {
            let ctx = build_context(&k, 2, mode).unwrap();
            assert_eq!(decide(&ctx).unwrap().verdict, Verdict::Infinite);
            let oracle = oracle_decide_with(&ctx, OracleOptions { realize_bound: Some(1 << 30), ..Default::default() })
                .unwrap();
            assert_eq!(oracle.verdict, Verdict::Infinite);
            let Some(Witness::Class { prime: Some(r), .. }) = oracle.witness else { panic!("no realized prime") };
            assert!(local::local_report(&ctx, r).unwrap().nu < local::local_report(&ctx, r).unwrap().beta);
        }
    }

    #[test]
    fn preconditions_are_enforced() {
        let k = FieldSpec::new(56, &[15]).unwrap();
        let ctx = build_context(&k, 2, BMode::Example).unwrap();
        assert!(decide_full_scan(&ctx).is_err());
        let k = fixed_field(57, &[7]).unwrap();
        let ctx = build_context(&k, 3, BMode::Definition).unwrap();
        assert!(decide_noncyclic(&ctx).is_err());
    }

    #[test]
    fn cc_orders_over_rationals() {
        let ctx = build_context(&FieldSpec::rational(), 2, BMode::Definition).unwrap();
        let report = cc_report(&ctx, &[3, 5, 7, 11]).unwrap();
        // over Q every odd r has f_r = 1, so ν = a = 1
        assert!(report.entries.iter().all(|e| e.nu == 1 && e.order == 2));
        assert!(cc_report(&ctx, &[2]).is_err());
    }
}
