//! Local data at odd primes `r ∤ m`: the Frobenius `ψ_r ∈ Γ`, the residue
//! degree `f_r`, and the local index exponents `ν(r) ≤ β(r)`.
//!
//! Both exponents depend only on `ψ_r` and `d(r) = min(a, v_p(r−1))`, so the
//! whole picture is captured by the unit classes modulo
//! `M = lcm(m, p^{a+b+1})`.

use std::fmt;
use std::ops::ControlFlow;

use crate::arith::{self, gcd, pow_mod};
use crate::context::{Decomposition, SchurContext};
use crate::error::{Error, Result};
use crate::residue::{order_dividing, order_mod_subgroup, units, UnitClass};

/// Default cap on the number of classes mod `M` a scan may visit.
pub const DEFAULT_CLASS_BOUND: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Prime(u64),
    Class { residue: u64, modulus: u64 },
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Prime(r) => write!(f, "prime {r}"),
            Source::Class { residue, modulus } => write!(f, "class {residue} mod {modulus}"),
        }
    }
}

/// Which half of the local index formula produced `β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    /// `G/C` non-cyclic and `j ≢ j' (mod 2)`: `β = 1`.
    NoncyclicParity,
    /// `β = max(ν, v_p(|η B^{p^d}|))`.
    Generic,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::NoncyclicParity => "noncyclic-parity",
            CaseTag::Generic => "generic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalIndexReport {
    pub source: Source,
    /// `ψ_r` as a class mod `n_F`.
    pub psi: UnitClass,
    /// Order of `ψ_r` modulo `G`.
    pub f_r: u64,
    /// `v_p(f_r)`.
    pub f: u32,
    pub d: u32,
    pub nu: u32,
    pub beta: u32,
    /// `φ_r = ψ_r^{f_r} = ρ^{j'} σ^j η`.
    pub decomposition: Decomposition,
    pub case_tag: CaseTag,
    /// `ν` from the ramification/roots-of-unity formula (actual primes only).
    pub nu_diag: Option<u32>,
    /// `v_p(|W(K_r)|) − a` (actual primes only).
    pub a_r: Option<u32>,
}

impl LocalIndexReport {
    /// Agreement on everything that is a function of `(ψ_r, d(r))`.
    pub fn same_local_data(&self, other: &LocalIndexReport) -> bool {
        self.psi == other.psi
            && self.f_r == other.f_r
            && self.f == other.f
            && self.d == other.d
            && self.nu == other.nu
            && self.beta == other.beta
            && self.decomposition == other.decomposition
            && self.case_tag == other.case_tag
    }
}

impl fmt::Display for LocalIndexReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: psi = {}, f_r = {}, d = {}, nu = {}, beta = {}, phi = {}, {}",
            self.source,
            self.psi.value(),
            self.f_r,
            self.d,
            self.nu,
            self.beta,
            self.decomposition,
            self.case_tag.as_str()
        )?;
        if let Some(v) = self.nu_diag {
            write!(f, ", nu_diag = {v}")?;
        }
        if let Some(v) = self.a_r {
            write!(f, ", a_r = {v}")?;
        }
        Ok(())
    }
}

/// `M = lcm(m, p^{a+b+1})`.
pub fn class_modulus(ctx: &SchurContext) -> u64 {
    arith::lcm(ctx.m(), ctx.zeta_order * ctx.p)
}

/// `ψ_r`, the class of `r` mod `n_F`.
pub fn frobenius(ctx: &SchurContext, r: u64) -> Result<UnitClass> {
    if gcd(r, ctx.n_f) != 1 {
        return Err(Error::NotCoprime { value: r, modulus: ctx.n_f });
    }
    Ok(UnitClass::raw(ctx.n_f, r % ctx.n_f))
}

fn require_unramified_odd_prime(ctx: &SchurContext, r: u64) -> Result<()> {
    if r == 2 || !arith::is_prime(r) {
        return Err(Error::Invalid(format!("{r} is not an odd prime")));
    }
    if ctx.m().is_multiple_of(r) || r == ctx.p {
        return Err(Error::NotCoprime { value: r, modulus: ctx.n_f });
    }
    Ok(())
}

/// `d` from `v_p(x − 1)`, where `x` is known modulo `p^{a+b+1}` (or exactly).
fn d_from(ctx: &SchurContext, diff: u64) -> u32 {
    match arith::valuation(diff, ctx.p) {
        None => ctx.a,
        Some(v) => v.min(ctx.a),
    }
}

/// `ν`, `β`, decomposition and case for a Frobenius `ψ` with order `f_r` mod `G`.
fn local_data(
    ctx: &SchurContext,
    source: Source,
    psi: UnitClass,
    f_r: u64,
    d: u32,
) -> Result<LocalIndexReport> {
    let f = arith::vp(f_r, ctx.p);
    let nu = ctx.a.saturating_sub(f);
    let phi = psi.pow(f_r);
    let decomposition = ctx.decompose_g(phi)?;
    let parity_case = !ctx.cyclic_case && (decomposition.j + decomposition.j_prime) % 2 == 1;
    let (beta, case_tag) = if parity_case {
        if ctx.cyclic_case || ctx.a != 1 {
            return Err(Error::InvariantViolation(format!("{source}: parity case outside p^a = 2")));
        }
        (1, CaseTag::NoncyclicParity)
    } else {
        (nu.max(ctx.eta_level(decomposition.eta, d)), CaseTag::Generic)
    };
    if nu > beta {
        return Err(Error::InvariantViolation(format!("{source}: nu = {nu} > beta = {beta}")));
    }
    Ok(LocalIndexReport { source, psi, f_r, f, d, nu, beta, decomposition, case_tag, nu_diag: None, a_r: None })
}

/// `v_p(x^k − 1)`, computed modulo a large power of `p`.
fn vp_power_minus_one(x: u64, k: u64, p: u64) -> u32 {
    let mut modulus = p;
    let mut cap = 1;
    while let Some(next) = modulus.checked_mul(p).filter(|&n| n < 1 << 62) {
        modulus = next;
        cap += 1;
    }
    let y = pow_mod(x % modulus, k, modulus);
    arith::valuation((y + modulus - 1) % modulus, p).unwrap_or(cap)
}

/// The full local report at an odd prime `r ∤ m·p`.
pub fn local_report(ctx: &SchurContext, r: u64) -> Result<LocalIndexReport> {
    require_unramified_odd_prime(ctx, r)?;
    let psi = frobenius(ctx, r)?;
    let f_r = ctx.order_mod_g(psi);
    let d = d_from(ctx, r - 1);
    let mut report = local_data(ctx, Source::Prime(r), psi, f_r, d)?;
    let diag = ramification_nu(ctx, r)?;
    report.nu_diag = Some(diag.nu);
    report.a_r = Some(diag.w_valuation - ctx.a);
    Ok(report)
}

/// `ν(r) = max(0, a − v_p(f_r))`.
pub fn nu_r(ctx: &SchurContext, r: u64) -> Result<u32> {
    Ok(local_report(ctx, r)?.nu)
}

pub fn beta_r(ctx: &SchurContext, r: u64) -> Result<u32> {
    Ok(local_report(ctx, r)?.beta)
}

/// The local data that enter `ν` through ramification and roots of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RamificationData {
    pub r: u64,
    /// `v_p(e(K(ζ_r)/K, r))`.
    pub e_valuation: u32,
    /// Residue degree of `r` in `K`.
    pub residue_degree: u64,
    /// `v_p(|W(K_r)|) = v_p(r^{residue_degree} − 1)`.
    pub w_valuation: u32,
    /// `max(0, a + e_valuation − w_valuation)`.
    pub nu: u32,
}

/// `ν(r) = max(0, a + v_p(e(K(ζ_r)/K, r)) − v_p(|W(K_r)|))` for any odd prime `r ≠ p`,
/// including primes dividing `m`.
pub fn ramification_nu(ctx: &SchurContext, r: u64) -> Result<RamificationData> {
    if r == 2 || r == ctx.p || !arith::is_prime(r) {
        return Err(Error::Invalid(format!("{r} is not an odd prime different from p = {}", ctx.p)));
    }
    let m = ctx.m();
    let h = ctx.field.subgroup();
    let (e, residue_degree) = if !m.is_multiple_of(r) {
        (r - 1, ctx.field.residue_degree(r % m)?)
    } else {
        let m0 = m / arith::p_power_part(m, r);
        // inertia at r is the kernel of reduction mod m0
        let inertia = h.elements().iter().filter(|&&x| x % m0 == 1 % m0);
        let (total, fixing) = inertia.fold((0u64, 0u64), |(t, f), &x| (t + 1, f + u64::from(x % r == 1)));
        let image = h.image_mod(m0);
        let degree = order_mod_subgroup(UnitClass::raw(m0, r % m0), &image);
        (total / fixing, degree)
    };
    let e_valuation = arith::vp(e, ctx.p);
    let w_valuation = vp_power_minus_one(r, residue_degree, ctx.p);
    let nu = (ctx.a + e_valuation).saturating_sub(w_valuation);
    Ok(RamificationData { r, e_valuation, residue_degree, w_valuation, nu })
}

pub fn nu_r_diagnostic(ctx: &SchurContext, r: u64) -> Result<u32> {
    require_unramified_odd_prime(ctx, r)?;
    Ok(ramification_nu(ctx, r)?.nu)
}

/// Streams local reports over the unit classes mod `M`.
pub struct ClassScanner<'a> {
    ctx: &'a SchurContext,
    modulus: u64,
    p_modulus: u64,
    /// `f_table[x]` = order of `x` in `(Z/mZ)*/H`, 0 for non-units.
    f_table: Vec<u64>,
}

impl<'a> ClassScanner<'a> {
    pub fn new(ctx: &'a SchurContext, max_classes: u64) -> Result<Self> {
        let modulus = class_modulus(ctx);
        let classes = arith::euler_phi(modulus);
        if classes > max_classes {
            return Err(Error::ResourceLimit { what: "residue classes mod M", size: classes as u128, limit: max_classes });
        }
        let m = ctx.m();
        let h = ctx.field.subgroup();
        let exponent = arith::carmichael(m);
        let mut f_table = vec![0u64; m as usize];
        for x in units(m) {
            f_table[x as usize] = order_dividing(x, m, exponent, |y| h.contains(y));
        }
        Ok(ClassScanner { ctx, modulus, p_modulus: ctx.zeta_order * ctx.p, f_table })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn report(&self, u: u64) -> Result<LocalIndexReport> {
        let ctx = self.ctx;
        let u = u % self.modulus;
        if gcd(u, self.modulus) != 1 {
            return Err(Error::NotCoprime { value: u, modulus: self.modulus });
        }
        let psi = UnitClass::raw(ctx.n_f, u % ctx.n_f);
        let f_r = self.f_table[(u % ctx.m()) as usize];
        let diff = (u % self.p_modulus + self.p_modulus - 1) % self.p_modulus;
        let d = d_from(ctx, diff);
        local_data(ctx, Source::Class { residue: u, modulus: self.modulus }, psi, f_r, d)
    }

    /// Visits every class in ascending order until `visit` breaks.
    pub fn for_each(&self, mut visit: impl FnMut(&LocalIndexReport) -> ControlFlow<()>) -> Result<()> {
        for u in units(self.modulus) {
            if visit(&self.report(u)?).is_break() {
                break;
            }
        }
        Ok(())
    }
}

/// One report per unit class mod `M`, ascending; bounded by the context's enumeration limit.
pub fn scan_residues(ctx: &SchurContext) -> Result<Vec<LocalIndexReport>> {
    let scanner = ClassScanner::new(ctx, ctx.limit())?;
    let mut out = Vec::new();
    scanner.for_each(|r| {
        out.push(*r);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Primes `≤ bound` congruent to `u` mod `modulus`, ascending.
pub fn primes_in_class(u: u64, modulus: u64, bound: u64) -> impl Iterator<Item = u64> {
    let start = if modulus == 0 { u } else { u % modulus };
    let step = modulus.max(1);
    std::iter::successors(Some(start), move |&x| x.checked_add(step))
        .take_while(move |&x| x <= bound)
        .filter(|&x| arith::is_prime(x))
}

/// Smallest prime `≤ bound` congruent to `u` mod `modulus`.
pub fn find_prime_in_class(u: u64, modulus: u64, bound: u64) -> Result<u64> {
    if modulus == 0 {
        return Err(Error::ZeroModulus);
    }
    if gcd(u, modulus) != 1 {
        return Err(Error::NotCoprime { value: u, modulus });
    }
    primes_in_class(u, modulus, bound)
        .next()
        .ok_or(Error::PrimeNotFound { residue: u % modulus, modulus, bound })
}

/// The `skip`-th (0-based) odd prime `≤ bound` in the class of `u` mod `M`.
pub fn realize_class(ctx: &SchurContext, u: u64, skip: usize, bound: u64) -> Result<u64> {
    let modulus = class_modulus(ctx);
    if gcd(u, modulus) != 1 {
        return Err(Error::NotCoprime { value: u, modulus });
    }
    primes_in_class(u, modulus, bound)
        .filter(|&r| r != 2)
        .nth(skip)
        .ok_or(Error::PrimeNotFound { residue: u % modulus, modulus, bound })
}
