//! The Galois-theoretic apparatus attached to a pair `(K, p)`.
//!
//! With `ζ = ζ_{p^{a+b}}` and `F = Q(ζ_m, ζ)` we work in `Γ = (Z/n_F Z)*`:
//!
//! * `G = Gal(F/K)`  = residues whose reduction mod `m` lies in `H`,
//! * `C = Gal(F/K(ζ))` = elements of `G` that are `1 mod p^{a+b}`,
//! * `D = Gal(F/K(ζ+ζ⁻¹))` = elements of `G` that are `±1 mod p^{a+b}`,
//!
//! together with `ρ, σ ∈ G` and `B ≤ C` such that `D = B × ⟨ρ⟩`,
//! `C = B × ⟨ρ²⟩` and `G/C = ⟨ρC⟩ × ⟨σC⟩`.

use std::collections::HashMap;
use std::fmt;

use crate::arith::{self, mul_mod, pow_mod};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::residue::{
    complement_of_cyclic, element_order, order_dividing, order_mod_subgroup, power_subgroup, quotient_data,
    sylow_p_elements_limited, unit_group, ResidueSubgroup, UnitClass, UnitGroup, DEFAULT_ENUMERATION_LIMIT,
};

/// How `b` is computed when `ζ_4 ∉ K` and `Gal(K(ζ_{2^{2a+s}})/K)` is not cyclic.
///
/// `Definition` takes `b = s + v_2([K ∩ Q(ζ_{2^s}) : Q]) + 2`; `Example`
/// takes `a + b` equal to that quantity instead (one power of two less).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BMode {
    #[default]
    Definition,
    Example,
}

impl BMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BMode::Definition => "definition",
            BMode::Example => "example",
        }
    }
}

impl std::str::FromStr for BMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "definition" => Ok(BMode::Definition),
            "example" => Ok(BMode::Example),
            other => Err(Error::Parse(format!("unknown b-mode `{other}`"))),
        }
    }
}

/// Order in which candidates for `ρ` and `σ` are tried.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ScanOrder {
    #[default]
    Ascending,
    Descending,
}

#[derive(Clone, Copy, Debug)]
pub struct ContextOptions {
    pub b_mode: BMode,
    pub scan_order: ScanOrder,
    pub limit: u64,
}

impl Default for ContextOptions {
    fn default() -> Self {
        ContextOptions { b_mode: BMode::Definition, scan_order: ScanOrder::Ascending, limit: DEFAULT_ENUMERATION_LIMIT }
    }
}

impl ContextOptions {
    pub fn with_mode(b_mode: BMode) -> Self {
        ContextOptions { b_mode, ..Default::default() }
    }
}

pub fn b_value(field: &FieldSpec, p: u64, a: u32, s: u32, mode: BMode) -> Result<u32> {
    if p != 2 || field.contains_root_of_unity(4) {
        return Ok(s);
    }
    let image = field.relative_gal_image(2u64.pow(2 * a + s))?;
    let cyclic = quotient_data(&image, &ResidueSubgroup::trivial(image.modulus()))?.is_cyclic;
    if cyclic {
        return Ok(s + 1);
    }
    let v = arith::vp(field.cyclotomic_intersection_degree(2u64.pow(s))?, 2);
    Ok(match mode {
        BMode::Definition => s + v + 2,
        BMode::Example => s + v + 2 - a,
    })
}

/// `φ = ρ^{j'} σ^j η` with `0 ≤ j' < |ρ|`, `0 ≤ j < |σC|`, `η ∈ B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub j_prime: u64,
    pub j: u64,
    pub eta: UnitClass,
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(j' = {}, j = {}, eta = {})", self.j_prime, self.j, self.eta.value())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiProfile {
    pub psi: UnitClass,
    /// `|ψG|`
    pub ord_mod_g: u64,
    pub h: u32,
    pub d: u32,
    pub nu: u32,
    pub t_group: ResidueSubgroup,
}

#[derive(Clone, Debug)]
pub struct SchurContext {
    pub p: u64,
    pub field: FieldSpec,
    pub a: u32,
    pub s: u32,
    pub b: u32,
    pub b_mode: BMode,
    /// `p^{a+b}`, the order of `ζ`.
    pub zeta_order: u64,
    pub n_f: u64,
    pub gamma: UnitGroup,
    pub g: ResidueSubgroup,
    pub c: ResidueSubgroup,
    pub d: ResidueSubgroup,
    pub b_group: ResidueSubgroup,
    pub rho: UnitClass,
    pub sigma: UnitClass,
    /// `|σC|`
    pub q: u64,
    /// `v_p(exp B)`
    pub t: u32,
    pub cyclic_case: bool,
    /// `v_2([K ∩ Q(ζ) : Q]) + 2`, only in the non-cyclic case.
    pub d_nc: Option<u32>,
    rho_order: u64,
    gamma_exponent: u64,
    limit: u64,
    quotient_table: HashMap<u64, (u64, u64)>,
    c_table: HashMap<u64, (u64, u64)>,
    /// `eta_levels[d][η] = v_p(|η B^{p^d}|)`
    eta_levels: Vec<HashMap<u64, u32>>,
}

pub fn build_context(field: &FieldSpec, p: u64, mode: BMode) -> Result<SchurContext> {
    build_context_with(field, p, ContextOptions::with_mode(mode))
}

fn scan_key(x: u64, zeta_order: u64) -> (u64, u64) {
    (x % zeta_order, x)
}

fn ordered(mut v: Vec<u64>, zeta_order: u64, order: ScanOrder) -> Vec<u64> {
    v.sort_unstable_by_key(|&x| scan_key(x, zeta_order));
    if order == ScanOrder::Descending {
        v.reverse();
    }
    v
}

pub fn build_context_with(field: &FieldSpec, p: u64, opts: ContextOptions) -> Result<SchurContext> {
    let a = field.a_value(p)?;
    let s = field.s_value(p)?;
    let b = b_value(field, p, a, s, opts.b_mode)?;
    let zeta_order = p
        .checked_pow(a + b)
        .filter(|&z| z < 1 << 62)
        .ok_or(Error::ResourceLimit { what: "zeta order", size: u128::MAX, limit: 1 << 62 })?;
    let m = field.conductor();
    let n_f = arith::lcm(m, zeta_order);
    let gamma = unit_group(n_f);
    let g = field.subgroup().preimage(n_f, opts.limit)?;
    let one = 1 % zeta_order;
    let minus_one = zeta_order - 1;
    let c = ResidueSubgroup::from_sorted_elements(
        n_f,
        g.elements().iter().copied().filter(|&x| x % zeta_order == one).collect(),
    );
    let d = ResidueSubgroup::from_sorted_elements(
        n_f,
        g.elements().iter().copied().filter(|&x| x % zeta_order == one || x % zeta_order == minus_one).collect(),
    );
    if d.order() == g.order() {
        return Err(Error::SelectionFailure(format!("D = G for n_F = {n_f}; b is too small")));
    }
    let cyclic_case = c == d;
    let index = g.order() / c.order();

    let (rho, sigma, b_group) = if cyclic_case {
        let sigma = ordered(g.elements().to_vec(), zeta_order, opts.scan_order)
            .into_iter()
            .map(|x| UnitClass::raw(n_f, x))
            .find(|&x| order_mod_subgroup(x, &c) == index)
            .ok_or_else(|| Error::SelectionFailure("G/C is not cyclic after all".into()))?;
        (UnitClass::identity(n_f), sigma, c.clone())
    } else {
        select_noncyclic(&g, &c, &d, n_f, zeta_order, index, opts.scan_order)?
    };

    let q = order_mod_subgroup(sigma, &c);
    let t = arith::vp(b_group.exponent(), p);
    let d_nc = if cyclic_case {
        None
    } else {
        Some(arith::vp(field.cyclotomic_intersection_degree(zeta_order)?, 2) + 2)
    };
    let rho_order = element_order(rho);
    let gamma_exponent = gamma.exponent();

    let mut ctx = SchurContext {
        p,
        field: field.clone(),
        a,
        s,
        b,
        b_mode: opts.b_mode,
        zeta_order,
        n_f,
        gamma,
        g,
        c,
        d,
        b_group,
        rho,
        sigma,
        q,
        t,
        cyclic_case,
        d_nc,
        rho_order,
        gamma_exponent,
        limit: opts.limit,
        quotient_table: HashMap::new(),
        c_table: HashMap::new(),
        eta_levels: Vec::new(),
    };
    ctx.build_tables();
    let violations = ctx.check_invariants();
    if !violations.is_empty() {
        return Err(Error::SelectionFailure(violations.join("; ")));
    }
    Ok(ctx)
}

fn select_noncyclic(
    g: &ResidueSubgroup,
    c: &ResidueSubgroup,
    d: &ResidueSubgroup,
    n_f: u64,
    zeta_order: u64,
    index: u64,
    order: ScanOrder,
) -> Result<(UnitClass, UnitClass, ResidueSubgroup)> {
    let rho_candidates: Vec<u64> = d.elements().iter().copied().filter(|&x| !c.contains(x)).collect();
    let sigma_candidates: Vec<u64> = g.elements().iter().copied().filter(|&x| x % 4 == 1).collect();
    let sigma_candidates = ordered(sigma_candidates, zeta_order, order);
    let mut tried = 0;
    for rho in ordered(rho_candidates, zeta_order, order) {
        let rho = UnitClass::raw(n_f, rho);
        let Some(b) = complement_of_cyclic(c, rho.pow(2))? else {
            continue;
        };
        tried += 1;
        let with_rho = c.join(&[rho.value()]);
        for &sigma in &sigma_candidates {
            let sigma = UnitClass::raw(n_f, sigma);
            let q = order_mod_subgroup(sigma, c);
            if 2 * q == index && with_rho.join(&[sigma.value()]).order() == g.order() {
                return Ok((rho, sigma, b));
            }
        }
    }
    Err(Error::SelectionFailure(format!(
        "{tried} choices of rho admit a complement but none pairs with a sigma (n_F = {n_f})"
    )))
}

impl SchurContext {
    fn build_tables(&mut self) {
        let n = self.n_f;
        let rho_index = if self.cyclic_case { 1 } else { 2 };
        let mut rho_power = 1 % n;
        for jp in 0..rho_index {
            let mut rep = rho_power;
            for j in 0..self.q {
                self.quotient_table.insert(rep % self.zeta_order, (jp, j));
                rep = mul_mod(rep, self.sigma.value(), n);
            }
            rho_power = mul_mod(rho_power, self.rho.value(), n);
        }
        let rho_sq = self.rho.pow(2).value();
        let rho_sq_order = if self.rho_order.is_multiple_of(2) { self.rho_order / 2 } else { self.rho_order };
        let mut power = 1 % n;
        for k in 0..rho_sq_order {
            for &eta in self.b_group.elements() {
                self.c_table.insert(mul_mod(power, eta, n), (k, eta));
            }
            power = mul_mod(power, rho_sq, n);
        }
        self.eta_levels = (0..=self.a)
            .map(|dd| {
                let sub = power_subgroup(&self.b_group, self.p.pow(dd));
                self.b_group
                    .classes()
                    .map(|eta| (eta.value(), arith::vp(order_mod_subgroup(eta, &sub), self.p)))
                    .collect()
            })
            .collect();
    }

    /// Describes every violated structural invariant; empty when all hold.
    pub fn check_invariants(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let mut check = |ok: bool, what: &str| {
            if !ok {
                bad.push(what.to_string());
            }
        };
        let n = self.n_f;
        let one = 1 % self.zeta_order;
        check(self.g.elements().iter().all(|&x| self.field.subgroup().contains(x % self.field.conductor())), "G ⊄ preimage of H");
        check(
            self.g.order() * self.field.degree() == self.gamma.order(),
            "|G|·[K:Q] ≠ |Γ|",
        );
        check(self.c.elements().iter().all(|&x| x % self.zeta_order == one), "C not ≡ 1 mod p^(a+b)");
        check(self.d != self.g, "D = G");
        let cyclic = quotient_data(&self.g, &self.c).map(|q| q.is_cyclic).unwrap_or(false);
        check(cyclic == self.cyclic_case, "G/C cyclicity disagrees with C = D");
        check(self.b_group.is_subgroup_of(&self.c), "B ⊄ C");
        let rho_group = ResidueSubgroup::from_generators_limited(n, &[self.rho.value()], u64::MAX).expect("rho");
        let rho_sq_group = ResidueSubgroup::from_generators_limited(n, &[self.rho.pow(2).value()], u64::MAX).expect("rho^2");
        check(self.b_group.order() * rho_group.order() == self.d.order(), "|B|·|ρ| ≠ |D|");
        check(self.b_group.intersection(&rho_group).is_trivial(), "B ∩ ⟨ρ⟩ ≠ 1");
        check(self.b_group.join(&[self.rho.value()]) == self.d, "B·⟨ρ⟩ ≠ D");
        check(self.b_group.order() * rho_sq_group.order() == self.c.order(), "|B|·|ρ²| ≠ |C|");
        check(self.b_group.intersection(&rho_sq_group).is_trivial(), "B ∩ ⟨ρ²⟩ ≠ 1");
        let rho_c = if self.c.contains_class(self.rho) { 1 } else { 2 };
        check(rho_c * self.q == self.g.order() / self.c.order(), "|ρC|·|σC| ≠ [G:C]");
        check(self.c.join(&[self.rho.value(), self.sigma.value()]).order() == self.g.order(), "G ≠ ⟨ρ, σ, C⟩");
        if self.cyclic_case {
            check(self.rho.is_identity(), "cyclic case with ρ ≠ 1");
            check(self.b_group == self.c, "cyclic case with B ≠ C");
        } else {
            check(self.p == 2 && self.a == 1, "non-cyclic case with p^a ≠ 2");
            check(self.sigma.value() % 4 == 1, "σ does not fix ζ_4");
            check(
                self.d.elements().iter().filter(|&&x| !self.c.contains(x)).all(|&x| x % self.zeta_order == self.zeta_order - 1),
                "D∖C not ≡ −1",
            );
        }
        if self.p != 2 {
            check(self.cyclic_case, "odd p outside the cyclic case");
        }
        bad
    }

    pub fn m(&self) -> u64 {
        self.field.conductor()
    }

    pub fn rho_order(&self) -> u64 {
        self.rho_order
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `Γ_p`, ascending.
    pub fn gamma_p(&self) -> Result<Vec<UnitClass>> {
        sylow_p_elements_limited(&self.gamma, self.p, self.limit)
    }

    pub fn in_g(&self, x: u64) -> bool {
        let m = self.field.conductor();
        self.field.subgroup().contains(x % m)
    }

    /// `|ψG|`.
    pub fn order_mod_g(&self, psi: UnitClass) -> u64 {
        order_dividing(psi.value(), self.n_f, self.gamma_exponent, |y| self.in_g(y))
    }

    /// `max{0 ≤ h ≤ a+b : ψ ≡ 1 mod p^h}`.
    pub fn h_value(&self, psi: UnitClass) -> u32 {
        let diff = (psi.value() % self.zeta_order + self.zeta_order - 1) % self.zeta_order;
        match arith::valuation(diff, self.p) {
            None => self.a + self.b,
            Some(v) => v.min(self.a + self.b),
        }
    }

    /// `T = {η ∈ B : η^{p^ν} ∈ B^{p^d}}`.
    pub fn t_subgroup(&self, nu: u32, d: u32) -> ResidueSubgroup {
        let target = power_subgroup(&self.b_group, self.p.pow(d));
        let pnu = self.p.pow(nu);
        let elems: Vec<u64> = self
            .b_group
            .elements()
            .iter()
            .copied()
            .filter(|&eta| target.contains(pow_mod(eta, pnu, self.n_f)))
            .collect();
        ResidueSubgroup::from_sorted_elements(self.n_f, elems)
    }

    pub fn psi_profile(&self, psi: UnitClass) -> PsiProfile {
        assert_eq!(psi.modulus(), self.n_f, "ψ must live in Γ");
        let ord_mod_g = self.order_mod_g(psi);
        let h = self.h_value(psi);
        let d = self.a.min(h);
        let nu = self.a.saturating_sub(arith::vp(ord_mod_g, self.p));
        PsiProfile { psi, ord_mod_g, h, d, nu, t_group: self.t_subgroup(nu, d) }
    }

    pub fn decompose_g(&self, g: UnitClass) -> Result<Decomposition> {
        if g.modulus() != self.n_f || !self.in_g(g.value()) {
            return Err(Error::NotInSubgroup { value: g.value(), modulus: self.n_f });
        }
        let n = self.n_f;
        let &(jp0, j) = self
            .quotient_table
            .get(&(g.value() % self.zeta_order))
            .expect("G/C = ⟨ρC⟩ × ⟨σC⟩ covers every class");
        let rep = mul_mod(self.rho.pow(jp0).value(), self.sigma.pow(j).value(), n);
        let rem = g * UnitClass::raw(n, rep).inv();
        let &(k, eta) = self.c_table.get(&rem.value()).expect("C = ⟨ρ²⟩ × B covers C");
        let j_prime = (jp0 + 2 * k) % self.rho_order;
        Ok(Decomposition { j_prime, j, eta: UnitClass::raw(n, eta) })
    }

    /// `v_p(|η B^{p^d}|)` for `η ∈ B`, `d ≤ a`.
    pub fn eta_level(&self, eta: UnitClass, d: u32) -> u32 {
        self.eta_levels[d.min(self.a) as usize][&eta.value()]
    }
}

impl fmt::Display for SchurContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field      {}", self.field)?;
        writeln!(f, "p = {}, a = {}, s = {}, b = {} ({} mode), a+b = {}", self.p, self.a, self.s, self.b, self.b_mode.as_str(), self.a + self.b)?;
        writeln!(f, "n_F = {}  |Γ| = {}", self.n_f, self.gamma.order())?;
        writeln!(f, "|G| = {}  |C| = {}  |D| = {}  |B| = {}", self.g.order(), self.c.order(), self.d.order(), self.b_group.order())?;
        writeln!(f, "rho = {}  sigma = {}  q = |σC| = {}  t = {}", self.rho.value(), self.sigma.value(), self.q, self.t)?;
        write!(f, "G/C {}", if self.cyclic_case { "cyclic" } else { "non-cyclic" })?;
        if let Some(d) = self.d_nc {
            write!(f, ", d = {d}")?;
        }
        Ok(())
    }
}
