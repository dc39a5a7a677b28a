//! Unit groups `(Z/nZ)*`, their elements and their subgroups.
//!
//! Every Galois group in this crate is modelled as a subgroup of some
//! `(Z/nZ)*`, with `t` acting on roots of unity by `ζ_n ↦ ζ_n^t`. Subgroups
//! carry their full element set, sorted ascending, so membership is a binary
//! search and all scans are deterministic.

use std::collections::HashMap;
use std::fmt;

use crate::arith::{self, gcd, inv_mod, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Largest subgroup the library is willing to enumerate by default.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 1_000_000;

/// A residue class `t mod n` with `gcd(t, n) = 1`.
///
/// For `n = 1` the single class is represented by `t = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitClass {
    modulus: u64,
    value: u64,
}

impl std::ops::Mul for UnitClass {
    type Output = UnitClass;

    fn mul(self, other: UnitClass) -> UnitClass {
        debug_assert_eq!(self.modulus, other.modulus);
        UnitClass { modulus: self.modulus, value: mul_mod(self.value, other.value, self.modulus) }
    }
}

impl UnitClass {
    pub fn new(modulus: u64, value: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        let value = value % modulus;
        if gcd(value, modulus) != 1 {
            return Err(Error::NotCoprime { value, modulus });
        }
        Ok(UnitClass { modulus, value })
    }

    pub(crate) fn raw(modulus: u64, value: u64) -> Self {
        debug_assert!(modulus > 0 && value < modulus && gcd(value, modulus) == 1);
        UnitClass { modulus, value }
    }

    pub fn identity(modulus: u64) -> Self {
        UnitClass { modulus, value: 1 % modulus }
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn is_identity(self) -> bool {
        self.value == 1 % self.modulus
    }

    pub fn pow(self, k: u64) -> UnitClass {
        UnitClass { modulus: self.modulus, value: pow_mod(self.value, k, self.modulus) }
    }

    pub fn inv(self) -> UnitClass {
        let value = inv_mod(self.value, self.modulus).expect("unit class is invertible");
        UnitClass { modulus: self.modulus, value }
    }

    /// The image under `(Z/nZ)* → (Z/kZ)*`; `k` must divide `n`.
    pub fn reduce(self, k: u64) -> UnitClass {
        debug_assert!(k > 0 && self.modulus.is_multiple_of(k));
        UnitClass { modulus: k, value: self.value % k }
    }
}

impl fmt::Display for UnitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

/// Iterator over the residues coprime to `n`, ascending.
pub fn units(n: u64) -> impl Iterator<Item = u64> {
    let start = if n == 1 { 0 } else { 1 };
    (start..n.max(1)).filter(move |&t| gcd(t, n) == 1)
}

fn check_limit(what: &'static str, size: u128, limit: u64) -> Result<()> {
    if size > limit as u128 {
        return Err(Error::ResourceLimit { what, size, limit });
    }
    Ok(())
}

/// Least `k ≥ 1` with `x^k` accepted by `member`, given that `x^exponent` is accepted.
pub(crate) fn order_dividing(x: u64, n: u64, exponent: u64, member: impl Fn(u64) -> bool) -> u64 {
    let mut k = exponent;
    for (l, _) in arith::factorize(exponent) {
        while k.is_multiple_of(l) && member(pow_mod(x, k / l, n)) {
            k /= l;
        }
    }
    k
}

/// The order `|x|` of a unit class.
pub fn element_order(x: UnitClass) -> u64 {
    let one = 1 % x.modulus;
    order_dividing(x.value, x.modulus, arith::carmichael(x.modulus), |y| y == one)
}

/// Projection of `x` onto the `p`-primary component of `(Z/nZ)*`.
///
/// Returns `x^c` with `c ≡ 1 (mod p^e)` and `c ≡ 0 (mod u)`, where `|x| = p^e·u`.
pub fn p_part(x: UnitClass, p: u64) -> UnitClass {
    let ord = element_order(x);
    let pe = arith::p_power_part(ord, p);
    let u = ord / pe;
    let c = arith::crt(1, pe, 0, u).expect("coprime moduli");
    x.pow(c)
}

/// One cyclic factor `(Z/q^kZ)*` (or one of the two factors for `2^k ≥ 8`)
/// with its generator lifted to the full modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicFactor {
    pub prime_power: u64,
    pub generator: UnitClass,
    pub order: u64,
}

/// `(Z/nZ)*` as an internal direct product of cyclic groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGroup {
    modulus: u64,
    factors: Vec<CyclicFactor>,
    order: u64,
}

fn primitive_root_prime_power(q: u64, k: u32) -> u64 {
    let qk = q.pow(k);
    let fac = arith::prime_divisors(q - 1);
    let mut g = 2;
    loop {
        if fac.iter().all(|&l| pow_mod(g, (q - 1) / l, q) != 1) {
            break;
        }
        g += 1;
    }
    if k >= 2 && pow_mod(g, q - 1, q * q) == 1 {
        g += q;
    }
    g % qk
}

pub fn unit_group(n: u64) -> UnitGroup {
    assert!(n >= 1, "unit_group needs n >= 1");
    let mut factors = Vec::new();
    for (q, k) in arith::factorize(n) {
        let qk = q.pow(k);
        let rest = n / qk;
        let lift = |g: u64| UnitClass::raw(n, arith::crt(g, qk, 1, rest).expect("coprime"));
        if q == 2 {
            match k {
                1 => {}
                2 => factors.push(CyclicFactor { prime_power: 4, generator: lift(3), order: 2 }),
                _ => {
                    factors.push(CyclicFactor { prime_power: qk, generator: lift(qk - 1), order: 2 });
                    factors.push(CyclicFactor { prime_power: qk, generator: lift(5), order: qk / 4 });
                }
            }
        } else {
            let g = primitive_root_prime_power(q, k);
            factors.push(CyclicFactor { prime_power: qk, generator: lift(g), order: qk / q * (q - 1) });
        }
    }
    let order = factors.iter().map(|f| f.order).product();
    UnitGroup { modulus: n, factors, order }
}

impl UnitGroup {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn factors(&self) -> &[CyclicFactor] {
        &self.factors
    }

    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1, |acc, f| arith::lcm(acc, f.order))
    }

    /// All elements `∏ g_i^{e_i}` in generator-exponent order (not sorted).
    pub fn elements_by_exponents(&self, limit: u64) -> Result<Vec<u64>> {
        check_limit("unit group", self.order as u128, limit)?;
        let gens: Vec<(u64, u64)> = self.factors.iter().map(|f| (f.generator.value, f.order)).collect();
        Ok(enumerate_products(&gens, self.modulus))
    }
}

fn enumerate_products(gens: &[(u64, u64)], n: u64) -> Vec<u64> {
    let mut out = vec![1 % n];
    for &(g, ord) in gens {
        let mut next = Vec::with_capacity(out.len() * ord as usize);
        let mut power = 1 % n;
        for _ in 0..ord {
            next.extend(out.iter().map(|&x| mul_mod(x, power, n)));
            power = mul_mod(power, g, n);
        }
        out = next;
    }
    out
}

/// Elements of `p`-power order in `Γ`, ascending.
pub fn sylow_p_elements(group: &UnitGroup, p: u64) -> Vec<UnitClass> {
    sylow_p_elements_limited(group, p, u64::MAX).expect("no limit")
}

pub fn sylow_p_elements_limited(group: &UnitGroup, p: u64, limit: u64) -> Result<Vec<UnitClass>> {
    let n = group.modulus;
    let gens: Vec<(u64, u64)> = group
        .factors
        .iter()
        .map(|f| {
            let pe = arith::p_power_part(f.order, p);
            (pow_mod(f.generator.value, f.order / pe, n), pe)
        })
        .filter(|&(_, pe)| pe > 1)
        .collect();
    let size: u128 = gens.iter().map(|&(_, pe)| pe as u128).product();
    check_limit("Sylow subgroup", size, limit)?;
    let mut elems = enumerate_products(&gens, n);
    elems.sort_unstable();
    Ok(elems.into_iter().map(|v| UnitClass::raw(n, v)).collect())
}

/// A subgroup of `(Z/nZ)*` stored with its full, sorted element set.
///
/// Equality ignores the generator list.
#[derive(Clone, Debug)]
pub struct ResidueSubgroup {
    modulus: u64,
    generators: Vec<u64>,
    elements: Vec<u64>,
}

impl PartialEq for ResidueSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.elements == other.elements
    }
}

impl Eq for ResidueSubgroup {}

impl std::hash::Hash for ResidueSubgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.modulus.hash(state);
        self.elements.hash(state);
    }
}

fn sorted_contains(sorted: &[u64], x: u64) -> bool {
    sorted.binary_search(&x).is_ok()
}

/// Extends the sorted subgroup `elems` by `g`.
fn extend_closure(n: u64, elems: &mut Vec<u64>, g: u64, limit: u64) -> Result<bool> {
    if sorted_contains(elems, g) {
        return Ok(false);
    }
    let base = elems.clone();
    let mut coset_rep = g;
    while !sorted_contains(&base, coset_rep) {
        check_limit("subgroup closure", (elems.len() + base.len()) as u128, limit)?;
        elems.extend(base.iter().map(|&e| mul_mod(e, coset_rep, n)));
        coset_rep = mul_mod(coset_rep, g, n);
    }
    elems.sort_unstable();
    Ok(true)
}

impl ResidueSubgroup {
    pub fn trivial(modulus: u64) -> Self {
        ResidueSubgroup { modulus, generators: Vec::new(), elements: vec![1 % modulus] }
    }

    /// The subgroup generated by `gens`, enumerated up to `DEFAULT_ENUMERATION_LIMIT`.
    pub fn from_generators(modulus: u64, gens: &[u64]) -> Result<Self> {
        Self::from_generators_limited(modulus, gens, DEFAULT_ENUMERATION_LIMIT)
    }

    pub fn from_generators_limited(modulus: u64, gens: &[u64], limit: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        let mut elements = vec![1 % modulus];
        let mut kept = Vec::new();
        for &g in gens {
            let g = UnitClass::new(modulus, g)?.value;
            if extend_closure(modulus, &mut elements, g, limit)? {
                kept.push(g);
            }
        }
        Ok(ResidueSubgroup { modulus, generators: kept, elements })
    }

    /// Builds a subgroup from an explicit element set, rejecting sets that are not subgroups.
    pub fn from_elements(modulus: u64, elems: &[u64]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        let mut elements: Vec<u64> = Vec::with_capacity(elems.len());
        for &e in elems {
            elements.push(UnitClass::new(modulus, e)?.value);
        }
        elements.sort_unstable();
        elements.dedup();
        if !sorted_contains(&elements, 1 % modulus) {
            return Err(Error::NotClosed(modulus));
        }
        // a finite nonempty subset closed under multiplication is a subgroup
        for &x in &elements {
            for &y in &elements {
                if !sorted_contains(&elements, mul_mod(x, y, modulus)) {
                    return Err(Error::NotClosed(modulus));
                }
            }
        }
        Ok(Self::from_sorted_elements(modulus, elements))
    }

    /// Trusted constructor: `elements` must be a sorted, deduplicated subgroup.
    pub(crate) fn from_sorted_elements(modulus: u64, elements: Vec<u64>) -> Self {
        let mut closure = vec![1 % modulus];
        let mut generators = Vec::new();
        for &e in &elements {
            if closure.len() == elements.len() {
                break;
            }
            if extend_closure(modulus, &mut closure, e, u64::MAX).expect("no limit") {
                generators.push(e);
            }
        }
        debug_assert_eq!(closure, elements);
        ResidueSubgroup { modulus, generators, elements }
    }

    pub(crate) fn from_unsorted(modulus: u64, mut elements: Vec<u64>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Self::from_sorted_elements(modulus, elements)
    }

    /// `{x mod n : x mod m ∈ self}` for a multiple `n` of the modulus `m`.
    pub fn preimage(&self, n: u64, limit: u64) -> Result<Self> {
        let m = self.modulus;
        if !n.is_multiple_of(m) {
            return Err(Error::Invalid(format!("{m} does not divide {n}")));
        }
        let fibre = n / m;
        check_limit("preimage", self.elements.len() as u128 * fibre as u128, limit.saturating_mul(64))?;
        let mut out = Vec::new();
        for &h in &self.elements {
            for k in 0..fibre {
                let x = h + k * m;
                if gcd(x, n) == 1 {
                    out.push(x);
                }
            }
        }
        check_limit("preimage", out.len() as u128, limit)?;
        Ok(Self::from_unsorted(n, out))
    }

    /// Image under reduction to `(Z/kZ)*` for a divisor `k` of the modulus.
    pub fn image_mod(&self, k: u64) -> Self {
        assert!(k > 0 && self.modulus.is_multiple_of(k), "image_mod needs a divisor");
        let gens: Vec<u64> = self.generators.iter().map(|&g| g % k).collect();
        let mut sub = Self::from_generators_limited(k, &gens, u64::MAX).expect("reduction of units");
        // generators may be redundant after reduction
        sub.generators = gens.into_iter().filter(|&g| g != 1 % k).collect();
        sub
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn classes(&self) -> impl Iterator<Item = UnitClass> + '_ {
        self.elements.iter().map(move |&v| UnitClass::raw(self.modulus, v))
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, x: u64) -> bool {
        sorted_contains(&self.elements, x % self.modulus)
    }

    pub fn contains_class(&self, x: UnitClass) -> bool {
        x.modulus == self.modulus && self.contains(x.value)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &ResidueSubgroup) -> bool {
        self.modulus == other.modulus && self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn exponent(&self) -> u64 {
        self.classes().fold(1, |acc, x| arith::lcm(acc, element_order(x)))
    }

    pub fn intersection(&self, other: &ResidueSubgroup) -> ResidueSubgroup {
        assert_eq!(self.modulus, other.modulus);
        let elems: Vec<u64> = self.elements.iter().copied().filter(|&x| other.contains(x)).collect();
        Self::from_sorted_elements(self.modulus, elems)
    }

    /// The subgroup generated by `self` and `extra`.
    pub fn join(&self, extra: &[u64]) -> ResidueSubgroup {
        let mut elements = self.elements.clone();
        let mut generators = self.generators.clone();
        for &g in extra {
            let g = g % self.modulus;
            if extend_closure(self.modulus, &mut elements, g, u64::MAX).expect("no limit") {
                generators.push(g);
            }
        }
        ResidueSubgroup { modulus: self.modulus, generators, elements }
    }

    /// Elements of `ℓ`-power order.
    pub fn sylow(&self, l: u64) -> ResidueSubgroup {
        let lpart = arith::p_power_part(self.order(), l);
        let one = 1 % self.modulus;
        let elems: Vec<u64> =
            self.elements.iter().copied().filter(|&x| pow_mod(x, lpart, self.modulus) == one).collect();
        Self::from_sorted_elements(self.modulus, elems)
    }
}

impl fmt::Display for ResidueSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "<{}> mod {} (order {})", gens.join(","), self.modulus, self.order())
    }
}

/// Convenience wrapper around [`ResidueSubgroup::from_generators`].
pub fn subgroup_from_generators(n: u64, gens: &[u64]) -> Result<ResidueSubgroup> {
    ResidueSubgroup::from_generators(n, gens)
}

/// Least `k ≥ 1` with `x^k ∈ H`.
pub fn order_mod_subgroup(x: UnitClass, h: &ResidueSubgroup) -> u64 {
    debug_assert_eq!(x.modulus, h.modulus);
    let mut y = x.value;
    let mut k = 1;
    while !h.contains(y) {
        y = mul_mod(y, x.value, x.modulus);
        k += 1;
    }
    k
}

/// `{b^k : b ∈ B}`.
pub fn power_subgroup(b: &ResidueSubgroup, k: u64) -> ResidueSubgroup {
    let n = b.modulus;
    let elems: Vec<u64> = b.elements.iter().map(|&x| pow_mod(x, k, n)).collect();
    let mut sub = ResidueSubgroup::from_unsorted(n, elems);
    let gens: Vec<u64> = b.generators.iter().map(|&g| pow_mod(g, k, n)).filter(|&g| g != 1 % n).collect();
    if ResidueSubgroup::from_generators_limited(n, &gens, u64::MAX).map(|s| s.elements == sub.elements).unwrap_or(false) {
        sub.generators = gens;
    }
    sub
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuotientData {
    pub order: u64,
    pub exponent: u64,
    pub is_cyclic: bool,
}

/// Order, exponent and cyclicity of `G/H`.
pub fn quotient_data(g: &ResidueSubgroup, h: &ResidueSubgroup) -> Result<QuotientData> {
    if g.modulus != h.modulus {
        return Err(Error::ModulusMismatch(g.modulus, h.modulus));
    }
    if let Some(&x) = h.elements.iter().find(|&&x| !g.contains(x)) {
        return Err(Error::NotInSubgroup { value: x, modulus: g.modulus });
    }
    let order = g.order() / h.order();
    let exponent = g.classes().fold(1, |acc, x| arith::lcm(acc, order_mod_subgroup(x, h)));
    Ok(QuotientData { order, exponent, is_cyclic: exponent == order })
}

/// Basis of a finite abelian group: independent generators with their orders,
/// together with coordinates of every element.
#[derive(Clone, Debug)]
pub struct AbelianBasis {
    pub modulus: u64,
    pub basis: Vec<(u64, u64)>,
    coords: HashMap<u64, Vec<u64>>,
}

impl AbelianBasis {
    /// Greedy basis: each new generator has maximal order modulo the span of
    /// the previous ones (smallest residue on ties), then is corrected so its
    /// order equals that relative order.
    pub fn of(group: &ResidueSubgroup) -> AbelianBasis {
        let n = group.modulus;
        let one = 1 % n;
        let mut coords: HashMap<u64, Vec<u64>> = HashMap::from([(one, Vec::new())]);
        let mut span: Vec<u64> = vec![one];
        let mut basis: Vec<(u64, u64)> = Vec::new();
        while span.len() < group.elements.len() {
            let in_span = |y: u64| coords.contains_key(&y);
            let mut best = (0u64, 0u64);
            for &x in &group.elements {
                let mut y = x;
                let mut k = 1;
                while !in_span(y) {
                    y = mul_mod(y, x, n);
                    k += 1;
                }
                if k > best.1 {
                    best = (x, k);
                }
            }
            let (g, k) = best;
            let target = &coords[&pow_mod(g, k, n)];
            let mut corrected = g;
            for (i, &(e, ord)) in basis.iter().enumerate() {
                let c = target[i];
                debug_assert_eq!(c % k, 0, "greedy basis coordinate not divisible");
                let shift = (ord - (c / k) % ord) % ord;
                corrected = mul_mod(corrected, pow_mod(e, shift, n), n);
            }
            debug_assert_eq!(pow_mod(corrected, k, n), one);
            let mut next_span = Vec::with_capacity(span.len() * k as usize);
            let mut new_coords = HashMap::with_capacity(span.len() * k as usize);
            let mut power = one;
            for j in 0..k {
                for &s in &span {
                    let y = mul_mod(s, power, n);
                    let mut c = coords[&s].clone();
                    c.push(j);
                    new_coords.insert(y, c);
                    next_span.push(y);
                }
                power = mul_mod(power, corrected, n);
            }
            for c in new_coords.values_mut() {
                c.resize(basis.len() + 1, 0);
            }
            span = next_span;
            coords = new_coords;
            basis.push((corrected, k));
        }
        for c in coords.values_mut() {
            c.resize(basis.len(), 0);
        }
        AbelianBasis { modulus: n, basis, coords }
    }

    /// Exponent vector of `x` in the basis (bounded discrete logarithm).
    pub fn coordinates(&self, x: u64) -> Option<&[u64]> {
        self.coords.get(&(x % self.modulus)).map(|v| v.as_slice())
    }
}

/// A complement `B` of `⟨r⟩` in `C` (so `C = B × ⟨r⟩`), or `None` if `⟨r⟩`
/// is not a direct factor. Works one Sylow subgroup at a time.
pub fn complement_of_cyclic(c: &ResidueSubgroup, r: UnitClass) -> Result<Option<ResidueSubgroup>> {
    if !c.contains_class(r) {
        return Err(Error::NotInSubgroup { value: r.value, modulus: r.modulus });
    }
    let n = c.modulus;
    let r_order = element_order(r);
    let mut gens: Vec<u64> = Vec::new();
    for l in arith::prime_divisors(c.order()) {
        let sylow = c.sylow(l);
        if !r_order.is_multiple_of(l) {
            gens.extend_from_slice(sylow.generators());
            continue;
        }
        let rl = p_part(r, l);
        let rl_order = element_order(rl);
        let basis = AbelianBasis::of(&sylow);
        let coords = basis.coordinates(rl.value).expect("r_l lies in the Sylow subgroup");
        let pivot = basis
            .basis
            .iter()
            .zip(coords)
            .position(|(&(_, ord), &ci)| ord == rl_order && ci % l != 0);
        let Some(i) = pivot else {
            return Ok(None);
        };
        gens.extend(basis.basis.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &(e, _))| e));
    }
    gens.sort_unstable();
    let b = ResidueSubgroup::from_generators_limited(n, &gens, u64::MAX)?;
    let cyclic = ResidueSubgroup::from_generators_limited(n, &[r.value], u64::MAX)?;
    assert_eq!(b.order() * cyclic.order(), c.order(), "complement order");
    assert!(b.intersection(&cyclic).is_trivial(), "complement meets <r>");
    assert_eq!(b.join(&[r.value]).elements, c.elements, "complement does not span");
    Ok(Some(b))
}

/// Least `0 ≤ i < q` with `σ^{-i}·x ∈ S`, i.e. `x ∈ σ^i S`.
pub fn in_coset_union(x: UnitClass, sigma: UnitClass, q: u64, s: &ResidueSubgroup) -> Option<u64> {
    let sigma_inv = sigma.inv();
    let mut y = x;
    for i in 0..q {
        if s.contains_class(y) {
            return Some(i);
        }
        y = y * sigma_inv;
    }
    None
}
