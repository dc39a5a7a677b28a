//! Abelian number fields `K ⊆ Q(ζ_m)`, represented by the subgroup
//! `H = Gal(Q(ζ_m)/K)` of `(Z/mZ)*` with `m` the conductor of `K`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::path::Path;

use crate::arith::{self, euler_phi, gcd, normalize_cyclotomic_index};
use crate::error::{Error, Result};
use crate::residue::{
    element_order, order_mod_subgroup, unit_group, ResidueSubgroup, UnitClass, DEFAULT_ENUMERATION_LIMIT,
};

#[derive(Clone, Debug)]
pub struct FieldSpec {
    conductor: u64,
    subgroup: ResidueSubgroup,
    name: Option<String>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.conductor == other.conductor && self.subgroup.elements() == other.subgroup.elements()
    }
}

impl Eq for FieldSpec {}

impl Hash for FieldSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.conductor.hash(state);
        self.subgroup.elements().hash(state);
    }
}

fn reduction_kernel(m: u64, target: u64) -> impl Iterator<Item = u64> {
    (0..m / target).map(move |k| (1 + k * target) % m).filter(move |&x| gcd(x, m) == 1)
}

/// Reduces `(m, H)` to the conductor of its fixed field.
pub fn normalize(m: u64, h: &ResidueSubgroup) -> Result<FieldSpec> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    if h.modulus() != m {
        return Err(Error::ModulusMismatch(m, h.modulus()));
    }
    let mut m = m;
    let mut h = h.clone();
    'shrink: loop {
        for q in arith::prime_divisors(m) {
            let smaller = m / q;
            if reduction_kernel(m, smaller).all(|x| h.contains(x)) {
                h = h.image_mod(smaller);
                m = smaller;
                continue 'shrink;
            }
        }
        break;
    }
    Ok(FieldSpec { conductor: m, subgroup: h, name: None })
}

impl FieldSpec {
    /// The field fixed by the subgroup generated by `gens` in `(Z/mZ)*`.
    pub fn new(m: u64, gens: &[u64]) -> Result<FieldSpec> {
        let h = ResidueSubgroup::from_generators(m, gens)?;
        normalize(m, &h)
    }

    /// Like [`FieldSpec::new`], but `elements` must already be a subgroup.
    pub fn from_elements(m: u64, elements: &[u64]) -> Result<FieldSpec> {
        let h = ResidueSubgroup::from_elements(m, elements)?;
        normalize(m, &h)
    }

    pub fn rational() -> FieldSpec {
        FieldSpec { conductor: 1, subgroup: ResidueSubgroup::trivial(1), name: Some("Q".into()) }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> FieldSpec {
        self.name = Some(name.into());
        self
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn subgroup(&self) -> &ResidueSubgroup {
        &self.subgroup
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn degree(&self) -> u64 {
        euler_phi(self.conductor) / self.subgroup.order()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    /// Whether `ζ_k ∈ K`.
    pub fn contains_root_of_unity(&self, k: u64) -> bool {
        let k = normalize_cyclotomic_index(k);
        if k == 0 || !self.conductor.is_multiple_of(k) {
            return false;
        }
        self.subgroup.elements().iter().all(|&x| x % k == 1 % k)
    }

    fn require_prime_in_field(&self, p: u64) -> Result<()> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !self.contains_root_of_unity(p) {
            return Err(Error::PrimeNotInField { p });
        }
        Ok(())
    }

    /// Largest `a` with `ζ_{p^a} ∈ K`.
    pub fn a_value(&self, p: u64) -> Result<u32> {
        self.require_prime_in_field(p)?;
        let mut a = 1;
        while self.contains_root_of_unity(p.pow(a + 1)) {
            a += 1;
        }
        Ok(a)
    }

    /// Largest `s ≥ 1` with `ζ_{p^s} ∈ Q(ζ_m)`.
    pub fn s_value(&self, p: u64) -> Result<u32> {
        self.require_prime_in_field(p)?;
        Ok(arith::vp(self.conductor, p).max(1))
    }

    /// `Gal(K(ζ_t)/K)` as a subgroup of `(Z/tZ)*`.
    pub fn relative_gal_image(&self, t: u64) -> Result<ResidueSubgroup> {
        if t == 0 {
            return Err(Error::ZeroModulus);
        }
        let g = gcd(self.conductor, t);
        self.subgroup.image_mod(g).preimage(t, DEFAULT_ENUMERATION_LIMIT)
    }

    /// `[K ∩ Q(ζ_t) : Q]`.
    pub fn cyclotomic_intersection_degree(&self, t: u64) -> Result<u64> {
        Ok(euler_phi(t) / self.relative_gal_image(t)?.order())
    }

    /// Exponent of `Gal(K/Q) ≅ (Z/mZ)*/H`.
    pub fn galois_group_exponent(&self) -> u64 {
        unit_group(self.conductor)
            .factors()
            .iter()
            .fold(1, |acc, f| arith::lcm(acc, order_mod_subgroup(f.generator, &self.subgroup)))
    }

    /// Order of the Frobenius class of `x` in `Gal(K/Q)`: the least `k` with `x^k ∈ H`.
    pub fn residue_degree(&self, x: u64) -> Result<u64> {
        let x = UnitClass::new(self.conductor, x)?;
        Ok(order_mod_subgroup(x, &self.subgroup))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            write!(f, "{name}: ")?;
        }
        let gens: Vec<String> = self.subgroup.generators().iter().map(|g| g.to_string()).collect();
        write!(f, "conductor {}, H = <{}>, degree {}", self.conductor, gens.join(","), self.degree())
    }
}

/// `Q(ζ_m)`.
pub fn cyclotomic(m: u64) -> Result<FieldSpec> {
    FieldSpec::new(m, &[])
}

pub fn fixed_field(m: u64, gens: &[u64]) -> Result<FieldSpec> {
    FieldSpec::new(m, gens)
}

fn is_squarefree(d: u64) -> bool {
    arith::factorize(d).iter().all(|&(_, e)| e == 1)
}

/// `Q(√d)` for a squarefree integer `d ∉ {0, 1}`.
pub fn quadratic(d: i64) -> Result<FieldSpec> {
    if d == 0 || d == 1 || !is_squarefree(d.unsigned_abs()) {
        return Err(Error::Invalid(format!("{d} is not a squarefree integer other than 0, 1")));
    }
    let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
    let n = disc.unsigned_abs();
    // kernel of the Kronecker character (disc/·), evaluated at an odd positive representative
    let kernel: Vec<u64> = crate::residue::units(n)
        .filter(|&x| {
            let odd = if x % 2 == 1 { x } else { x + n };
            arith::jacobi(disc, odd) == 1
        })
        .collect();
    FieldSpec::from_elements(n, &kernel).map(|k| k.with_name(format!("Q(sqrt({d}))")))
}

/// The unique `K` with `Q(ζ_{p^v}) ⊆ K ⊆ Q(ζ_m)` and `[Q(ζ_m) : K] = p`, where `p^v ‖ m`.
pub fn index_p_subfield(m: u64, p: u64) -> Result<FieldSpec> {
    if !arith::is_prime(p) || m == 0 {
        return Err(Error::Invalid(format!("bad index_p_subfield arguments ({m}, {p})")));
    }
    let pv = arith::p_power_part(m, p);
    let mut candidates: Vec<ResidueSubgroup> = Vec::new();
    for x in crate::residue::units(m) {
        if x % pv != 1 % pv || element_order(UnitClass::raw(m, x)) != p {
            continue;
        }
        if candidates.iter().any(|s| s.contains(x)) {
            continue;
        }
        candidates.push(ResidueSubgroup::from_generators(m, &[x])?);
    }
    match candidates.as_slice() {
        [h] => normalize(m, h),
        [] => Err(Error::AmbiguousSubfield(format!("no subgroup of order {p} fixes zeta_{pv} in (Z/{m})*"))),
        many => {
            let list: Vec<String> = many.iter().map(|s| s.to_string()).collect();
            Err(Error::AmbiguousSubfield(format!("{} candidates: {}", many.len(), list.join("; "))))
        }
    }
}

/// `K1·K2`.
pub fn compositum(k1: &FieldSpec, k2: &FieldSpec) -> Result<FieldSpec> {
    let n = arith::lcm(k1.conductor, k2.conductor);
    let lifted = k1.subgroup.preimage(n, DEFAULT_ENUMERATION_LIMIT)?;
    let elems: Vec<u64> =
        lifted.elements().iter().copied().filter(|&x| k2.subgroup.contains(x % k2.conductor)).collect();
    normalize(n, &ResidueSubgroup::from_sorted_elements(n, elems))
}

/// Parses the line-oriented field description:
///
/// ```text
/// # comment
/// name = Q(zeta_7, sqrt 2)
/// conductor = 56
/// subgroup = 15
/// ```
pub fn parse_field_spec(text: &str) -> Result<FieldSpec> {
    let mut conductor = None;
    let mut gens: Vec<u64> = Vec::new();
    let mut name = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", lineno + 1)))?;
        let value = value.trim();
        match key.trim() {
            "conductor" => {
                conductor = Some(
                    value.parse::<u64>().map_err(|e| Error::Parse(format!("line {}: conductor: {e}", lineno + 1)))?,
                )
            }
            "subgroup" => gens = parse_int_list(value)?,
            "name" => name = Some(value.to_string()),
            other => return Err(Error::Parse(format!("line {}: unknown key `{other}`", lineno + 1))),
        }
    }
    let m = conductor.ok_or_else(|| Error::Parse("missing `conductor`".into()))?;
    let field = FieldSpec::new(m, &gens)?;
    Ok(match name {
        Some(n) => field.with_name(n),
        None => field,
    })
}

fn parse_int_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|e| Error::Parse(format!("`{t}`: {e}"))))
        .collect()
}

/// Parses the inline form `m:g1,g2,...` (an empty generator list means `Q(ζ_m)`).
pub fn parse_inline_field(s: &str) -> Result<FieldSpec> {
    let (m, gens) = s.split_once(':').ok_or_else(|| Error::Parse(format!("`{s}` is not of the form m:g1,g2")))?;
    let m = m.trim().parse::<u64>().map_err(|e| Error::Parse(format!("conductor `{m}`: {e}")))?;
    FieldSpec::new(m, &parse_int_list(gens)?)
}

/// A `--field` argument: an existing file path, otherwise the inline form.
pub fn load_field(arg: &str) -> Result<FieldSpec> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
        return parse_field_spec(&text);
    }
    parse_inline_field(arg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let full: Vec<u64> = (1..5).collect();
        let k = FieldSpec::from_elements(5, &full).unwrap();
        assert!(k.is_rational());
        assert_eq!(k.degree(), 1);

        let k = FieldSpec::new(12, &[11]).unwrap();
        assert_eq!(k.conductor(), 12);
        assert_eq!(k.subgroup().elements(), &[1, 11]);

        let k = FieldSpec::new(56, &[15]).unwrap();
        assert_eq!(k.conductor(), 56);
        assert_eq!(k.degree(), 12);

        // Q(ζ_14) = Q(ζ_7)
        assert_eq!(cyclotomic(14).unwrap(), cyclotomic(7).unwrap());
        assert!(cyclotomic(1).unwrap().is_rational());
        assert!(cyclotomic(2).unwrap().is_rational());
    }

    #[test]
    fn normalize_matches_exhaustive_divisor_search() {
        // conductor = least divisor d (d ≢ 2 mod 4) whose reduction kernel lies in H
        for (m, gens) in [(12u64, vec![11u64]), (56, vec![15]), (40, vec![9]), (63, vec![8, 10])] {
            let h = ResidueSubgroup::from_generators(m, &gens).unwrap();
            let expected = (1..=m)
                .filter(|d| m % d == 0 && d % 4 != 2)
                .find(|&d| reduction_kernel(m, d).all(|x| h.contains(x)))
                .unwrap();
            assert_eq!(normalize(m, &h).unwrap().conductor(), expected, "m = {m}");
        }
    }

    #[test]
    fn roots_of_unity() {
        let k = FieldSpec::new(56, &[15]).unwrap();
        assert!(k.contains_root_of_unity(2));
        assert!(k.contains_root_of_unity(7));
        assert!(k.contains_root_of_unity(14));
        assert!(!k.contains_root_of_unity(4));
        assert!(cyclotomic(9).unwrap().contains_root_of_unity(9));
        assert!(FieldSpec::rational().contains_root_of_unity(2));
        assert!(!FieldSpec::rational().contains_root_of_unity(3));
    }

    #[test]
    fn a_and_s() {
        let q = FieldSpec::rational();
        assert_eq!(q.a_value(2).unwrap(), 1);
        assert_eq!(q.s_value(2).unwrap(), 1);
        assert!(matches!(q.a_value(3), Err(Error::PrimeNotInField { p: 3 })));
        let k = FieldSpec::new(56, &[15]).unwrap();
        assert_eq!(k.a_value(2).unwrap(), 1);
        assert_eq!(k.s_value(2).unwrap(), 3);
        let k57 = fixed_field(57, &[7]).unwrap();
        assert_eq!(k57.s_value(3).unwrap(), 1);
        assert_eq!(quadratic(5).unwrap().s_value(2).unwrap(), 1);
        assert_eq!(cyclotomic(16).unwrap().a_value(2).unwrap(), 4);
    }

    #[test]
    fn intersections_and_images() {
        let k = FieldSpec::new(56, &[15]).unwrap();
        assert_eq!(k.cyclotomic_intersection_degree(1).unwrap(), 1);
        assert_eq!(k.cyclotomic_intersection_degree(8).unwrap(), 2);
        assert_eq!(cyclotomic(9).unwrap().cyclotomic_intersection_degree(27).unwrap(), 6);

        let img = k.relative_gal_image(7).unwrap();
        assert!(img.is_trivial());
        let sqrt2 = quadratic(2).unwrap();
        let img = sqrt2.relative_gal_image(16).unwrap();
        assert_eq!(img.order(), 4);
        let q = crate::residue::quotient_data(&img, &ResidueSubgroup::trivial(16)).unwrap();
        assert!(!q.is_cyclic);
        assert_eq!(FieldSpec::rational().relative_gal_image(8).unwrap().order(), 4);
    }

    #[test]
    fn builders() {
        let k = quadratic(2).unwrap();
        assert_eq!((k.conductor(), k.subgroup().elements().to_vec()), (8, vec![1, 7]));
        assert_eq!(quadratic(3).unwrap().subgroup().elements(), &[1, 11]);
        assert_eq!(quadratic(-1).unwrap(), cyclotomic(4).unwrap());
        assert_eq!(quadratic(-3).unwrap(), cyclotomic(3).unwrap());
        assert_eq!(quadratic(5).unwrap().conductor(), 5);
        assert!(quadratic(4).is_err());

        let k = index_p_subfield(57, 3).unwrap();
        assert_eq!((k.conductor(), k.subgroup().elements().to_vec()), (57, vec![1, 7, 49]));
        assert!(matches!(index_p_subfield(7 * 13, 3), Err(Error::AmbiguousSubfield(_))));
    }

    #[test]
    fn composita() {
        let k = FieldSpec::new(56, &[15]).unwrap();
        assert_eq!(compositum(&k, &FieldSpec::rational()).unwrap(), k);
        assert_eq!(compositum(&quadratic(2).unwrap(), &cyclotomic(7).unwrap()).unwrap(), k);
        assert_eq!(compositum(&cyclotomic(9).unwrap(), &cyclotomic(19).unwrap()).unwrap(), cyclotomic(171).unwrap());
    }

    #[test]
    fn exponents() {
        assert_eq!(FieldSpec::rational().galois_group_exponent(), 1);
        assert_eq!(quadratic(3).unwrap().galois_group_exponent(), 2);
        assert_eq!(cyclotomic(16).unwrap().galois_group_exponent(), 4);
    }

    #[test]
    fn parsing() {
        let text = "# sqrt 2 adjoined to Q(zeta_7)\nname = test\nconductor = 56\nsubgroup = 15 # H\n";
        let k = parse_field_spec(text).unwrap();
        assert_eq!(k, FieldSpec::new(56, &[15]).unwrap());
        assert_eq!(k.name(), Some("test"));
        assert_eq!(parse_inline_field("57:7").unwrap(), fixed_field(57, &[7]).unwrap());
        assert_eq!(parse_inline_field("9:").unwrap(), cyclotomic(9).unwrap());
        assert!(parse_field_spec("subgroup = 3").is_err());
        assert!(parse_field_spec("conductor = 8\ncolour = red").is_err());
        assert!(matches!(parse_inline_field("8:2"), Err(Error::NotCoprime { .. })));
    }
}
