//! Exhaustive cross-checks over every subfield of `Q(ζ_m)` for small `m`.

use std::collections::HashSet;
use std::fmt;
use std::ops::ControlFlow;

use crate::arith;
use crate::context::{build_context_with, BMode, ContextOptions, ScanOrder, SchurContext};
use crate::decision::{self, Verdict};
use crate::error::{Error, Result};
use crate::field::{normalize, FieldSpec};
use crate::fixtures::valid_primes;
use crate::local::{self, ClassScanner, DEFAULT_CLASS_BOUND};
use crate::residue::{units, ResidueSubgroup};

/// Every subgroup of `(Z/mZ)*`, ordered by size then elements.
pub fn all_subgroups(m: u64) -> Vec<ResidueSubgroup> {
    let unit_list: Vec<u64> = units(m).collect();
    let trivial = ResidueSubgroup::trivial(m);
    let mut seen: HashSet<Vec<u64>> = HashSet::from([trivial.elements().to_vec()]);
    let mut found = vec![trivial];
    let mut next = 0;
    while next < found.len() {
        let current = found[next].clone();
        next += 1;
        for &x in &unit_list {
            if current.contains(x) {
                continue;
            }
            let bigger = current.join(&[x]);
            if seen.insert(bigger.elements().to_vec()) {
                found.push(bigger);
            }
        }
    }
    found.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements().cmp(b.elements())));
    found
}

/// Every abelian field of conductor `≤ max_conductor`, normalized and deduplicated,
/// ordered by conductor then subgroup.
pub fn enumerate_fields(max_conductor: u64) -> Result<Vec<FieldSpec>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for m in 1..=max_conductor {
        if m % 4 == 2 {
            continue;
        }
        for h in all_subgroups(m) {
            let field = normalize(m, &h)?;
            if seen.insert(field.clone()) {
                out.push(field);
            }
        }
    }
    out.sort_by(|a, b| {
        a.conductor().cmp(&b.conductor()).then_with(|| a.subgroup().elements().cmp(b.subgroup().elements()))
    });
    Ok(out)
}

/// Recomposes `ρ^{j'} σ^j η` for every `g ∈ G`; returns the number of elements checked.
pub fn check_decompositions(ctx: &SchurContext) -> Result<u64> {
    for g in ctx.g.classes() {
        let dec = ctx.decompose_g(g)?;
        let back = ctx.rho.pow(dec.j_prime) * ctx.sigma.pow(dec.j) * dec.eta;
        let in_range = dec.j_prime < ctx.rho_order() && dec.j < ctx.q && ctx.b_group.contains_class(dec.eta);
        if back != g || !in_range {
            return Err(Error::InvariantViolation(format!("decomposition of {g} gives {dec}, recomposed {back}")));
        }
    }
    Ok(ctx.g.order())
}

#[derive(Clone, Debug)]
pub struct CorpusOptions {
    pub max_conductor: u64,
    /// Restrict to these primes (default: every valid `p`).
    pub primes: Option<Vec<u64>>,
    pub modes: Vec<BMode>,
    /// Rebuild each context with the descending scan order and compare verdicts.
    pub check_scan_order: bool,
    /// Classes per context realized by two primes each (all classes when `φ(M)` is at most this).
    pub realize_sample: usize,
    pub prime_bound: u64,
    pub max_classes: u64,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions {
            max_conductor: 120,
            primes: None,
            modes: vec![BMode::Definition, BMode::Example],
            check_scan_order: true,
            realize_sample: 32,
            prime_bound: 1 << 40,
            max_classes: DEFAULT_CLASS_BOUND,
        }
    }
}

/// What a corpus violation contradicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckKind {
    /// The `Γ_p` route and the class oracle disagree.
    DecisionVsOracle,
    /// Full and restricted scans disagree.
    FullVsRestricted,
    /// A shortcut contradicts the main decision.
    Shortcut,
    /// Rebuilding with the descending scan order changes the verdict.
    ScanOrder,
    /// `ρ^{j'} σ^j η` does not recompose to `g`.
    Decomposition,
    /// `ν ≤ β`, two-prime agreement, or the diagnostic `ν` in the lifting regime.
    LocalIndex,
    /// Any other error while building or deciding.
    Failure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: CheckKind,
    pub case: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}] {}: {}", self.kind, self.case, self.detail)
    }
}

#[derive(Clone, Debug, Default)]
pub struct CorpusSummary {
    pub fields: usize,
    pub contexts: usize,
    pub finite: usize,
    pub infinite: usize,
    pub noncyclic: usize,
    pub oracle_comparisons: usize,
    pub restricted_scan_comparisons: usize,
    pub shortcut_agreements: usize,
    pub scan_order_comparisons: usize,
    /// Classes mod `M` whose `ν ≤ β` was checked.
    pub classes_scanned: u64,
    pub elements_decomposed: u64,
    pub primes_realized: u64,
    pub diagnostic_matches: u64,
    /// Diagnostic `ν` disagreeing with `ν` outside the lifting regime (recorded, not fatal).
    pub diagnostic_disagreements: Vec<String>,
    /// Fields whose verdict depends on the `b` convention (recorded, not fatal).
    pub mode_mismatches: Vec<String>,
    /// Cases over the resource bounds.
    pub skipped: Vec<String>,
    pub violations: Vec<Violation>,
}

impl CorpusSummary {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations_of(&self, kinds: &[CheckKind]) -> Vec<&Violation> {
        self.violations.iter().filter(|v| kinds.contains(&v.kind)).collect()
    }
}

impl fmt::Display for CorpusSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fields                      {}", self.fields)?;
        writeln!(f, "contexts                    {}", self.contexts)?;
        writeln!(f, "finite / infinite           {} / {}", self.finite, self.infinite)?;
        writeln!(f, "non-cyclic contexts         {}", self.noncyclic)?;
        writeln!(f, "oracle comparisons          {}", self.oracle_comparisons)?;
        writeln!(f, "restricted scan compared    {}", self.restricted_scan_comparisons)?;
        writeln!(f, "shortcut agreements         {}", self.shortcut_agreements)?;
        writeln!(f, "scan orders compared        {}", self.scan_order_comparisons)?;
        writeln!(f, "classes scanned             {}", self.classes_scanned)?;
        writeln!(f, "elements decomposed         {}", self.elements_decomposed)?;
        writeln!(f, "primes realized             {}", self.primes_realized)?;
        writeln!(f, "diagnostic nu matches       {}", self.diagnostic_matches)?;
        writeln!(f, "diagnostic nu disagreements {}", self.diagnostic_disagreements.len())?;
        writeln!(f, "b-mode verdict mismatches   {}", self.mode_mismatches.len())?;
        for m in &self.mode_mismatches {
            writeln!(f, "  {m}")?;
        }
        writeln!(f, "skipped (resource bound)    {}", self.skipped.len())?;
        for m in &self.skipped {
            writeln!(f, "  {m}")?;
        }
        write!(f, "violations                  {}", self.violations.len())?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

fn case_label(field: &FieldSpec, p: u64, mode: BMode) -> String {
    format!("m = {}, H = {:?}, p = {p}, {} mode", field.conductor(), field.subgroup().generators(), mode.as_str())
}

/// Runs every check on one `(K, p, mode)`; returns the main verdict.
fn check_case(
    field: &FieldSpec,
    p: u64,
    mode: BMode,
    opts: &CorpusOptions,
    sum: &mut CorpusSummary,
) -> Result<Verdict> {
    let ctx = build_context_with(field, p, ContextOptions::with_mode(mode))?;
    sum.contexts += 1;
    let label = case_label(field, p, mode);
    let mut found: Vec<(CheckKind, String)> = Vec::new();

    let main = decision::decide(&ctx)?;
    let oracle = decision::oracle_decide_with(&ctx, decision::OracleOptions { max_classes: opts.max_classes, realize_bound: None })?;
    sum.oracle_comparisons += 1;
    if main.verdict != oracle.verdict {
        found.push((CheckKind::DecisionVsOracle, format!("decision {} but oracle {}", main, oracle)));
    }
    if ctx.cyclic_case {
        let full = decision::decide_full_scan(&ctx)?;
        let restricted = decision::decide_restricted_scan(&ctx)?;
        if full.verdict != restricted.verdict {
            found.push((CheckKind::FullVsRestricted, format!("full scan {} but restricted scan {}", full.verdict, restricted.verdict)));
        }
        sum.restricted_scan_comparisons += 1;
    } else {
        sum.noncyclic += 1;
    }
    for shortcut in decision::all_shortcuts(&ctx)? {
        if shortcut.verdict != main.verdict {
            found.push((CheckKind::Shortcut, format!("{} says {} but decision says {}", shortcut.method, shortcut.verdict, main.verdict)));
        } else {
            sum.shortcut_agreements += 1;
        }
    }
    if opts.check_scan_order {
        let desc = ContextOptions { scan_order: ScanOrder::Descending, ..ContextOptions::with_mode(mode) };
        let other = build_context_with(field, p, desc)?;
        let verdict = decision::decide(&other)?.verdict;
        sum.scan_order_comparisons += 1;
        if verdict != main.verdict {
            found.push((CheckKind::ScanOrder, format!("descending scan order gives {verdict}")));
        }
    }
    match check_decompositions(&ctx) {
        Ok(n) => sum.elements_decomposed += n,
        Err(e) => found.push((CheckKind::Decomposition, e.to_string())),
    }

    let scanner = ClassScanner::new(&ctx, opts.max_classes)?;
    let classes: Vec<u64> = units(scanner.modulus()).collect();
    for &u in &classes {
        // local reports refuse to exist with ν > β
        match scanner.report(u) {
            Ok(_) => sum.classes_scanned += 1,
            Err(e) => found.push((CheckKind::LocalIndex, format!("class {u}: {e}"))),
        }
    }
    let stride = classes.len().div_ceil(opts.realize_sample.max(1)).max(1);
    for &u in classes.iter().step_by(stride) {
        let Ok(class) = scanner.report(u) else { continue };
        let r1 = local::realize_class(&ctx, u, 0, opts.prime_bound)?;
        let r2 = local::realize_class(&ctx, u, 1, opts.prime_bound)?;
        for r in [r1, r2] {
            let rep = match local::local_report(&ctx, r) {
                Ok(rep) => rep,
                Err(e) => {
                    found.push((CheckKind::LocalIndex, format!("prime {r}: {e}")));
                    continue;
                }
            };
            sum.primes_realized += 1;
            if !class.same_local_data(&rep) {
                found.push((CheckKind::LocalIndex, format!("class {u} and prime {r} disagree: {class} vs {rep}")));
            }
            let diag = rep.nu_diag.expect("prime reports carry the diagnostic");
            if p != 2 && (r - 1) % p == 0 {
                if diag == rep.nu {
                    sum.diagnostic_matches += 1;
                } else {
                    found.push((CheckKind::LocalIndex, format!("diagnostic nu {diag} != nu {} at r = {r} with p | r - 1", rep.nu)));
                }
            } else if diag != rep.nu {
                sum.diagnostic_disagreements.push(format!("{label}: r = {r}, nu = {}, diagnostic {diag}", rep.nu));
            }
        }
    }
    sum.violations.extend(found.into_iter().map(|(kind, detail)| Violation { kind, case: label.clone(), detail }));
    Ok(main.verdict)
}

/// Checks every `(K, p, mode)` with `K` of conductor at most `max_conductor`.
pub fn run_corpus(opts: &CorpusOptions) -> Result<CorpusSummary> {
    run_corpus_with(opts, |_, _| ControlFlow::Continue(()))
}

/// As [`run_corpus`], calling `progress(field_index, field)` before each field.
pub fn run_corpus_with(
    opts: &CorpusOptions,
    mut progress: impl FnMut(usize, &FieldSpec) -> ControlFlow<()>,
) -> Result<CorpusSummary> {
    let fields = enumerate_fields(opts.max_conductor)?;
    let mut sum = CorpusSummary { fields: fields.len(), ..Default::default() };
    for (i, field) in fields.iter().enumerate() {
        if progress(i, field).is_break() {
            break;
        }
        let primes: Vec<u64> = valid_primes(field)
            .into_iter()
            .filter(|p| opts.primes.as_ref().is_none_or(|ps| ps.contains(p)))
            .collect();
        for p in primes {
            let mut verdicts = Vec::new();
            for &mode in &opts.modes {
                match check_case(field, p, mode, opts, &mut sum) {
                    Ok(v) => {
                        match v {
                            Verdict::Finite => sum.finite += 1,
                            Verdict::Infinite => sum.infinite += 1,
                        }
                        verdicts.push((mode, v));
                    }
                    Err(e @ Error::ResourceLimit { .. }) => sum.skipped.push(format!("{}: {e}", case_label(field, p, mode))),
                    Err(e) => sum.violations.push(Violation {
                        kind: CheckKind::Failure,
                        case: case_label(field, p, mode),
                        detail: e.to_string(),
                    }),
                }
            }
            if verdicts.windows(2).any(|w| w[0].1 != w[1].1) {
                let shown: Vec<String> = verdicts.iter().map(|(m, v)| format!("{} {v}", m.as_str())).collect();
                sum.mode_mismatches
                    .push(format!("m = {}, H = {:?}, p = {p}: {}", field.conductor(), field.subgroup().generators(), shown.join(", ")));
            }
        }
    }
    Ok(sum)
}

/// Number of unit classes a context's oracle visits.
pub fn class_count(ctx: &SchurContext) -> u64 {
    arith::euler_phi(local::class_modulus(ctx))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_subgroup_count(m: u64) -> usize {
        // subsets closed under multiplication, by bitmask over the units
        let u: Vec<u64> = units(m).collect();
        let n = u.len();
        (0u32..1 << n)
            .filter(|&mask| {
                let set: Vec<u64> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| u[i]).collect();
                set.contains(&(1 % m)) && set.iter().all(|&a| set.iter().all(|&b| set.contains(&(a * b % m))))
            })
            .count()
    }

    #[test]
    fn subgroup_counts_match_brute_force() {
        for m in [1u64, 3, 5, 7, 8, 9, 12, 15, 16, 20, 21, 24] {
            assert_eq!(all_subgroups(m).len(), brute_subgroup_count(m), "m = {m}");
        }
    }

    #[test]
    fn field_enumeration_small() {
        let fields = enumerate_fields(8).unwrap();
        // Q, Q(i), Q(√-3), Q(ζ_5), Q(√5), Q(ζ_7), Q(√-7), Q(ζ_7)^+, Q(ζ_8), Q(√2), Q(√-2)
        assert_eq!(fields.len(), 11);
        assert!(fields.iter().all(|k| k.conductor() <= 8 && k.conductor() % 4 != 2));
    }

    #[test]
    fn small_corpus_is_clean() {
        let opts = CorpusOptions { max_conductor: 24, ..Default::default() };
        let sum = run_corpus(&opts).unwrap();
        assert!(sum.is_clean(), "{sum}");
        assert!(sum.contexts > 0 && sum.primes_realized > 0);
    }
}
