//! Human-readable and `key = value` renderings of contexts and decisions.

use std::fmt::Display;

use crate::context::SchurContext;
use crate::decision::{Decision, Witness};
use crate::local::{LocalIndexReport, RamificationData};

/// Ordered key/value pairs with stable keys.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub entries: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, key: &str, value: impl Display) -> &mut Report {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// `key = value` lines.
    pub fn machine(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    /// Aligned `key  value` lines.
    pub fn human(&self) -> String {
        let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        self.entries.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
    }

    pub fn render(&self, machine: bool) -> String {
        if machine {
            self.machine()
        } else {
            self.human()
        }
    }
}

pub fn context_report(ctx: &SchurContext) -> Report {
    let mut r = Report::new();
    if let Some(name) = ctx.field.name() {
        r.push("field", name);
    }
    r.push("conductor", ctx.m())
        .push("subgroup", join(ctx.field.subgroup().generators()))
        .push("degree", ctx.field.degree())
        .push("p", ctx.p)
        .push("b_mode", ctx.b_mode.as_str())
        .push("a", ctx.a)
        .push("s", ctx.s)
        .push("b", ctx.b)
        .push("nF", ctx.n_f)
        .push("gamma_order", ctx.gamma.order())
        .push("G_order", ctx.g.order())
        .push("C_order", ctx.c.order())
        .push("D_order", ctx.d.order())
        .push("B_order", ctx.b_group.order())
        .push("rho", ctx.rho.value())
        .push("sigma", ctx.sigma.value())
        .push("q", ctx.q)
        .push("t", ctx.t)
        .push("cyclic", ctx.cyclic_case);
    if let Some(d) = ctx.d_nc {
        r.push("d_nc", d);
    }
    r
}

/// Adds `verdict`, `method` and witness keys, each prefixed by `prefix`.
pub fn add_decision(r: &mut Report, prefix: &str, d: &Decision) {
    let key = |k: &str| format!("{prefix}{k}");
    r.push(&key("verdict"), d.verdict).push(&key("method"), d.method);
    match &d.witness {
        Some(Witness::Psi { profile, power, reason }) => {
            r.push(&key("witness_psi"), profile.psi.value())
                .push(&key("witness_order_mod_G"), profile.ord_mod_g)
                .push(&key("witness_d"), profile.d)
                .push(&key("witness_nu"), profile.nu)
                .push(&key("witness_T_order"), profile.t_group.order())
                .push(&key("witness_power"), power.value())
                .push(&key("witness_reason"), reason);
        }
        Some(Witness::Class { report, prime }) => {
            add_local(r, &key("witness_"), report);
            if let Some(p) = prime {
                r.push(&key("witness_prime"), p);
            }
        }
        Some(Witness::Certificate(c)) => {
            r.push(&key("certificate"), c);
        }
        None => {}
    }
}

pub fn add_local(r: &mut Report, prefix: &str, rep: &LocalIndexReport) {
    let key = |k: &str| format!("{prefix}{k}");
    r.push(&key("source"), rep.source)
        .push(&key("psi"), rep.psi.value())
        .push(&key("f_r"), rep.f_r)
        .push(&key("f"), rep.f)
        .push(&key("d"), rep.d)
        .push(&key("nu"), rep.nu)
        .push(&key("beta"), rep.beta)
        .push(&key("j_prime"), rep.decomposition.j_prime)
        .push(&key("j"), rep.decomposition.j)
        .push(&key("eta"), rep.decomposition.eta.value())
        .push(&key("case"), rep.case_tag.as_str());
    if let Some(v) = rep.nu_diag {
        r.push(&key("nu_diag"), v);
    }
    if let Some(v) = rep.a_r {
        r.push(&key("a_r"), v);
    }
}

pub fn ramified_report(data: &RamificationData) -> Report {
    let mut r = Report::new();
    r.push("r", data.r)
        .push("ramified", true)
        .push("e_valuation", data.e_valuation)
        .push("residue_degree", data.residue_degree)
        .push("w_valuation", data.w_valuation)
        .push("nu", data.nu)
        .push("beta", "undetermined (r divides the conductor)");
    r
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{build_context, BMode};
    use crate::decision::decide;
    use crate::field::fixed_field;

    #[test]
    fn machine_keys() {
        let k = fixed_field(57, &[7]).unwrap();
        let ctx = build_context(&k, 3, BMode::Definition).unwrap();
        let mut r = context_report(&ctx);
        add_decision(&mut r, "", &decide(&ctx).unwrap());
        let text = r.machine();
        for key in ["verdict", "a", "s", "b", "nF", "witness_psi", "q", "t"] {
            assert!(text.lines().any(|l| l.starts_with(&format!("{key} = "))), "missing {key}");
        }
        assert_eq!(r.get("verdict"), Some("INFINITE"));
        assert_eq!(r.get("nF"), Some("171"));
    }
}
