use std::fmt::Write as _;

use iwexp::expansion::iw_to_tuple;
use iwexp::sample::Sampler;
use iwexp::so3_example::{quarter_turn, so3_example};
use iwexp::{
    contract, iw_family, jacobi_expanded, span_subalgebra, AlgVector, ExpandedAlgebraGeneral,
    ExpandedAlgebraIW, ExpansionGroup, GroupElement, HElement, JacobiMode, LieAlgebra, NilTuple, SubalgebraSplit,
};
use serde_json::json;

use crate::output::{CliError, Outcome};

struct Check {
    name: String,
    cases: usize,
    failures: usize,
}

fn cases() -> Result<Vec<(&'static str, LieAlgebra, SubalgebraSplit)>, CliError> {
    let mut out = Vec::new();
    for (name, h) in [("so3", [0, 0, 1]), ("sl2", [1, 0, 0]), ("heis3", [0, 0, 1])] {
        let (g, _) = iwexp::builtin(name)?;
        let split = span_subalgebra(&g, &[AlgVector::from_ints(&h)])?;
        out.push((name, g, split));
    }
    Ok(out)
}

fn nil(grp: &ExpansionGroup, s: &mut Sampler) -> Result<NilTuple, CliError> {
    let n = grp.algebra().dim();
    let mids = (0..grp.order()).map(|_| s.vector(n)).collect();
    Ok(grp.nil_tuple(mids, s.vector(n))?)
}

fn h_element(name: &str, s: &mut Sampler) -> HElement {
    if name == "so3" {
        let r = quarter_turn(s.index(4) as i64);
        HElement::new(r.clone(), Some(r))
    } else {
        HElement::identity(3, None)
    }
}

fn tally(name: String, results: impl IntoIterator<Item = bool>) -> Check {
    let (mut cases, mut failures) = (0, 0);
    for ok in results {
        cases += 1;
        failures += usize::from(!ok);
    }
    Check { name, cases, failures }
}

pub fn run(trials: usize, seed: u64, max_order: usize, cap: usize) -> Result<Outcome, CliError> {
    let mut checks = Vec::new();
    let mut s = Sampler::new(seed);

    for (name, g, split) in cases()? {
        let limit = contract(&g, &iw_family(&split))?;
        let ea0 = ExpandedAlgebraIW::new(g.clone(), split.clone(), 0)?;
        let mut hom = Vec::new();
        for _ in 0..trials {
            let (x, y) = (s.vector(3), s.vector(3));
            let lhs = ea0.psi_bar(&limit.bracket(&x, &y)?)?;
            let rhs = ea0.bracket(&ea0.psi_bar(&x)?, &ea0.psi_bar(&y)?)?;
            hom.push(lhs == rhs);
        }
        checks.push(tally(format!("{name}: order-0 expansion matches the contraction"), hom));

        for k in 0..=max_order {
            let ea = ExpandedAlgebraIW::new(g.clone(), split.clone(), k)?;
            let jac = jacobi_expanded(&ea, JacobiMode::ExhaustiveBasis)?;
            checks.push(Check {
                name: format!("{name}, k={k}: Jacobi on all basis triples"),
                cases: 1,
                failures: usize::from(!jac.is_valid()),
            });

            let general = ExpandedAlgebraGeneral::new(g.clone(), iw_family(&split), k)?;
            let mut transport = Vec::new();
            let mut agree = Vec::new();
            for _ in 0..trials {
                let xs: Vec<AlgVector> = (0..=k).map(|_| s.vector(3)).collect();
                let ys: Vec<AlgVector> = (0..=k).map(|_| s.vector(3)).collect();
                let e = ea.from_tuple(&xs)?;
                transport.push(iw_to_tuple(&split, &e) == xs);
                let lhs = ea.from_tuple(&general.bracket(&xs, &ys)?)?;
                agree.push(lhs == ea.bracket(&e, &ea.from_tuple(&ys)?)?);
            }
            checks.push(tally(format!("{name}, k={k}: tuple coordinates are a bijection"), transport));
            checks.push(tally(format!("{name}, k={k}: general and IW brackets agree"), agree));

            if k + 1 > cap {
                continue;
            }
            let grp = ExpansionGroup::with_cap(g.clone(), split.clone(), k, cap)?;
            let mut assoc = Vec::new();
            let mut inverse = Vec::new();
            let mut group = Vec::new();
            for _ in 0..trials {
                let (a, b, c) = (nil(&grp, &mut s)?, nil(&grp, &mut s)?, nil(&grp, &mut s)?);
                assoc.push(grp.star(&grp.star(&a, &b)?, &c)? == grp.star(&a, &grp.star(&b, &c)?)?);
                inverse.push(grp.star(&a, &a.negate())? == grp.nil_identity());
                let g1 = GroupElement { h: h_element(name, &mut s), nil: a };
                let g2 = GroupElement { h: h_element(name, &mut s), nil: b };
                let g3 = GroupElement { h: h_element(name, &mut s), nil: c };
                let left = grp.group_mult(&grp.group_mult(&g1, &g2)?, &g3)?;
                let right = grp.group_mult(&g1, &grp.group_mult(&g2, &g3)?)?;
                let inv = grp.group_inverse(&g1)?;
                let unit = grp.group_mult(&g1, &inv)?;
                group.push(left.nil == right.nil && left.h.ad == right.h.ad && unit.nil == grp.nil_identity());
            }
            checks.push(tally(format!("{name}, k={k}: star is associative"), assoc));
            checks.push(tally(format!("{name}, k={k}: negation inverts under star"), inverse));
            checks.push(tally(format!("{name}, k={k}: semidirect product group axioms"), group));
        }
    }

    for order in 0..=1 {
        let report = so3_example(order, seed)?;
        for c in report.checks {
            checks.push(Check {
                name: format!("so3 example, order {order}: {}", c.name),
                cases: c.samples,
                failures: c.mismatches,
            });
        }
    }

    let ok = checks.iter().all(|c| c.failures == 0);
    let mut text = String::new();
    for c in &checks {
        let status = if c.failures == 0 { "ok" } else { "FAILED" };
        let _ = writeln!(text, "{status:6} {} ({} cases, {} failures)", c.name, c.cases, c.failures);
    }
    let failed = checks.iter().filter(|c| c.failures > 0).count();
    let _ = writeln!(text, "{} checks, {failed} failed (seed {seed}, {trials} trials)", checks.len());
    let machine = json!({
        "seed": seed,
        "trials": trials,
        "checks": checks.iter().map(|c| json!({
            "name": c.name,
            "cases": c.cases,
            "failures": c.failures,
        })).collect::<Vec<_>>(),
        "report": { "ok": ok },
    });
    Ok(Outcome { ok, text, machine })
}
