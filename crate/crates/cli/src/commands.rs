use std::fmt::Write as _;
use std::path::Path;

use iwexp::bch::local_mult_capped;
use iwexp::io::{algebra_to_json, jet_to_json, matrix_to_json};
use iwexp::oracle::check_representation;
use iwexp::sample::Sampler;
use iwexp::so3_example::so3_example;
use iwexp::{
    contract as contract_family, eps_bracket, iw_family, oracle_local_mult, EpsPoly, ExpandedAlgebraIW,
    ExpansionGroup, GroupElement, HElement, NilTuple,
};
use serde_json::{json, Value};

use crate::input;
use crate::output::{bracket_table, combo, literal, report_json, vectors_json, CliError, Outcome};
use crate::SplitArgs;

pub fn validate(arg: &str) -> Result<Outcome, CliError> {
    let (alg, _) = input::algebra_unchecked(arg)?;
    let report = alg.validate();
    let mut text = String::new();
    if report.is_valid() {
        let _ = writeln!(text, "valid Lie algebra of dimension {} ({})", alg.dim(), alg.names().join(", "));
    } else {
        let _ = writeln!(text, "not a Lie algebra: {} violation(s)", report.violations.len());
        for v in &report.violations {
            let _ = writeln!(text, "  {v}");
        }
    }
    let mut machine = algebra_to_json(&alg);
    machine["report"] = report_json(&report);
    Ok(Outcome {
        ok: report.is_valid(),
        text,
        machine,
    })
}

fn jet_text(names: &[String], p: &EpsPoly) -> String {
    let terms: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(l, c)| match l {
            0 => format!("({})", combo(names, c)),
            1 => format!("eps ({})", combo(names, c)),
            _ => format!("eps^{l} ({})", combo(names, c)),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub fn contract(
    arg: &str,
    subalgebra: Option<&str>,
    family: Option<&Path>,
    order: Option<usize>,
) -> Result<Outcome, CliError> {
    let (alg, _) = input::algebra(arg)?;
    let fam = match (subalgebra, family) {
        (Some(s), _) => iw_family(&input::subalgebra(&alg, s)?),
        (None, Some(f)) => input::family(f)?,
        (None, None) => unreachable!("clap requires one of --subalgebra, --family"),
    };
    if fam.dim() != alg.dim() {
        return Err(iwexp::Error::DimensionMismatch {
            expected: alg.dim(),
            found: fam.dim(),
        }
        .into());
    }
    let limit = contract_family(&alg, &fam)?;
    let report = limit.validate();

    let mut text = format!("contracted algebra (dimension {}):\n", limit.dim());
    text.push_str(&bracket_table(&limit));
    let mut machine = algebra_to_json(&limit);

    if let Some(n) = order {
        let n = n.max(1);
        let names = alg.names();
        let _ = writeln!(text, "eps-brackets through eps^{n}:");
        let mut jets = Vec::new();
        for a in 0..alg.dim() {
            for b in a + 1..alg.dim() {
                let jet = eps_bracket(&alg, &fam, &alg.basis_vector(a), &alg.basis_vector(b), n)?;
                let _ = writeln!(text, "  [{}, {}]_eps = {}", names[a], names[b], jet_text(names, &jet));
                jets.push(json!({ "pair": [a + 1, b + 1], "jet": jet_to_json(&jet) }));
            }
        }
        machine["eps_brackets"] = Value::Array(jets);
    }
    if !report.is_valid() {
        let _ = writeln!(text, "limit fails the Lie axioms:\n{report}");
    }
    machine["report"] = report_json(&report);
    Ok(Outcome {
        ok: report.is_valid(),
        text,
        machine,
    })
}

pub fn expand(args: &SplitArgs, emit_constants: bool) -> Result<Outcome, CliError> {
    let (alg, _) = input::algebra(&args.algebra)?;
    let split = input::subalgebra(&alg, &args.subalgebra)?;
    let ea = ExpandedAlgebraIW::new(alg, split, args.order)?;
    let constants = ea.structure_constants()?;
    let report = constants.validate();
    let mut machine = algebra_to_json(&constants);

    let text = if emit_constants {
        format!("{}\n", serde_json::to_string_pretty(&machine).expect("serializable"))
    } else {
        let mut t = format!(
            "order-{} expansion: dimension {} ({})\n",
            args.order,
            ea.dim(),
            constants.names().join(", ")
        );
        t.push_str(&bracket_table(&constants));
        let _ = writeln!(t, "Jacobi over all basis triples: {report}");
        t
    };
    machine["order"] = json!(args.order);
    machine["report"] = report_json(&report);
    Ok(Outcome {
        ok: report.is_valid(),
        text,
        machine,
    })
}

fn group(args: &SplitArgs, cap: usize) -> Result<ExpansionGroup, CliError> {
    let (alg, _) = input::algebra(&args.algebra)?;
    let split = input::subalgebra(&alg, &args.subalgebra)?;
    Ok(ExpansionGroup::with_cap(alg, split, args.order, cap)?)
}

fn nil(grp: &ExpansionGroup, arg: &str) -> Result<NilTuple, CliError> {
    let (mids, top) = input::tuple(arg, grp.algebra().dim(), grp.order())?;
    Ok(grp.nil_tuple(mids, top)?)
}

fn entries(t: &NilTuple) -> Vec<iwexp::AlgVector> {
    let mut v = t.mids.clone();
    v.push(t.top.clone());
    v
}

pub fn star(args: &SplitArgs, a: &str, b: &str, cap: usize) -> Result<Outcome, CliError> {
    let grp = group(args, cap)?;
    let (a, b) = (nil(&grp, a)?, nil(&grp, b)?);
    let r = grp.star(&a, &b)?;
    let text = format!(
        "{} * {} =\n  {}\n",
        literal(&entries(&a)),
        literal(&entries(&b)),
        literal(&entries(&r))
    );
    let machine = json!({
        "order": args.order,
        "a": vectors_json(&entries(&a)),
        "b": vectors_json(&entries(&b)),
        "result": vectors_json(&entries(&r)),
        "report": { "ok": true },
    });
    Ok(Outcome { ok: true, text, machine })
}

pub fn group_mult(
    args: &SplitArgs,
    h1: Option<&str>,
    a: &str,
    h2: Option<&str>,
    b: &str,
    cap: usize,
) -> Result<Outcome, CliError> {
    let grp = group(args, cap)?;
    let n = grp.algebra().dim();
    let g1 = GroupElement {
        h: HElement::new(input::square_matrix(h1, n)?, None),
        nil: nil(&grp, a)?,
    };
    let g2 = GroupElement {
        h: HElement::new(input::square_matrix(h2, n)?, None),
        nil: nil(&grp, b)?,
    };
    let r = grp.group_mult(&g1, &g2)?;
    let rows: Vec<String> = (0..n)
        .map(|i| {
            r.h.ad
                .row(i)
                .iter()
                .map(iwexp::scalar::format_rational)
                .collect::<Vec<_>>()
                .join(", ")
        })
        .collect();
    let text = format!("h = [{}]\nnil = {}\n", rows.join("; "), literal(&entries(&r.nil)));
    let machine = json!({
        "order": args.order,
        "h": matrix_to_json(&r.h.ad),
        "nil": vectors_json(&entries(&r.nil)),
        "report": { "ok": true },
    });
    Ok(Outcome { ok: true, text, machine })
}

pub fn example(order: usize, seed: u64) -> Result<Outcome, CliError> {
    let report = so3_example(order, seed)?;
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            let mut v = json!({
                "name": c.name,
                "samples": c.samples,
                "mismatches": c.mismatches,
                "passed": c.passed(),
            });
            if let Some(e) = c.max_error {
                // Diagnostic only; kept as a string so no float reaches the output.
                v["max_error"] = json!(format!("{e:.3e}"));
            }
            v
        })
        .collect();
    let machine = json!({
        "example": "so3",
        "order": order,
        "seed": seed,
        "checks": checks,
        "report": { "ok": report.passed() },
    });
    Ok(Outcome {
        ok: report.passed(),
        text: report.to_string(),
        machine,
    })
}

pub fn oracle(
    arg: &str,
    rep_path: Option<&Path>,
    order: usize,
    trials: usize,
    seed: u64,
    cap: usize,
) -> Result<Outcome, CliError> {
    let (alg, builtin_rep) = input::algebra(arg)?;
    let rep = match (rep_path, builtin_rep) {
        (Some(p), _) => input::representation(&alg, p)?,
        (None, Some(r)) => r,
        (None, None) => {
            return Err(CliError::Io(format!("{arg}: no built-in representation, pass --rep")));
        }
    };
    let rep_report = check_representation(&alg, &rep);
    if !rep_report.is_valid() {
        return Err(iwexp::Error::UnfaithfulRepresentation(rep_report.to_string()).into());
    }
    let mut sampler = Sampler::new(seed);
    let mut mismatches = Vec::new();
    for trial in 0..trials {
        let p = sampler.jet(alg.dim(), order, order + 1);
        let q = sampler.jet(alg.dim(), order, order + 1);
        let bch = local_mult_capped(&alg, &p, &q, order, cap)?;
        let direct = oracle_local_mult(&rep, &p, &q, order)?;
        if bch != direct {
            mismatches.push(trial);
        }
    }
    let ok = mismatches.is_empty();
    let text = format!(
        "BCH vs matrix log(exp * exp) through eps^{order}: {} of {trials} trials agree exactly{}\n",
        trials - mismatches.len(),
        if ok { String::new() } else { format!(" (mismatched trials {mismatches:?})") }
    );
    let machine = json!({
        "order": order,
        "trials": trials,
        "seed": seed,
        "mismatched_trials": mismatches,
        "report": { "ok": ok },
    });
    Ok(Outcome { ok, text, machine })
}
