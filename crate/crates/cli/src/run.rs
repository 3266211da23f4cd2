//! Command dispatch: runs an engine on a scenario and assembles the text
//! summary, the certificate and the exit code.

use std::fmt::Write as _;

use serde_json::Value;

use galpt_core::galois::{
    check_extendability, check_three_inner, check_three_outer, check_two_inner, check_two_outer, construct_inner,
    construct_outer, generic_fiber_orbit_test, uniqueness_compare, verify_quotient_rational, Centers, CheckKind,
    ConditionReport, Evidence, ExtendInput,
};
use galpt_core::action::invariant_generator;
use galpt_core::wire::{self, Inputs, OracleRun};
use galpt_core::{Error, ErrorClass, Result};

use crate::scenario::Scenario;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_LIMITATION: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Construct,
    Extend,
    Equiv,
    Oracle,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub exit: i32,
    pub summary: String,
    pub certificate: Option<Value>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::InvalidInput => EXIT_INVALID,
        ErrorClass::Limitation => EXIT_LIMITATION,
        ErrorClass::Internal => EXIT_INTERNAL,
    }
}

pub fn error_outcome(e: &Error) -> Outcome {
    Outcome { exit: exit_code(e), summary: format!("error [{}]: {e}\n", e.code()), certificate: None }
}

pub fn run(sc: &Scenario, cmd: Command) -> Outcome {
    let res = match cmd {
        Command::Check => check(sc).map(|(out, _)| out),
        Command::Construct => construct(sc),
        Command::Extend => extend(sc),
        Command::Equiv => equiv(sc),
        Command::Oracle => oracle(sc),
    };
    res.unwrap_or_else(|e| error_outcome(&e))
}

/// Re-checks a certificate file's contents.
pub fn verify_text(text: &str) -> Outcome {
    let v: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => return error_outcome(&Error::Parse(e.to_string())),
    };
    match wire::verify_certificate(&v) {
        Ok(lines) => {
            let mut s = String::new();
            for l in lines {
                let _ = writeln!(s, "ok  {l}");
            }
            s.push_str("certificate verified\n");
            Outcome { exit: EXIT_OK, summary: s, certificate: None }
        }
        Err(e @ Error::CertificationFailed(_)) => {
            Outcome { exit: EXIT_REFUTED, summary: format!("certificate rejected: {e}\n"), certificate: None }
        }
        Err(e) => error_outcome(&e),
    }
}

fn header(sc: &Scenario, what: &str) -> String {
    let k = &sc.field;
    let mut s = format!(
        "scenario {}: {what} over F_{}, curve {} (seed {})\n",
        sc.name,
        k.order(),
        sc.curve.form().render(&["X", "Y", "Z"]),
        sc.seed
    );
    if sc.working_ext > 1 {
        let _ = writeln!(s, "working extension of degree {}", sc.working_ext);
    }
    s
}

fn groups_needed(kind: CheckKind) -> usize {
    match kind {
        CheckKind::TwoInner | CheckKind::TwoOuter => 2,
        _ => 3,
    }
}

fn run_check(sc: &Scenario, kind: CheckKind) -> Result<(ConditionReport, Inputs)> {
    let n = groups_needed(kind);
    let input = sc.check_input(n)?;
    let mut inputs = Inputs { curve: sc.curve.clone(), groups: input.groups.clone(), points: Vec::new(), q: None, seed: sc.seed };
    let report = if kind.is_inner() {
        let pts = sc.selected_points();
        if pts.len() < n {
            return Err(Error::Precondition(format!("{} needs {n} points in args.points", kind.as_str())));
        }
        inputs.points = pts[..n].to_vec();
        match kind {
            CheckKind::TwoInner => check_two_inner(&input, &inputs.points)?,
            _ => check_three_inner(&input, &inputs.points)?,
        }
    } else {
        let q = sc.q_point()?;
        inputs.q = Some(q);
        match kind {
            CheckKind::TwoOuter => check_two_outer(&input, &q)?,
            _ => check_three_outer(&input, &q)?,
        }
    };
    Ok((report, inputs))
}

fn report_text(sc: &Scenario, r: &ConditionReport) -> String {
    let k = &sc.field;
    let mut s = String::new();
    for c in &r.conditions {
        let _ = writeln!(s, "  ({}) {}: {}", c.label, c.verdict.as_str(), c.summary);
    }
    for (i, t) in r.invariants.iter().enumerate() {
        let _ = writeln!(s, "  t_{} = {}", i + 1, t.render());
    }
    if let Some(d) = &r.divisor {
        let _ = writeln!(s, "  D = {}", d.render(k));
    }
    for c in &r.conditions {
        if let Evidence::Span { certificate, .. } = &c.evidence {
            if let Some(cs) = certificate.coefficients() {
                let cs: Vec<String> = cs.iter().map(|&x| k.display(x)).collect();
                let _ = writeln!(s, "  span coefficients of h over (1, f, g): ({})", cs.join(", "));
            }
        }
    }
    for n in &r.notes {
        let _ = writeln!(s, "  note: {n}");
    }
    match r.first_failure() {
        None if r.overall => s.push_str("criteria hold\n"),
        Some(c) => {
            let _ = writeln!(s, "criteria refuted at condition ({})", c.label);
        }
        None => s.push_str("criteria refuted\n"),
    }
    s
}

fn check(sc: &Scenario) -> Result<(Outcome, Option<(ConditionReport, Inputs)>)> {
    let kind = sc.kind()?;
    let (report, inputs) = run_check(sc, kind)?;
    let mut summary = header(sc, kind.as_str());
    summary.push_str(&report_text(sc, &report));
    let exit = if report.overall { EXIT_OK } else { EXIT_REFUTED };
    let certificate = Some(wire::check_certificate(&inputs, &report));
    Ok((Outcome { exit, summary, certificate }, Some((report, inputs))))
}

fn construct(sc: &Scenario) -> Result<Outcome> {
    let (out, data) = check(sc)?;
    let Some((report, inputs)) = data else { return Ok(out) };
    if !report.overall {
        return Ok(out);
    }
    let k = &sc.field;
    let kind = report.kind;
    let input = sc.check_input(groups_needed(kind))?;
    let cons = if kind.is_inner() {
        construct_inner(&input, &inputs.points, &report)?
    } else {
        construct_outer(&input, inputs.q.as_ref().expect("outer inputs carry q"), &report)?
    };
    let mut s = out.summary;
    let m = &cons.model;
    let _ = writeln!(s, "embedding (f : g : 1) with f = {}, g = {}", m.f.render(), m.g.render());
    let _ = writeln!(
        s,
        "image: {} = 0 (degree {}, birational {})",
        m.phi.render(&["U", "V", "W"]),
        m.degree(),
        m.birational
    );
    for (mark, c) in cons.marks.iter().zip(&cons.certificates) {
        let _ = writeln!(
            s,
            "  Galois point {} ({}): group order {}, projection degree {}, Artin {}",
            mark.render(k),
            if c.inner { "inner" } else { "outer" },
            c.group.order(),
            c.degree.map_or("-".into(), |d| d.to_string()),
            c.artin
        );
    }
    if let Some(q) = &cons.q_image {
        let _ = writeln!(s, "  φ(Q) = {}", q.render(k));
    }
    Ok(Outcome { exit: EXIT_OK, summary: s, certificate: Some(wire::construct_certificate(&inputs, &report, &cons)) })
}

fn extend(sc: &Scenario) -> Result<Outcome> {
    let sigma = sc.sigma.clone().ok_or_else(|| Error::Precondition("extend needs args.sigma".into()))?;
    let groups = sc.selected_groups();
    let points = sc.selected_points();
    if groups.len() != 3 || points.len() != 3 {
        return Err(Error::Precondition("extend needs three groups and three points".into()));
    }
    let input = sc.check_input(2)?;
    let report = check_two_inner(&input, &points[..2])?;
    let mut s = header(sc, "extend");
    if !report.overall {
        s.push_str(&report_text(sc, &report));
        s.push_str("no two-point model to extend on\n");
        return Ok(Outcome { exit: EXIT_REFUTED, summary: s, certificate: None });
    }
    let model = construct_inner(&input, &points[..2], &report)?.model;
    let _ = writeln!(s, "model: {} = 0", model.phi.render(&["U", "V", "W"]));
    let ext = ExtendInput { model: model.clone(), sigma: sigma.clone(), points: points.clone(), groups: groups.clone(), seed: sc.seed };
    let r = check_extendability(&ext)?;
    let _ = writeln!(s, "σ = {}", sigma.render());
    for c in &r.conditions {
        let _ = writeln!(s, "  ({}) {}: {}", c.label, c.verdict.as_str(), c.summary);
    }
    let _ = writeln!(s, "  total inflections at P_1, P_2, P_3: {}", r.fast_path);
    for t in &r.transcript {
        let _ = writeln!(s, "  {t}");
    }
    match &r.matrix {
        Some(m) => {
            let _ = writeln!(s, "σ̃ = {}", m.render());
        }
        None => s.push_str("σ does not extend to a linear map of the plane\n"),
    }
    let inputs = Inputs { curve: sc.curve.clone(), groups, points, q: None, seed: sc.seed };
    let cert = wire::extend_certificate(&inputs, &sigma, &model, &r);
    Ok(Outcome { exit: if r.extendable { EXIT_OK } else { EXIT_REFUTED }, summary: s, certificate: Some(cert) })
}

fn equiv(sc: &Scenario) -> Result<Outcome> {
    let kind = sc.kind()?;
    let n = groups_needed(kind);
    let input = sc.check_input(n)?;
    let mut inputs = Inputs { curve: sc.curve.clone(), groups: input.groups.clone(), points: Vec::new(), q: None, seed: sc.seed };
    let centers = if kind.is_inner() {
        inputs.points = sc.selected_points().into_iter().take(n).collect();
        Centers::Inner(inputs.points.clone())
    } else {
        let q = sc.q_point()?;
        inputs.q = Some(q);
        Centers::Outer(q)
    };
    let [a, b] = sc.seeds;
    let u = uniqueness_compare(&input, &centers, a, b)?;
    let mut s = header(sc, &format!("equiv ({})", kind.as_str()));
    for (m, seed) in u.models.iter().zip(u.seeds) {
        let _ = writeln!(s, "  seed {seed}: {} = 0", m.phi.render(&["U", "V", "W"]));
    }
    let _ = writeln!(s, "projective equivalence: {}", u.map.render());
    Ok(Outcome { exit: EXIT_OK, summary: s, certificate: Some(wire::equiv_certificate(&inputs, kind.as_str(), &u)) })
}

fn oracle(sc: &Scenario) -> Result<Outcome> {
    let mut s = header(sc, "oracle");
    let mut runs = Vec::new();
    let mut agree = true;
    for (i, name) in sc.group_names.iter().enumerate() {
        let g = sc.group(name);
        let t = match sc.invariants.get(name) {
            Some(t) => t.clone(),
            None => invariant_generator(g, sc.seed.wrapping_add(i as u64))?,
        };
        let artin = verify_quotient_rational(g, &t, sc.seed)?.positive;
        let transcript = generic_fiber_orbit_test(&t, g, sc.trials, sc.seed)?;
        let _ = writeln!(
            s,
            "  {name} (order {}), t = {}: {} fibers sampled, single orbits {}, Artin {}",
            g.order(),
            t.render(),
            transcript.trials.len(),
            transcript.passes,
            artin
        );
        agree &= transcript.passes == artin;
        runs.push(OracleRun { group: i, t, artin, transcript });
    }
    s.push_str(if agree { "oracle agrees with the Artin verdicts\n" } else { "oracle DISAGREES with an Artin verdict\n" });
    let inputs = Inputs { curve: sc.curve.clone(), groups: sc.selected_groups(), points: Vec::new(), q: None, seed: sc.seed };
    let exit = if agree { EXIT_OK } else { EXIT_REFUTED };
    Ok(Outcome { exit, summary: s, certificate: Some(wire::oracle_certificate(&inputs, &runs)) })
}
