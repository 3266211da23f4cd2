use crate::action::{invariant_generator, mobius_normalize, mobius_pole, orbit_and_stabilizer, orbit_sum, AutGroup, RatFunc};
use crate::algebra::Fe;
use crate::curve::{CurvePoint, Divisor, PlaneCurve};
use crate::error::{Error, Result};
use crate::linsys::{span_coefficients, span_dimension};

use super::{
    inner_common_divisor, outer_common_divisor, verify_pairwise_trivial, verify_quotient_rational, CheckKind,
    ChordCheck, Condition, ConditionReport, Evidence, Verdict,
};

/// Groups with optional fixed-field generators, all acting on `curve`.
#[derive(Clone, Debug)]
pub struct CheckInput {
    pub curve: PlaneCurve,
    pub groups: Vec<AutGroup>,
    /// One entry per group; `None` asks for a derived generator.
    pub invariants: Vec<Option<RatFunc>>,
    pub seed: u64,
}

pub fn check_two_inner(input: &CheckInput, points: &[CurvePoint]) -> Result<ConditionReport> {
    run_inner(CheckKind::TwoInner, input, points)
}

pub fn check_three_inner(input: &CheckInput, points: &[CurvePoint]) -> Result<ConditionReport> {
    run_inner(CheckKind::ThreeInner, input, points)
}

pub fn check_two_outer(input: &CheckInput, q: &CurvePoint) -> Result<ConditionReport> {
    run_outer(CheckKind::TwoOuter, input, q)
}

pub fn check_three_outer(input: &CheckInput, q: &CurvePoint) -> Result<ConditionReport> {
    run_outer(CheckKind::ThreeOuter, input, q)
}

fn arity(kind: CheckKind) -> usize {
    match kind {
        CheckKind::TwoInner | CheckKind::TwoOuter => 2,
        CheckKind::ThreeInner | CheckKind::ThreeOuter => 3,
    }
}

fn validate(kind: CheckKind, input: &CheckInput) -> Result<()> {
    let n = arity(kind);
    if input.groups.len() != n {
        return Err(Error::Precondition(format!("{} expects {n} groups, got {}", kind.as_str(), input.groups.len())));
    }
    if input.invariants.len() != n {
        return Err(Error::Precondition("one invariant slot per group is required".into()));
    }
    for (i, g) in input.groups.iter().enumerate() {
        if g.curve() != &input.curve {
            return Err(Error::Precondition(format!("group {} acts on a different curve", i + 1)));
        }
        if let Some(t) = &input.invariants[i] {
            if t.curve() != &input.curve {
                return Err(Error::Precondition(format!("invariant {} lives on a different curve", i + 1)));
            }
        }
        let min = if kind == CheckKind::ThreeInner { 3 } else { 2 };
        if g.order() < min {
            let why = if g.order() == 1 { "trivial group is degenerate; " } else { "" };
            return Err(Error::HypothesisViolation(format!(
                "{why}group {} has order {}, {} requires order at least {min}",
                i + 1,
                g.order(),
                kind.as_str()
            )));
        }
    }
    Ok(())
}

fn smooth_point(c: &PlaneCurve, p: &CurvePoint) -> Result<()> {
    let k = c.field();
    if !c.contains(p.coords()) {
        return Err(Error::NotOnCurve(p.render(k)));
    }
    if !c.is_smooth_at(p.coords()) {
        return Err(Error::SingularPoint(p.render(k)));
    }
    Ok(())
}

struct Builder {
    conditions: Vec<Condition>,
    failed: bool,
}

impl Builder {
    fn push(&mut self, label: &'static str, pass: bool, summary: String, evidence: Evidence) {
        let verdict = if pass { Verdict::Pass } else { Verdict::Fail };
        self.failed |= !pass;
        self.conditions.push(Condition { label, verdict, summary, evidence });
    }

    fn skip(&mut self, label: &'static str) {
        self.conditions.push(Condition {
            label,
            verdict: Verdict::Skipped,
            summary: "not evaluated: an earlier condition failed".into(),
            evidence: Evidence::None,
        });
    }
}

/// Condition (a), returning the invariants used.
fn condition_a(input: &CheckInput, b: &mut Builder) -> Result<Vec<RatFunc>> {
    let mut certs = Vec::new();
    let mut ts = Vec::new();
    for (i, g) in input.groups.iter().enumerate() {
        let (t, derived) = match &input.invariants[i] {
            Some(t) => (t.clone(), false),
            None => (invariant_generator(g, input.seed.wrapping_add(i as u64))?, true),
        };
        let mut cert = verify_quotient_rational(g, &t, input.seed)?;
        cert.group = i;
        cert.derived = derived;
        ts.push(t);
        certs.push(cert);
    }
    let pass = certs.iter().all(|c| c.positive);
    let summary = match certs.iter().find(|c| !c.positive) {
        None => {
            let degs: Vec<String> = certs.iter().map(|c| c.order.to_string()).collect();
            format!("each t_i is invariant with degree |G_i| ({})", degs.join(", "))
        }
        Some(c) if !c.invariant => format!("group {}: {} is not invariant", c.group + 1, c.t.render()),
        Some(c) => format!(
            "group {}: {} has degree {}, group order {}",
            c.group + 1,
            c.t.render(),
            c.degree.map_or("0".into(), |d| d.to_string()),
            c.order
        ),
    };
    b.push("a", pass, summary, Evidence::Quotient(certs));
    Ok(ts)
}

fn condition_b(input: &CheckInput, b: &mut Builder) -> Result<()> {
    let refs: Vec<&AutGroup> = input.groups.iter().collect();
    let entries = verify_pairwise_trivial(&refs)?;
    let summary = match entries.iter().find(|e| e.witness.is_some()) {
        None => "all pairwise intersections are trivial".into(),
        Some(e) => format!(
            "G_{} and G_{} share {}",
            e.i + 1,
            e.j + 1,
            e.witness.as_ref().unwrap().render()
        ),
    };
    b.push("b", entries.iter().all(|e| e.witness.is_none()), summary, Evidence::Pairwise(entries));
    Ok(())
}

fn condition_c(c: &PlaneCurve, evidence: Evidence, inner: bool, b: &mut Builder) -> Option<Divisor> {
    let k = c.field();
    let Evidence::Divisors { candidates, common, first_mismatch } = &evidence else { unreachable!() };
    let label = if inner { "c" } else { "c'" };
    let describe = |i: usize, j: usize| {
        if inner {
            format!("P_{} + Σ_{{G_{}}} σ(P_{})", i + 1, i + 1, j + 1)
        } else {
            format!("Σ_{{G_{}}} σ(Q)", i + 1)
        }
    };
    let summary = match (common, first_mismatch) {
        (Some(d), _) => format!("D = {}", d.render(k)),
        (None, Some((i, j))) => {
            let bad = candidates.iter().find(|x| x.i == *i && x.j == *j).unwrap();
            let first = &candidates[0];
            format!(
                "{} = {} differs from {} = {}",
                describe(*i, *j),
                bad.divisor.render(k),
                describe(first.i, first.j),
                first.divisor.render(k)
            )
        }
        (None, None) => unreachable!(),
    };
    let d = common.clone();
    b.push(label, d.is_some(), summary, evidence);
    d
}

/// Condition (d)/(d'): `h ∈ <1, f, g>`.
fn condition_span(fns: &[RatFunc], inner: bool, b: &mut Builder) -> Result<()> {
    let c = fns[0].curve();
    let one = RatFunc::constant(c, Fe::ONE);
    let basis = vec![one.clone(), fns[0].clone(), fns[1].clone()];
    let certificate = span_coefficients(&fns[2], &basis)?;
    let dimension = span_dimension(&[one, fns[0].clone(), fns[1].clone(), fns[2].clone()])?;
    let pass = dimension <= 3;
    let k = c.field();
    let coeff = |x| {
        let s = k.display(x);
        if s.contains('+') { format!("({s})") } else { s }
    };
    let summary = match certificate.coefficients() {
        Some(cs) if pass => format!(
            "h = {} + {}·f + {}·g; the system has dimension {}",
            coeff(cs[0]),
            coeff(cs[1]),
            coeff(cs[2]),
            dimension - 1
        ),
        _ => format!("1, f, g, h span a system of dimension {}", dimension - 1),
    };
    b.push(if inner { "d" } else { "d'" }, pass, summary, Evidence::Span { certificate, dimension });
    Ok(())
}

fn run_inner(kind: CheckKind, input: &CheckInput, points: &[CurvePoint]) -> Result<ConditionReport> {
    validate(kind, input)?;
    let n = arity(kind);
    if points.len() != n {
        return Err(Error::Precondition(format!("{} expects {n} points", kind.as_str())));
    }
    for p in points {
        smooth_point(&input.curve, p)?;
    }
    let refs: Vec<&AutGroup> = input.groups.iter().collect();
    // distinctness is a precondition, checked before any condition runs
    let c_evidence = inner_common_divisor(&refs, points)?;

    let mut b = Builder { conditions: Vec::new(), failed: false };
    let mut notes = Vec::new();
    let invariants = condition_a(input, &mut b)?;
    if !b.failed {
        condition_b(input, &mut b)?;
    } else {
        b.skip("b");
    }
    let mut divisor = None;
    if !b.failed {
        divisor = condition_c(&input.curve, c_evidence, true, &mut b);
    } else {
        b.skip("c");
    }
    let mut functions = Vec::new();
    if !b.failed {
        let (g, t) = (&input.groups, &invariants);
        functions.push(mobius_normalize(&t[0], &g[0], &points[0], &points[1])?);
        functions.push(mobius_normalize(&t[1], &g[1], &points[1], &points[0])?);
        if n == 3 {
            functions.push(mobius_normalize(&t[2], &g[2], &points[2], &points[0])?);
            condition_span(&functions, true, &mut b)?;
        } else {
            notes.push("1, f, g always span a system of dimension at most 2, so (d) is not tested".into());
        }
    } else if n == 3 {
        b.skip("d");
    }
    let overall = !b.failed;
    let mut chords = Vec::new();
    if overall && input.groups[0].order() + 1 >= 4 {
        chords = chord_checks(&input.groups, points, divisor.as_ref().unwrap());
        if let Some(bad) = chords.iter().find(|c| !c.holds()) {
            return Err(Error::CertificationFailed(format!(
                "chord through P_{} and P_{} is tangent or the points share an orbit",
                bad.i + 1,
                bad.j + 1
            )));
        }
    }
    Ok(ConditionReport {
        kind,
        conditions: b.conditions,
        overall,
        divisor,
        functions,
        invariants,
        chords,
        notes,
        seed: input.seed,
    })
}

/// The line through two marks cuts `D`; the tangent at `P_i` cuts
/// `P_i + Σ σ(P_i)`.
fn chord_checks(groups: &[AutGroup], points: &[CurvePoint], d: &Divisor) -> Vec<ChordCheck> {
    let mut out = Vec::new();
    for i in 0..points.len() {
        let tangent_order = orbit_sum(&groups[i], &points[i]).multiplicity(&points[i]) + 1;
        let orbit = orbit_and_stabilizer(&groups[i], &points[i]).points;
        for j in 0..points.len() {
            if i != j {
                out.push(ChordCheck {
                    i,
                    j,
                    chord_order: d.multiplicity(&points[i]),
                    tangent_order,
                    orbit_avoids: !orbit.contains(&points[j]),
                });
            }
        }
    }
    out
}

fn run_outer(kind: CheckKind, input: &CheckInput, q: &CurvePoint) -> Result<ConditionReport> {
    validate(kind, input)?;
    smooth_point(&input.curve, q)?;
    let n = arity(kind);
    let refs: Vec<&AutGroup> = input.groups.iter().collect();
    let c_evidence = outer_common_divisor(&refs, q)?;

    let mut b = Builder { conditions: Vec::new(), failed: false };
    let mut notes = Vec::new();
    let invariants = condition_a(input, &mut b)?;
    if !b.failed {
        condition_b(input, &mut b)?;
    } else {
        b.skip("b");
    }
    let mut divisor = None;
    if !b.failed {
        divisor = condition_c(&input.curve, c_evidence, false, &mut b);
    } else {
        b.skip("c'");
    }
    let mut functions = Vec::new();
    if !b.failed {
        for i in 0..n {
            functions.push(mobius_pole(&invariants[i], &input.groups[i], q)?);
        }
        if n == 3 {
            condition_span(&functions, false, &mut b)?;
        } else {
            notes.push("1, f, g always span a system of dimension at most 2, so (d') is not tested".into());
        }
    } else if n == 3 {
        b.skip("d'");
    }
    Ok(ConditionReport {
        kind,
        overall: !b.failed,
        conditions: b.conditions,
        divisor,
        functions,
        invariants,
        chords: Vec::new(),
        notes,
        seed: input.seed,
    })
}
