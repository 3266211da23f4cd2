//! JSON encoding of curve data, reports and certificates, and re-checking
//! of certificates without search. Objects are `serde_json` maps, so keys
//! come out sorted and output is byte-stable.

use serde_json::{json, Map, Value};

use crate::action::{function_degree, is_invariant, orbit_and_stabilizer, orbit_sum, AutGroup, ProjMap, RatFunc, DEFAULT_CAP};
use crate::algebra::{build_field, Fe, Field, TriPoly};
use crate::curve::{CurvePoint, Divisor, PlaneCurve, ProjPoint};
use crate::error::{Error, Result};
use crate::galois::{
    extension_identity_holds, galois_certificate, CheckKind, Condition, ConditionReport, Construction, Evidence,
    ExtensionReport, GaloisCertificate, OracleTranscript, UniquenessReport, Verdict,
};
use crate::linsys::{implicitize, span_dimension, EmbeddingModel, SpanCertificate, SpanOutcome};

pub const SCHEMA_VERSION: u64 = 1;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn fail(msg: impl Into<String>) -> Error {
    Error::CertificationFailed(msg.into())
}

pub fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| perr(format!("missing key `{key}`")))
}

pub fn get_u64(v: &Value, key: &str) -> Result<u64> {
    get(v, key)?.as_u64().ok_or_else(|| perr(format!("`{key}` must be a non-negative integer")))
}

fn get_bool(v: &Value, key: &str) -> Result<bool> {
    get(v, key)?.as_bool().ok_or_else(|| perr(format!("`{key}` must be a boolean")))
}

pub fn get_array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    get(v, key)?.as_array().ok_or_else(|| perr(format!("`{key}` must be an array")))
}

fn get_str<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    get(v, key)?.as_str().ok_or_else(|| perr(format!("`{key}` must be a string")))
}

fn opt<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.get(key).filter(|x| !x.is_null())
}

// ---- basic objects

pub fn field_json(k: &Field) -> Value {
    json!({ "p": k.characteristic(), "modulus": k.modulus() })
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    let p = get_u64(v, "p")?;
    let modulus: Vec<u32> = match opt(v, "modulus") {
        None => vec![0, 1],
        Some(m) => m
            .as_array()
            .ok_or_else(|| perr("`modulus` must be an array"))?
            .iter()
            .map(|c| c.as_u64().map(|c| c as u32).ok_or_else(|| perr("modulus coefficients must be integers")))
            .collect::<Result<_>>()?,
    };
    build_field(p, &modulus)
}

/// Little-endian coordinates over the prime field.
pub fn fe_json(k: &Field, a: Fe) -> Value {
    json!(k.coords(a))
}

/// Accepts a coordinate vector or a plain (possibly negative) integer.
pub fn fe_from_json(k: &Field, v: &Value) -> Result<Fe> {
    if let Some(n) = v.as_i64() {
        return Ok(k.from_i64(n));
    }
    let arr = v.as_array().ok_or_else(|| perr(format!("field element expected, got {v}")))?;
    let mut acc = Fe::ZERO;
    let mut pow = Fe::ONE;
    let t = k.gen();
    if arr.len() > k.degree() as usize {
        return Err(Error::ForeignElement(format!("coordinate vector {v} (the field has degree {})", k.degree())));
    }
    for c in arr {
        let n = c.as_i64().ok_or_else(|| perr(format!("bad coordinate in {v}")))?;
        acc = k.add(acc, k.mul(k.from_i64(n), pow));
        pow = k.mul(pow, t);
    }
    Ok(acc)
}

pub fn vec3_json(k: &Field, x: &[Fe; 3]) -> Value {
    Value::Array(x.iter().map(|&c| fe_json(k, c)).collect())
}

fn vec3_from_json(k: &Field, v: &Value) -> Result<[Fe; 3]> {
    let arr = v.as_array().filter(|a| a.len() == 3).ok_or_else(|| perr(format!("three coordinates expected, got {v}")))?;
    Ok([fe_from_json(k, &arr[0])?, fe_from_json(k, &arr[1])?, fe_from_json(k, &arr[2])?])
}

pub fn point_json(k: &Field, p: &ProjPoint) -> Value {
    vec3_json(k, p.coords())
}

pub fn point_from_json(k: &Field, v: &Value) -> Result<ProjPoint> {
    ProjPoint::new(k, vec3_from_json(k, v)?)
}

pub fn matrix_json(m: &ProjMap) -> Value {
    let k = m.field();
    Value::Array(m.matrix().iter().map(|r| vec3_json(k, r)).collect())
}

pub fn matrix_from_json(k: &Field, v: &Value) -> Result<ProjMap> {
    let rows = v.as_array().filter(|a| a.len() == 3).ok_or_else(|| perr("a matrix must have three rows"))?;
    let m = [vec3_from_json(k, &rows[0])?, vec3_from_json(k, &rows[1])?, vec3_from_json(k, &rows[2])?];
    ProjMap::new(k, m)
}

/// Terms `[coefficient, ex, ey, ez]` in increasing exponent order.
pub fn poly_json(f: &TriPoly) -> Value {
    let k = f.field();
    Value::Array(f.terms().map(|(e, &c)| json!([fe_json(k, c), e[0], e[1], e[2]])).collect())
}

pub fn poly_from_json(k: &Field, v: &Value) -> Result<TriPoly> {
    let arr = v.as_array().ok_or_else(|| perr("a polynomial is an array of terms"))?;
    let mut f = TriPoly::zero(k);
    for t in arr {
        let t = t.as_array().filter(|t| t.len() == 4).ok_or_else(|| perr(format!("term {t} is not [c, ex, ey, ez]")))?;
        let c = fe_from_json(k, &t[0])?;
        let mut e = [0u32; 3];
        for i in 0..3 {
            e[i] = t[i + 1].as_u64().ok_or_else(|| perr("exponents must be non-negative integers"))? as u32;
        }
        f.add_term(e, c);
    }
    Ok(f)
}

pub fn divisor_json(k: &Field, d: &Divisor) -> Value {
    Value::Array(d.terms().map(|(p, &m)| json!({ "point": point_json(k, p), "mult": m })).collect())
}

pub fn divisor_from_json(k: &Field, v: &Value) -> Result<Divisor> {
    let arr = v.as_array().ok_or_else(|| perr("a divisor is an array"))?;
    let mut d = Divisor::zero();
    for t in arr {
        let m = get(t, "mult")?.as_i64().ok_or_else(|| perr("`mult` must be an integer"))?;
        d.add_point(point_from_json(k, get(t, "point")?)?, m);
    }
    Ok(d)
}

pub fn ratfunc_json(f: &RatFunc) -> Value {
    json!({ "num": poly_json(f.num()), "den": poly_json(f.den()), "text": f.render() })
}

pub fn ratfunc_from_json(c: &PlaneCurve, v: &Value) -> Result<RatFunc> {
    let k = c.field();
    RatFunc::new(c, poly_from_json(k, get(v, "num")?)?, poly_from_json(k, get(v, "den")?)?)
}

pub fn group_json(g: &AutGroup) -> Value {
    json!({ "generators": g.generators().iter().map(matrix_json).collect::<Vec<_>>(), "order": g.order() })
}

pub fn group_from_json(c: &PlaneCurve, v: &Value) -> Result<AutGroup> {
    let k = c.field();
    let gens: Vec<ProjMap> = get_array(v, "generators")?.iter().map(|m| matrix_from_json(k, m)).collect::<Result<_>>()?;
    let g = AutGroup::closure(&gens, c, DEFAULT_CAP)?;
    if let Some(o) = v.get("order").and_then(|o| o.as_u64()) {
        if o as usize != g.order() {
            return Err(fail(format!("group closure has order {}, recorded {o}", g.order())));
        }
    }
    Ok(g)
}

fn points_json(k: &Field, pts: &[ProjPoint]) -> Value {
    Value::Array(pts.iter().map(|p| point_json(k, p)).collect())
}

fn points_from_json(k: &Field, v: &Value) -> Result<Vec<ProjPoint>> {
    v.as_array().ok_or_else(|| perr("points must be an array"))?.iter().map(|p| point_from_json(k, p)).collect()
}

// ---- inputs shared by all certificates

/// The data a certificate is about.
#[derive(Clone, Debug)]
pub struct Inputs {
    pub curve: PlaneCurve,
    pub groups: Vec<AutGroup>,
    pub points: Vec<CurvePoint>,
    pub q: Option<CurvePoint>,
    pub seed: u64,
}

pub fn inputs_json(inp: &Inputs) -> Value {
    let k = inp.curve.field();
    json!({
        "field": field_json(k),
        "curve": poly_json(inp.curve.form()),
        "groups": inp.groups.iter().map(group_json).collect::<Vec<_>>(),
        "points": points_json(k, &inp.points),
        "q": inp.q.map(|q| point_json(k, &q)),
        "seed": inp.seed,
    })
}

pub fn inputs_from_json(v: &Value) -> Result<Inputs> {
    let k = field_from_json(get(v, "field")?)?;
    let curve = PlaneCurve::new(poly_from_json(&k, get(v, "curve")?)?)?;
    let groups = get_array(v, "groups")?.iter().map(|g| group_from_json(&curve, g)).collect::<Result<_>>()?;
    let points = points_from_json(&k, get(v, "points")?)?;
    let q = opt(v, "q").map(|q| point_from_json(&k, q)).transpose()?;
    Ok(Inputs { curve, groups, points, q, seed: get_u64(v, "seed")? })
}

fn envelope(kind: &str, task: &str, inputs: &Inputs, body: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "task": task,
        "inputs": inputs_json(inputs),
        "body": body,
    })
}

// ---- condition reports

fn evidence_json(k: &Field, e: &Evidence) -> Value {
    match e {
        Evidence::None => Value::Null,
        Evidence::Quotient(cs) => json!({
            "type": "quotient",
            "groups": cs.iter().map(|c| json!({
                "group": c.group,
                "order": c.order,
                "t": ratfunc_json(&c.t),
                "derived": c.derived,
                "invariant": c.invariant,
                "degree": c.degree,
                "positive": c.positive,
            })).collect::<Vec<_>>(),
        }),
        Evidence::Pairwise(es) => json!({
            "type": "pairwise",
            "pairs": es.iter().map(|e| json!({
                "i": e.i, "j": e.j, "witness": e.witness.as_ref().map(matrix_json),
            })).collect::<Vec<_>>(),
        }),
        Evidence::Divisors { candidates, common, first_mismatch } => json!({
            "type": "divisors",
            "candidates": candidates.iter().map(|c| json!({
                "i": c.i, "j": c.j, "divisor": divisor_json(k, &c.divisor),
            })).collect::<Vec<_>>(),
            "common": common.as_ref().map(|d| divisor_json(k, d)),
            "first_mismatch": first_mismatch.map(|(i, j)| json!([i, j])),
        }),
        Evidence::Span { certificate, dimension } => json!({
            "type": "span",
            "target": ratfunc_json(&certificate.target),
            "basis": certificate.basis.iter().map(ratfunc_json).collect::<Vec<_>>(),
            "coefficients": certificate.coefficients().map(|c| c.iter().map(|&x| fe_json(k, x)).collect::<Vec<_>>()),
            "witness": match &certificate.outcome {
                SpanOutcome::Refuted { witness: Some(p) } => point_json(k, p),
                _ => Value::Null,
            },
            "dimension": dimension,
        }),
    }
}

fn condition_json(k: &Field, c: &Condition) -> Value {
    json!({
        "label": c.label,
        "verdict": c.verdict.as_str(),
        "summary": c.summary,
        "evidence": evidence_json(k, &c.evidence),
    })
}

pub fn report_json(r: &ConditionReport) -> Value {
    let k = r.invariants.first().map(|t| t.field().clone());
    let k = k.as_ref().expect("reports carry invariants");
    json!({
        "kind": r.kind.as_str(),
        "overall": r.overall,
        "conditions": r.conditions.iter().map(|c| condition_json(k, c)).collect::<Vec<_>>(),
        "divisor": r.divisor.as_ref().map(|d| divisor_json(k, d)),
        "functions": r.functions.iter().map(ratfunc_json).collect::<Vec<_>>(),
        "invariants": r.invariants.iter().map(ratfunc_json).collect::<Vec<_>>(),
        "chords": r.chords.iter().map(|c| json!({
            "i": c.i, "j": c.j, "chord_order": c.chord_order,
            "tangent_order": c.tangent_order, "orbit_avoids": c.orbit_avoids,
        })).collect::<Vec<_>>(),
        "notes": r.notes,
        "seed": r.seed,
    })
}

pub fn check_certificate(inputs: &Inputs, report: &ConditionReport) -> Value {
    envelope("check", report.kind.as_str(), inputs, json!({ "report": report_json(report) }))
}

// ---- constructions

fn model_json(m: &EmbeddingModel) -> Value {
    json!({
        "f": ratfunc_json(&m.f),
        "g": ratfunc_json(&m.g),
        "image": poly_json(&m.phi),
        "image_text": m.phi.render(&["U", "V", "W"]),
        "degree": m.degree(),
        "birational": m.birational,
        "map_degree": m.map_degree,
    })
}

fn galois_json(k: &Field, c: &GaloisCertificate, group: usize) -> Value {
    json!({
        "center": point_json(k, &c.center),
        "inner": c.inner,
        "lines": [vec3_json(k, &c.lines[0]), vec3_json(k, &c.lines[1])],
        "group": group,
        "group_order": c.group.order(),
        "projection": ratfunc_json(&c.projection),
        "invariant": c.invariant,
        "degree": c.degree,
        "smooth": c.smooth,
        "artin": c.artin,
    })
}

pub fn construct_certificate(inputs: &Inputs, report: &ConditionReport, cons: &Construction) -> Value {
    let k = inputs.curve.field();
    envelope(
        "construct",
        report.kind.as_str(),
        inputs,
        json!({
            "report": report_json(report),
            "model": model_json(&cons.model),
            "marks": points_json(k, &cons.marks),
            "q_image": cons.q_image.map(|q| point_json(k, &q)),
            "coefficients": cons.coefficients.as_ref().map(|c| c.iter().map(|&x| fe_json(k, x)).collect::<Vec<_>>()),
            "certificates": cons.certificates.iter().enumerate().map(|(i, c)| galois_json(k, c, i)).collect::<Vec<_>>(),
        }),
    )
}

// ---- extension, equivalence, oracle

pub fn extend_certificate(inputs: &Inputs, sigma: &ProjMap, model: &EmbeddingModel, r: &ExtensionReport) -> Value {
    let k = inputs.curve.field();
    envelope(
        "extend",
        "extend",
        inputs,
        json!({
            "sigma": matrix_json(sigma),
            "model": model_json(model),
            "conditions": r.conditions.iter().map(|c| condition_json(k, c)).collect::<Vec<_>>(),
            "fast_path": r.fast_path,
            "inflections": r.inflections.iter().map(|c| json!({
                "fixed": c.fixed, "tangent_order": c.tangent_order, "caveat": c.caveat,
            })).collect::<Vec<_>>(),
            "certificate": galois_json(k, &r.certificate, 2),
            "pulled": divisor_json(k, &r.pulled),
            "target": divisor_json(k, &r.target),
            "extendable": r.extendable,
            "matrix": r.matrix.as_ref().map(matrix_json),
            "transcript": r.transcript,
        }),
    )
}

pub fn equiv_certificate(inputs: &Inputs, task: &str, u: &UniquenessReport) -> Value {
    let k = inputs.curve.field();
    envelope(
        "equiv",
        task,
        inputs,
        json!({
            "models": u.models.iter().map(model_json).collect::<Vec<_>>(),
            "scalars": u.scalars.iter().map(|s| json!([fe_json(k, s[0]), fe_json(k, s[1])])).collect::<Vec<_>>(),
            "seeds": u.seeds,
            "map": matrix_json(&u.map),
        }),
    )
}

/// One oracle run: the group index, its function, the Artin verdict and the
/// transcript.
pub struct OracleRun {
    pub group: usize,
    pub t: RatFunc,
    pub artin: bool,
    pub transcript: OracleTranscript,
}

pub fn oracle_certificate(inputs: &Inputs, runs: &[OracleRun]) -> Value {
    let k = inputs.curve.field();
    envelope(
        "oracle",
        "oracle",
        inputs,
        json!({
            "runs": runs.iter().map(|r| json!({
                "group": r.group,
                "t": ratfunc_json(&r.t),
                "artin": r.artin,
                "order": r.transcript.order,
                "degree": r.transcript.degree,
                "passes": r.transcript.passes,
                "reason": r.transcript.reason,
                "seed": r.transcript.seed,
                "trials": r.transcript.trials.iter().map(|t| json!({
                    "lambda": fe_json(k, t.lambda),
                    "fiber": points_json(k, &t.fiber),
                    "single_orbit": t.single_orbit,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
    )
}

/// Stable text form: pretty-printed with sorted keys and a final newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

// ---- verification

/// Re-checks every identity a certificate asserts. Returns one line per
/// verified item.
pub fn verify_certificate(v: &Value) -> Result<Vec<String>> {
    let version = get_u64(v, "schema_version")?;
    if version != SCHEMA_VERSION {
        return Err(perr(format!("unsupported schema_version {version}")));
    }
    let inputs = inputs_from_json(get(v, "inputs")?)?;
    let body = get(v, "body")?;
    let mut log = vec![format!(
        "inputs: curve of degree {}, {} groups of orders {:?}",
        inputs.curve.degree(),
        inputs.groups.len(),
        inputs.groups.iter().map(|g| g.order()).collect::<Vec<_>>()
    )];
    match get_str(v, "kind")? {
        "check" => verify_report(&inputs, get(body, "report")?, &mut log)?,
        "construct" => {
            verify_report(&inputs, get(body, "report")?, &mut log)?;
            verify_construction(&inputs, body, &mut log)?;
        }
        "extend" => verify_extension(&inputs, body, &mut log)?,
        "equiv" => verify_equivalence(&inputs, body, &mut log)?,
        "oracle" => verify_oracle(&inputs, body, &mut log)?,
        other => return Err(perr(format!("unknown certificate kind `{other}`"))),
    }
    Ok(log)
}

fn kind_from_str(s: &str) -> Result<CheckKind> {
    Ok(match s {
        "two-inner" => CheckKind::TwoInner,
        "three-inner" => CheckKind::ThreeInner,
        "two-outer" => CheckKind::TwoOuter,
        "three-outer" => CheckKind::ThreeOuter,
        _ => return Err(perr(format!("unknown report kind `{s}`"))),
    })
}

fn verdict_of(c: &Value) -> Result<Verdict> {
    Ok(match get_str(c, "verdict")? {
        "pass" => Verdict::Pass,
        "fail" => Verdict::Fail,
        "skipped" => Verdict::Skipped,
        s => return Err(perr(format!("unknown verdict `{s}`"))),
    })
}

fn verify_report(inp: &Inputs, r: &Value, log: &mut Vec<String>) -> Result<()> {
    let k = inp.curve.field();
    let kind = kind_from_str(get_str(r, "kind")?)?;
    let seed = get_u64(r, "seed")?;
    let conditions = get_array(r, "conditions")?;
    let mut all_pass = true;
    for c in conditions {
        let label = get_str(c, "label")?;
        let verdict = verdict_of(c)?;
        all_pass &= verdict == Verdict::Pass;
        if verdict == Verdict::Skipped {
            log.push(format!("({label}) skipped"));
            continue;
        }
        let ev = get(c, "evidence")?;
        let pass = match get_str(ev, "type")? {
            "quotient" => {
                let mut pass = true;
                for q in get_array(ev, "groups")? {
                    let i = get_u64(q, "group")? as usize;
                    let g = inp.groups.get(i).ok_or_else(|| perr("group index out of range"))?;
                    let t = ratfunc_from_json(&inp.curve, get(q, "t")?)?;
                    let inv = is_invariant(&t, g);
                    let deg = if t.is_constant() { None } else { Some(function_degree(&t, seed)?.degree) };
                    let recorded = opt(q, "degree").and_then(|d| d.as_u64()).map(|d| d as u32);
                    if inv != get_bool(q, "invariant")? || deg != recorded {
                        return Err(fail(format!("({label}) group {}: invariance or degree differs", i + 1)));
                    }
                    pass &= inv && deg == Some(g.order() as u32);
                }
                pass
            }
            "pairwise" => {
                let mut pass = true;
                for e in get_array(ev, "pairs")? {
                    let (i, j) = (get_u64(e, "i")? as usize, get_u64(e, "j")? as usize);
                    let common: Vec<ProjMap> =
                        inp.groups[i].intersection(&inp.groups[j]).into_iter().filter(|m| !m.is_identity()).collect();
                    match opt(e, "witness") {
                        None if common.is_empty() => {}
                        Some(w) if common.contains(&matrix_from_json(k, w)?) => pass = false,
                        _ => return Err(fail(format!("({label}) intersection of G_{} and G_{} differs", i + 1, j + 1))),
                    }
                }
                pass
            }
            "divisors" => {
                let inner = kind.is_inner();
                let mut first: Option<Divisor> = None;
                let mut all_equal = true;
                for cand in get_array(ev, "candidates")? {
                    let (i, j) = (get_u64(cand, "i")? as usize, get_u64(cand, "j")? as usize);
                    let d = divisor_from_json(k, get(cand, "divisor")?)?;
                    let recomputed = if inner {
                        orbit_sum(&inp.groups[i], &inp.points[j]).plus(inp.points[i], 1)
                    } else {
                        orbit_sum(&inp.groups[i], inp.q.as_ref().ok_or_else(|| perr("outer inputs need q"))?)
                    };
                    if d != recomputed {
                        return Err(fail(format!("({label}) candidate ({}, {}) differs", i + 1, j + 1)));
                    }
                    match &first {
                        None => first = Some(d),
                        Some(f) => all_equal &= *f == d,
                    }
                }
                let common = opt(ev, "common").map(|d| divisor_from_json(k, d)).transpose()?;
                if all_equal != common.is_some() || (all_equal && common != first) {
                    return Err(fail(format!("({label}) common divisor is inconsistent with the candidates")));
                }
                all_equal
            }
            "span" => {
                let target = ratfunc_from_json(&inp.curve, get(ev, "target")?)?;
                let basis: Vec<RatFunc> = get_array(ev, "basis")?
                    .iter()
                    .map(|b| ratfunc_from_json(&inp.curve, b))
                    .collect::<Result<_>>()?;
                let outcome = match opt(ev, "coefficients") {
                    Some(cs) => SpanOutcome::Coefficients(
                        cs.as_array().ok_or_else(|| perr("coefficients must be an array"))?.iter().map(|c| fe_from_json(k, c)).collect::<Result<_>>()?,
                    ),
                    None => SpanOutcome::Refuted { witness: None },
                };
                let has_coeffs = matches!(outcome, SpanOutcome::Coefficients(_));
                let cert = SpanCertificate { target: target.clone(), basis: basis.clone(), outcome };
                if !cert.verify() {
                    return Err(fail(format!("({label}) span identity does not hold")));
                }
                let mut all = basis;
                all.push(target);
                let dim = span_dimension(&all)?;
                if dim as u64 != get_u64(ev, "dimension")? {
                    return Err(fail(format!("({label}) span dimension differs")));
                }
                has_coeffs && dim <= 3
            }
            t => return Err(perr(format!("unknown evidence type `{t}`"))),
        };
        if pass != (verdict == Verdict::Pass) {
            return Err(fail(format!("({label}) recorded verdict does not match the evidence")));
        }
        log.push(format!("({label}) {} re-verified", verdict.as_str()));
    }
    if get_bool(r, "overall")? != all_pass {
        return Err(fail("overall verdict is not the conjunction of the conditions"));
    }
    Ok(())
}

fn model_from_json(c: &PlaneCurve, v: &Value) -> Result<EmbeddingModel> {
    let f = ratfunc_from_json(c, get(v, "f")?)?;
    let g = ratfunc_from_json(c, get(v, "g")?)?;
    let phi = poly_from_json(c.field(), get(v, "image")?)?;
    let model = implicitize(&f, &g)?;
    let (e, lead) = model.phi.leading_term().ok_or_else(|| fail("empty image equation"))?;
    let ratio = c.field().div(phi.coeff(e), lead);
    if ratio.is_zero() || phi != model.phi.scale(ratio) {
        return Err(fail("recorded image equation differs from the eliminant"));
    }
    if !model.verify_identity() {
        return Err(fail("image equation does not vanish along the map"));
    }
    if model.birational != get_bool(v, "birational")? {
        return Err(fail("birationality flag differs"));
    }
    Ok(model)
}

fn verify_galois(inp: &Inputs, model: &EmbeddingModel, v: &Value, seed: u64) -> Result<bool> {
    let k = inp.curve.field();
    let center = point_from_json(k, get(v, "center")?)?;
    let gi = get_u64(v, "group")? as usize;
    let g = inp.groups.get(gi).ok_or_else(|| perr("group index out of range"))?;
    let cert = galois_certificate(model, &center, g, seed)?;
    let recorded = ratfunc_from_json(&inp.curve, get(v, "projection")?)?;
    if recorded != cert.projection
        || cert.inner != get_bool(v, "inner")?
        || cert.artin != get_bool(v, "artin")?
        || cert.invariant != get_bool(v, "invariant")?
    {
        return Err(fail(format!("Galois certificate at {} does not re-verify", center.render(k))));
    }
    Ok(cert.artin)
}

fn verify_construction(inp: &Inputs, body: &Value, log: &mut Vec<String>) -> Result<()> {
    let k = inp.curve.field();
    let seed = inp.seed;
    let model = model_from_json(&inp.curve, get(body, "model")?)?;
    log.push(format!("image {} re-derived and checked along the map", model.phi.render(&["U", "V", "W"])));
    let marks = points_from_json(k, get(body, "marks")?)?;
    if marks.iter().any(|m| !m.coords()[2].is_zero()) {
        return Err(fail("marks are not on W = 0"));
    }
    if let Some(q) = opt(body, "q_image") {
        let q = point_from_json(k, q)?;
        let qs = inp.q.ok_or_else(|| perr("outer inputs need q"))?;
        if crate::linsys::image_point(&model, &qs)? != q || !q.coords()[2].is_zero() {
            return Err(fail("φ(Q) differs or is off the line of the centers"));
        }
        log.push(format!("φ(Q) = {} on W = 0", q.render(k)));
    }
    let certs = get_array(body, "certificates")?;
    if certs.len() != marks.len() {
        return Err(fail("one Galois certificate per mark is required"));
    }
    for (c, m) in certs.iter().zip(&marks) {
        if point_from_json(k, get(c, "center")?)? != *m {
            return Err(fail("certificate center differs from its mark"));
        }
        if !verify_galois(inp, &model, c, seed)? {
            return Err(fail(format!("projection from {} is not Galois", m.render(k))));
        }
        log.push(format!("Galois point {} re-verified", m.render(k)));
    }
    Ok(())
}

fn verify_extension(inp: &Inputs, body: &Value, log: &mut Vec<String>) -> Result<()> {
    let k = inp.curve.field();
    let sigma = matrix_from_json(k, get(body, "sigma")?)?;
    let model = model_from_json(&inp.curve, get(body, "model")?)?;
    let (p, g) = (&inp.points, &inp.groups);
    if p.len() != 3 || g.len() != 3 {
        return Err(perr("extension inputs need three points and three groups"));
    }
    let a = sigma.apply(&p[0]) == p[0];
    let b = verify_galois(inp, &model, get(body, "certificate")?, inp.seed)?;
    let pulled = sigma.pullback_divisor(&orbit_sum(&g[2], &p[2]).plus(p[2], 1));
    let target = orbit_sum(&g[1], &p[1]).plus(p[1], 1);
    if pulled != divisor_from_json(k, get(body, "pulled")?)? || target != divisor_from_json(k, get(body, "target")?)? {
        return Err(fail("pulled-back or target divisor differs"));
    }
    let c = pulled == target;
    let recorded: Vec<Verdict> = get_array(body, "conditions")?.iter().map(verdict_of).collect::<Result<_>>()?;
    let expect: Vec<Verdict> = [a, b, c].iter().map(|&x| if x { Verdict::Pass } else { Verdict::Fail }).collect();
    if recorded != expect {
        return Err(fail("recorded extension verdicts do not match"));
    }
    let fixed = (0..3).all(|i| orbit_and_stabilizer(&g[i], &p[i]).stabilizer.len() == g[i].order());
    if fixed != get_bool(body, "fast_path")? {
        return Err(fail("total-inflection flag differs"));
    }
    log.push(format!("conditions (a), (b), (c) re-verified: {a}, {b}, {c}"));
    let extendable = a && b && c;
    match opt(body, "matrix") {
        Some(m) if extendable => {
            let m = matrix_from_json(k, m)?;
            if !extension_identity_holds(&model, &sigma, &m) {
                return Err(fail("φ∘σ = σ̃∘φ does not hold"));
            }
            log.push(format!("σ̃ = {} satisfies φ∘σ = σ̃∘φ", m.render()));
        }
        None if !extendable => {}
        _ => return Err(fail("matrix present exactly when all conditions pass")),
    }
    Ok(())
}

fn verify_equivalence(inp: &Inputs, body: &Value, log: &mut Vec<String>) -> Result<()> {
    let k = inp.curve.field();
    let models: Vec<EmbeddingModel> =
        get_array(body, "models")?.iter().map(|m| model_from_json(&inp.curve, m)).collect::<Result<_>>()?;
    if models.len() != 2 {
        return Err(perr("two models expected"));
    }
    let m = matrix_from_json(k, get(body, "map")?)?;
    let moved = models[0].phi.compose_linear(m.matrix());
    let (e, lead) = models[1].phi.leading_term().ok_or_else(|| fail("empty image"))?;
    let ratio = k.div(moved.coeff(e), lead);
    if ratio.is_zero() || moved != models[1].phi.scale(ratio) {
        return Err(fail("map does not carry one image onto the other"));
    }
    log.push(format!("Φ_1 ∘ {} is proportional to Φ_2", m.render()));
    Ok(())
}

fn verify_oracle(inp: &Inputs, body: &Value, log: &mut Vec<String>) -> Result<()> {
    let k = inp.curve.field();
    for run in get_array(body, "runs")? {
        let gi = get_u64(run, "group")? as usize;
        let g = inp.groups.get(gi).ok_or_else(|| perr("group index out of range"))?;
        let t = ratfunc_from_json(&inp.curve, get(run, "t")?)?;
        let degree = function_degree(&t, get_u64(run, "seed")?)?.degree;
        if degree as u64 != get_u64(run, "degree")? {
            return Err(fail("oracle degree differs"));
        }
        let mut all = degree as usize == g.order();
        for trial in get_array(run, "trials")? {
            let lambda = fe_from_json(k, get(trial, "lambda")?)?;
            let fiber = points_from_json(k, get(trial, "fiber")?)?;
            for p in &fiber {
                if t.value(p)? != Some(lambda) {
                    return Err(fail(format!("{} is not in the fiber over {}", p.render(k), k.display(lambda))));
                }
            }
            let orbit = orbit_and_stabilizer(g, &fiber[0]).points;
            let single = orbit == fiber && orbit.len() == g.order();
            if single != get_bool(trial, "single_orbit")? {
                return Err(fail("fiber orbit verdict differs"));
            }
            all &= single;
        }
        if all != get_bool(run, "passes")? {
            return Err(fail("oracle verdict differs"));
        }
        let artin = is_invariant(&t, g) && degree as usize == g.order();
        if artin != get_bool(run, "artin")? {
            return Err(fail("Artin verdict differs"));
        }
        log.push(format!("oracle for group {} re-verified: passes {all}, Artin {artin}", gi + 1));
    }
    Ok(())
}

/// Keys of a JSON object, for diagnostics.
pub fn keys(v: &Value) -> Vec<String> {
    v.as_object().map(|m: &Map<String, Value>| m.keys().cloned().collect()).unwrap_or_default()
}
