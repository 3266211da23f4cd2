//! Scenario files: a curve over a finite field, named points, maps and
//! groups, optional invariants, and a task with its arguments.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::Value;

use galpt_core::action::{AutGroup, ProjMap, RatFunc, DEFAULT_CAP};
use galpt_core::algebra::{Embedding, Field, TriPoly};
use galpt_core::curve::{CurvePoint, PlaneCurve, ProjPoint};
use galpt_core::galois::{enumerate_linear_automorphisms, find_sending, CheckInput, CheckKind};
use galpt_core::wire;
use galpt_core::{Error, Result};

use crate::fixtures;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    TwoInner,
    TwoOuter,
    ThreeInner,
    ThreeOuter,
    Extend,
    Equiv,
    Oracle,
}

impl Task {
    pub fn parse(s: &str) -> Result<Task> {
        Ok(match s {
            "two-inner" => Task::TwoInner,
            "two-outer" => Task::TwoOuter,
            "three-inner" => Task::ThreeInner,
            "three-outer" => Task::ThreeOuter,
            "extend" => Task::Extend,
            "equiv" => Task::Equiv,
            "oracle" => Task::Oracle,
            _ => return Err(Error::Parse(format!("task: unknown tag `{s}`"))),
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Task::TwoInner => "two-inner",
            Task::TwoOuter => "two-outer",
            Task::ThreeInner => "three-inner",
            Task::ThreeOuter => "three-outer",
            Task::Extend => "extend",
            Task::Equiv => "equiv",
            Task::Oracle => "oracle",
        }
    }

    fn check_kind(&self) -> Option<CheckKind> {
        Some(match self {
            Task::TwoInner => CheckKind::TwoInner,
            Task::TwoOuter => CheckKind::TwoOuter,
            Task::ThreeInner => CheckKind::ThreeInner,
            Task::ThreeOuter => CheckKind::ThreeOuter,
            _ => return None,
        })
    }
}

/// Overrides from the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub working_ext: Option<u32>,
    pub cap: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    /// The field everything is computed over, after any working extension.
    pub field: Field,
    pub working_ext: u32,
    pub curve: PlaneCurve,
    pub points: BTreeMap<String, CurvePoint>,
    pub maps: BTreeMap<String, ProjMap>,
    pub groups: BTreeMap<String, AutGroup>,
    pub invariants: BTreeMap<String, RatFunc>,
    pub task: Task,
    /// The check the task builds on: given directly, or via `args.kind`
    /// (extension tasks default to two-inner).
    pub kind: Option<CheckKind>,
    pub group_names: Vec<String>,
    pub point_names: Vec<String>,
    pub q: Option<String>,
    pub sigma: Option<ProjMap>,
    pub seeds: [u64; 2],
    pub trials: usize,
    pub seed: u64,
    pub cap: usize,
}

fn at(path: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Parse(m) => Error::Parse(format!("{path}: {m}")),
        Error::UnresolvedReference(m) => Error::UnresolvedReference(format!("{path}: {m}")),
        Error::ForeignElement(m) => Error::ForeignElement(format!("{path}: {m}")),
        other => other,
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a serde_json::Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Parse(format!("{path}: object expected")))
}

fn names(v: Option<&Value>, path: &str) -> Result<Vec<String>> {
    let Some(v) = v else { return Ok(Vec::new()) };
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{path}: array of names expected")))?
        .iter()
        .map(|n| n.as_str().map(str::to_string).ok_or_else(|| Error::Parse(format!("{path}: names are strings"))))
        .collect()
}

/// Data over the declared field, carried into the working field.
struct Lift<'a> {
    base: &'a Field,
    emb: &'a Embedding,
}

impl Lift<'_> {
    fn point(&self, v: &Value) -> Result<ProjPoint> {
        let p = wire::point_from_json(self.base, v)?;
        ProjPoint::new(self.emb.target(), p.coords().map(|c| self.emb.apply(c)))
    }

    fn map(&self, v: &Value) -> Result<ProjMap> {
        let m = wire::matrix_from_json(self.base, v)?;
        ProjMap::new(self.emb.target(), m.matrix().map(|r| r.map(|c| self.emb.apply(c))))
    }

    fn poly(&self, v: &Value) -> Result<TriPoly> {
        let f = wire::poly_from_json(self.base, v)?;
        Ok(TriPoly::from_terms(self.emb.target(), f.terms().map(|(&e, &c)| (e, self.emb.apply(c)))))
    }
}

/// Reads a scenario file. Names of bundled fixtures resolve even when no
/// such file exists on disk.
pub fn load_scenario(path: &Path, ov: &Overrides) -> Result<Scenario> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => match path.file_name().and_then(|n| n.to_str()).and_then(fixtures::bundled) {
            Some(t) => t.to_string(),
            None => return Err(Error::Parse(format!("{}: {e}", path.display()))),
        },
    };
    parse_scenario(&text, ov)
}

pub fn parse_scenario(text: &str, ov: &Overrides) -> Result<Scenario> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    object(&v, "scenario")?;
    let base = wire::field_from_json(wire::get(&v, "field").map_err(at("field"))?).map_err(at("field"))?;
    let working_ext = match ov.working_ext {
        Some(d) => d,
        None => v.get("working_ext").and_then(Value::as_u64).unwrap_or(1) as u32,
    };
    let (field, emb) = base.extension(working_ext)?;
    let lift = Lift { base: &base, emb: &emb };
    let curve = PlaneCurve::new(lift.poly(wire::get(&v, "curve")?).map_err(at("curve"))?)?;

    let mut points = BTreeMap::new();
    if let Some(ps) = v.get("points") {
        for (name, p) in object(ps, "points")? {
            let path = format!("points.{name}");
            let p = lift.point(p).map_err(at(&path))?;
            if !curve.contains(p.coords()) {
                return Err(Error::NotOnCurve(format!("{name} = {}", p.render(&field))));
            }
            if !curve.is_smooth_at(p.coords()) {
                return Err(Error::SingularPoint(format!("{name} = {}", p.render(&field))));
            }
            points.insert(name.clone(), p);
        }
    }

    let mut maps = BTreeMap::new();
    if let Some(ms) = v.get("maps") {
        for (name, m) in object(ms, "maps")? {
            maps.insert(name.clone(), lift.map(m).map_err(at(&format!("maps.{name}")))?);
        }
    }
    let cap = ov.cap.or(v.get("cap").and_then(Value::as_u64).map(|c| c as usize)).unwrap_or(DEFAULT_CAP);

    let mut groups: BTreeMap<String, AutGroup> = BTreeMap::new();
    if let Some(gs) = v.get("groups") {
        let gs = object(gs, "groups")?;
        // plain groups first, then conjugates, which may refer to them
        for (name, g) in gs.iter().filter(|(_, g)| g.get("conjugate_of").is_none()) {
            let path = format!("groups.{name}");
            let gens: Vec<ProjMap> = wire::get_array(g, "generators")
                .map_err(at(&path))?
                .iter()
                .map(|m| resolve_map(&lift, &maps, m).map_err(at(&path)))
                .collect::<Result<_>>()?;
            groups.insert(name.clone(), AutGroup::closure(&gens, &curve, cap)?);
        }
        for (name, g) in gs.iter().filter(|(_, g)| g.get("conjugate_of").is_some()) {
            let path = format!("groups.{name}");
            let of = g["conjugate_of"].as_str().ok_or_else(|| Error::Parse(format!("{path}: conjugate_of is a name")))?;
            let inner = groups
                .get(of)
                .ok_or_else(|| Error::UnresolvedReference(format!("{path}: no group `{of}`")))?
                .clone();
            let by = match (g.get("by"), g.get("sending")) {
                (Some(m), _) => resolve_map(&lift, &maps, m).map_err(at(&path))?,
                (None, Some(s)) => sending(&lift, &maps, &curve, g, s, cap).map_err(at(&path))?,
                (None, None) => return Err(Error::Parse(format!("{path}: a conjugate needs `by` or `sending`"))),
            };
            groups.insert(name.clone(), inner.conjugate(&by)?);
        }
    }

    let mut invariants = BTreeMap::new();
    if let Some(is) = v.get("invariants") {
        for (name, t) in object(is, "invariants")? {
            let path = format!("invariants.{name}");
            if !groups.contains_key(name) {
                return Err(Error::UnresolvedReference(format!("{path}: no group `{name}`")));
            }
            let num = lift.poly(wire::get(t, "num").map_err(at(&path))?).map_err(at(&path))?;
            let den = lift.poly(wire::get(t, "den").map_err(at(&path))?).map_err(at(&path))?;
            invariants.insert(name.clone(), RatFunc::new(&curve, num, den)?);
        }
    }

    let task = Task::parse(wire::get(&v, "task").ok().and_then(Value::as_str).ok_or_else(|| Error::Parse("task: missing tag".into()))?)?;
    let empty = Value::Object(Default::default());
    let args = v.get("args").unwrap_or(&empty);
    let kind = match (task.check_kind(), args.get("kind").and_then(Value::as_str)) {
        (Some(k), _) => Some(k),
        (None, Some(s)) => Task::parse(s).map_err(at("args.kind"))?.check_kind(),
        (None, None) if task == Task::Extend => Some(CheckKind::TwoInner),
        (None, None) => None,
    };
    let group_names = names(args.get("groups"), "args.groups")?;
    for g in &group_names {
        if !groups.contains_key(g) {
            return Err(Error::UnresolvedReference(format!("args.groups: no group `{g}`")));
        }
    }
    let point_names = names(args.get("points"), "args.points")?;
    let q = args.get("q").and_then(Value::as_str).map(str::to_string);
    for p in point_names.iter().chain(&q) {
        if !points.contains_key(p) {
            return Err(Error::UnresolvedReference(format!("args: no point `{p}`")));
        }
    }
    let sigma = args.get("sigma").map(|m| resolve_map(&lift, &maps, m).map_err(at("args.sigma"))).transpose()?;
    let seeds = match args.get("seeds").and_then(Value::as_array) {
        Some(s) if s.len() == 2 => [s[0].as_u64().unwrap_or(1), s[1].as_u64().unwrap_or(2)],
        Some(_) => return Err(Error::Parse("args.seeds: two seeds expected".into())),
        None => [1, 2],
    };
    let trials = args.get("trials").and_then(Value::as_u64).unwrap_or(10) as usize;
    let seed = ov.seed.or(v.get("seed").and_then(Value::as_u64)).unwrap_or(0);
    Ok(Scenario {
        name: v.get("name").and_then(Value::as_str).unwrap_or("scenario").to_string(),
        field,
        working_ext,
        curve,
        points,
        maps,
        groups,
        invariants,
        task,
        kind,
        group_names,
        point_names,
        q,
        sigma,
        seeds,
        trials,
        seed,
        cap,
    })
}

/// A matrix literal or the name of an entry in `maps`.
fn resolve_map(lift: &Lift, maps: &BTreeMap<String, ProjMap>, v: &Value) -> Result<ProjMap> {
    match v.as_str() {
        Some(name) => maps.get(name).cloned().ok_or_else(|| Error::UnresolvedReference(format!("no map `{name}`"))),
        None => lift.map(v),
    }
}

/// The first automorphism in the group generated by `aut_hints` sending
/// `sending[0]` to `sending[1]`.
fn sending(
    lift: &Lift,
    maps: &BTreeMap<String, ProjMap>,
    curve: &PlaneCurve,
    g: &Value,
    s: &Value,
    cap: usize,
) -> Result<ProjMap> {
    let pair = s.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Parse("sending: two points expected".into()))?;
    let (a, b) = (lift.point(&pair[0])?, lift.point(&pair[1])?);
    let hints: Option<Vec<ProjMap>> = g
        .get("aut_hints")
        .map(|h| {
            h.as_array()
                .ok_or_else(|| Error::Parse("aut_hints: array expected".into()))?
                .iter()
                .map(|m| resolve_map(lift, maps, m))
                .collect()
        })
        .transpose()?;
    let aut = enumerate_linear_automorphisms(curve, hints.as_deref(), cap)?;
    find_sending(&aut, &a, &b).ok_or_else(|| {
        Error::Precondition(format!(
            "no automorphism of order-{} group sends {} to {}",
            aut.order(),
            a.render(lift.emb.target()),
            b.render(lift.emb.target())
        ))
    })
}

impl Scenario {
    pub fn group(&self, name: &str) -> &AutGroup {
        &self.groups[name]
    }

    pub fn selected_groups(&self) -> Vec<AutGroup> {
        self.group_names.iter().map(|n| self.groups[n].clone()).collect()
    }

    pub fn selected_points(&self) -> Vec<CurvePoint> {
        self.point_names.iter().map(|n| self.points[n]).collect()
    }

    pub fn q_point(&self) -> Result<CurvePoint> {
        let name = self.q.as_ref().ok_or_else(|| Error::Precondition("outer tasks need args.q".into()))?;
        Ok(self.points[name])
    }

    pub fn kind(&self) -> Result<CheckKind> {
        self.kind.ok_or_else(|| Error::Precondition(format!("task `{}` names no check kind", self.task.as_str())))
    }

    /// Input to a check over the first `n` selected groups.
    pub fn check_input(&self, n: usize) -> Result<CheckInput> {
        if self.group_names.len() < n {
            return Err(Error::Precondition(format!("{n} groups are required, args.groups lists {}", self.group_names.len())));
        }
        let names = &self.group_names[..n];
        Ok(CheckInput {
            curve: self.curve.clone(),
            groups: names.iter().map(|g| self.groups[g].clone()).collect(),
            invariants: names.iter().map(|g| self.invariants.get(g).cloned()).collect(),
            seed: self.seed,
        })
    }
}
