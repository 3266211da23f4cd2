//! The criteria for two or three collinear Galois points as decision
//! procedures with certificates, the constructions behind them,
//! extendability of automorphisms, and brute-force oracles.

mod check;
mod construct;
mod extend;
mod oracle;

pub use check::{check_three_inner, check_three_outer, check_two_inner, check_two_outer, CheckInput};
pub use construct::{construct_inner, construct_outer, galois_certificate, Construction, GaloisCertificate};
pub use extend::{
    build_linear_extension, check_extendability, extension_identity_holds, ExtendInput, ExtensionReport,
};
pub use oracle::{
    enumerate_linear_automorphisms, find_sending, generic_fiber_orbit_test, uniqueness_compare, Centers,
    FiberTrial, OracleTranscript, UniquenessReport,
};

use crate::action::{function_degree, is_invariant, orbit_and_stabilizer, orbit_sum, AutGroup, ProjMap, RatFunc};
use crate::algebra::Fe;
use crate::curve::{CurvePoint, Divisor};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Not evaluated because an earlier condition failed.
    Skipped,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    TwoInner,
    ThreeInner,
    TwoOuter,
    ThreeOuter,
}

impl CheckKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckKind::TwoInner => "two-inner",
            CheckKind::ThreeInner => "three-inner",
            CheckKind::TwoOuter => "two-outer",
            CheckKind::ThreeOuter => "three-outer",
        }
    }

    pub fn is_inner(&self) -> bool {
        matches!(self, CheckKind::TwoInner | CheckKind::ThreeInner)
    }
}

/// Evidence that `t` generates the fixed field of a group: invariance and
/// degree equal to the group order.
#[derive(Clone, Debug)]
pub struct QuotientCertificate {
    pub group: usize,
    pub order: usize,
    pub t: RatFunc,
    /// Whether `t` was found by the generator search rather than supplied.
    pub derived: bool,
    pub invariant: bool,
    pub degree: Option<u32>,
    pub positive: bool,
}

#[derive(Clone, Debug)]
pub struct PairwiseEntry {
    pub i: usize,
    pub j: usize,
    /// A nontrivial common element, when one exists.
    pub witness: Option<ProjMap>,
}

/// One candidate for the common divisor: `P_i + Σ_{G_i} σ(P_j)` (inner) or
/// `Σ_{G_i} σ(Q)` (outer, `j == i`).
#[derive(Clone, Debug)]
pub struct DivisorCandidate {
    pub i: usize,
    pub j: usize,
    pub divisor: Divisor,
}

#[derive(Clone, Debug)]
pub enum Evidence {
    None,
    Quotient(Vec<QuotientCertificate>),
    Pairwise(Vec<PairwiseEntry>),
    Divisors {
        candidates: Vec<DivisorCandidate>,
        common: Option<Divisor>,
        /// First candidate (by index) that differs from the first one.
        first_mismatch: Option<(usize, usize)>,
    },
    Span {
        certificate: crate::linsys::SpanCertificate,
        dimension: usize,
    },
}

#[derive(Clone, Debug)]
pub struct Condition {
    pub label: &'static str,
    pub verdict: Verdict,
    pub summary: String,
    pub evidence: Evidence,
}

/// Chord versus tangent at `P_i` for the pair `(i, j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChordCheck {
    pub i: usize,
    pub j: usize,
    /// Multiplicity of `P_i` in the line section through both marks.
    pub chord_order: i64,
    /// Multiplicity of `P_i` in the tangent section `P_i + Σ σ(P_i)`.
    pub tangent_order: i64,
    /// No `σ ∈ G_i` maps `P_i` to `P_j`.
    pub orbit_avoids: bool,
}

impl ChordCheck {
    pub fn holds(&self) -> bool {
        self.chord_order == 1 && self.tangent_order > 1 && self.orbit_avoids
    }
}

#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub kind: CheckKind,
    pub conditions: Vec<Condition>,
    pub overall: bool,
    pub divisor: Option<Divisor>,
    /// `f, g` and, for three points, `h`.
    pub functions: Vec<RatFunc>,
    pub invariants: Vec<RatFunc>,
    pub chords: Vec<ChordCheck>,
    pub notes: Vec<String>,
    pub seed: u64,
}

impl ConditionReport {
    pub fn condition(&self, label: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.label == label)
    }

    /// The first failing condition.
    pub fn first_failure(&self) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.verdict == Verdict::Fail)
    }
}

/// Condition (a) for one group.
pub fn verify_quotient_rational(g: &AutGroup, t: &RatFunc, seed: u64) -> Result<QuotientCertificate> {
    if g.order() < 2 {
        return Err(Error::Precondition("group must have order at least 2".into()));
    }
    let invariant = is_invariant(t, g);
    let degree = if t.is_constant() { None } else { Some(function_degree(t, seed)?.degree) };
    let positive = invariant && degree == Some(g.order() as u32);
    Ok(QuotientCertificate { group: 0, order: g.order(), t: t.clone(), derived: false, invariant, degree, positive })
}

/// Condition (b): pairwise trivial intersections.
pub fn verify_pairwise_trivial(groups: &[&AutGroup]) -> Result<Vec<PairwiseEntry>> {
    if groups.len() < 2 {
        return Err(Error::Precondition("at least two groups are needed".into()));
    }
    let mut out = Vec::new();
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            let witness = groups[i].intersection(groups[j]).into_iter().find(|m| !m.is_identity());
            out.push(PairwiseEntry { i, j, witness });
        }
    }
    Ok(out)
}

fn distinct(points: &[CurvePoint]) -> Result<()> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(Error::Precondition(format!("points {} and {} coincide", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

fn compare_candidates(candidates: Vec<DivisorCandidate>) -> Evidence {
    let first = candidates[0].divisor.clone();
    let first_mismatch = candidates.iter().find(|c| c.divisor != first).map(|c| (c.i, c.j));
    Evidence::Divisors {
        common: first_mismatch.is_none().then_some(first),
        candidates,
        first_mismatch,
    }
}

/// Condition (c): all `P_i + Σ_{G_i} σ(P_j)`, `i ≠ j`, coincide.
pub fn inner_common_divisor(groups: &[&AutGroup], points: &[CurvePoint]) -> Result<Evidence> {
    if groups.len() != points.len() || groups.len() < 2 {
        return Err(Error::Precondition("one group per point, at least two".into()));
    }
    distinct(points)?;
    let mut candidates = Vec::new();
    // for each i, the later points first
    for i in 0..points.len() {
        for j in (0..points.len()).rev() {
            if i != j {
                let divisor = orbit_sum(groups[i], &points[j]).plus(points[i], 1);
                candidates.push(DivisorCandidate { i, j, divisor });
            }
        }
    }
    Ok(compare_candidates(candidates))
}

/// Condition (c'): all orbit sums `Σ_{G_i} σ(Q)` coincide.
pub fn outer_common_divisor(groups: &[&AutGroup], q: &CurvePoint) -> Result<Evidence> {
    if groups.is_empty() {
        return Err(Error::Precondition("no groups".into()));
    }
    let candidates = groups
        .iter()
        .enumerate()
        .map(|(i, g)| DivisorCandidate { i, j: i, divisor: orbit_sum(g, q) })
        .collect();
    Ok(compare_candidates(candidates))
}

/// Whether every element of `G` fixes `P`, together with the order of the
/// tangent line at `P` when the curve has degree `|G| + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct InflectionCheck {
    pub fixed: bool,
    pub tangent_order: Option<u32>,
    pub caveat: Option<String>,
}

pub fn is_total_inflection(g: &AutGroup, p: &CurvePoint) -> Result<InflectionCheck> {
    let c = g.curve();
    let orbit = orbit_and_stabilizer(g, p);
    let fixed = orbit.stabilizer.len() == g.order();
    let caveat = (g.order() == 1).then(|| "trivial group: vacuously true".to_string());
    let mut tangent_order = None;
    if fixed && c.degree() as usize == g.order() + 1 {
        let x = p.coords();
        let grad: Vec<Fe> = (0..3).map(|i| c.form().derivative(i).eval(x)).collect();
        let tangent = crate::algebra::TriPoly::linear(c.field(), [grad[0], grad[1], grad[2]]);
        let v = c.local_valuation(p, &tangent)?;
        if v as usize != g.order() + 1 {
            return Err(Error::CertificationFailed(format!(
                "fixed point with tangent order {v}, expected {}",
                g.order() + 1
            )));
        }
        tangent_order = Some(v);
    }
    Ok(InflectionCheck { fixed, tangent_order, caveat })
}
