use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::{function_degree, orbit_and_stabilizer, preserves_fast, AutGroup, ProjMap, RatFunc};
use crate::algebra::Fe;
use crate::curve::{CurvePoint, PlaneCurve};
use crate::error::{Error, Result};
use crate::linsys::{
    general_position, image_point, implicitize, map_from_frames, projective_equivalence, EmbeddingModel,
    Equivalence,
};

use super::{
    check_three_inner, check_three_outer, check_two_inner, check_two_outer, construct_inner, construct_outer,
    CheckInput,
};

/// Largest number of candidate maps an exhaustive scan may visit.
const MAX_SCAN: u64 = 100_000_000;
const FIBER_RETRIES_PER_TRIAL: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct FiberTrial {
    pub lambda: Fe,
    pub fiber: Vec<CurvePoint>,
    pub single_orbit: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleTranscript {
    pub order: usize,
    pub degree: u32,
    pub trials: Vec<FiberTrial>,
    pub passes: bool,
    /// Why the test stopped before sampling, if it did.
    pub reason: Option<String>,
    pub seed: u64,
}

/// Checks that `trials` sampled fibers of `t` are single `G`-orbits of size
/// `|G|`. A degree different from `|G|` refutes immediately.
pub fn generic_fiber_orbit_test(t: &RatFunc, g: &AutGroup, trials: usize, seed: u64) -> Result<OracleTranscript> {
    if t.is_constant() {
        return Err(Error::Precondition("constant function".into()));
    }
    let c = t.curve();
    let k = c.field();
    let degree = function_degree(t, seed)?.degree;
    let mut out = OracleTranscript { order: g.order(), degree, trials: Vec::new(), passes: false, reason: None, seed };
    if degree as usize != g.order() {
        out.reason = Some(format!("degree {degree} differs from group order {}", g.order()));
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = trials.max(1) * FIBER_RETRIES_PER_TRIAL;
    let mut attempts = 0;
    while out.trials.len() < trials {
        attempts += 1;
        if attempts > budget {
            return Err(Error::RetriesExhausted(budget));
        }
        let lambda = k.from_index(rng.gen_range(0..k.order())).unwrap();
        let h = t.num().sub(&t.den().scale(lambda));
        let d = match c.intersection_divisor(&h) {
            Ok(d) => d,
            Err(Error::ExtensionRequired(_) | Error::SingularPoint(_)) => continue,
            Err(e) => return Err(e),
        };
        let mut fiber = d.clone();
        for (p, &m) in d.terms() {
            let vd = c.local_valuation(p, t.den())? as i64;
            fiber.add_point(*p, -m.min(vd));
        }
        if fiber.degree() != degree as i64 || fiber.terms().any(|(_, &m)| m != 1) {
            continue;
        }
        let pts: Vec<CurvePoint> = fiber.support().copied().collect();
        let orbit = orbit_and_stabilizer(g, &pts[0]).points;
        let single_orbit = orbit == pts && orbit.len() == g.order();
        out.trials.push(FiberTrial { lambda, fiber: pts, single_orbit });
    }
    out.passes = out.trials.iter().all(|t| t.single_orbit);
    Ok(out)
}

/// All linear automorphisms of the curve: the closure of `hints` when given,
/// otherwise an exhaustive scan.
pub fn enumerate_linear_automorphisms(c: &PlaneCurve, hints: Option<&[ProjMap]>, cap: usize) -> Result<AutGroup> {
    if cap == 0 {
        return Err(Error::Precondition("cap must be at least 1".into()));
    }
    if let Some(h) = hints {
        return AutGroup::closure(h, c, cap);
    }
    let k = c.field();
    let pts = c.rational_points();
    let mut frame: Vec<[Fe; 3]> = Vec::new();
    for p in pts {
        let mut t = frame.clone();
        t.push(*p.coords());
        if t.len() <= 4 && general_position(k, &t) {
            frame = t;
        }
    }
    let found = if frame.len() == 4 {
        frame_scan(c, &frame, cap)?
    } else {
        full_scan(c, cap)?
    };
    AutGroup::from_verified(found, c)
}

/// Every automorphism sends the frame to four rational curve points in
/// general position, so scanning those 4-tuples is exhaustive.
fn frame_scan(c: &PlaneCurve, frame: &[[Fe; 3]], cap: usize) -> Result<Vec<ProjMap>> {
    let k = c.field();
    let pts = c.rational_points();
    let n = pts.len() as u64;
    if n.saturating_pow(4) > MAX_SCAN {
        return Err(Error::ScanTooLarge(n.saturating_pow(4)));
    }
    let from = [frame[0], frame[1], frame[2], frame[3]];
    let mut out = BTreeSet::new();
    let m = pts.len();
    for a in 0..m {
        for b in 0..m {
            if b == a {
                continue;
            }
            for cc in 0..m {
                if cc == a || cc == b {
                    continue;
                }
                let tri = [*pts[a].coords(), *pts[b].coords(), *pts[cc].coords()];
                if !general_position(k, &tri) {
                    continue;
                }
                for d in 0..m {
                    let to = [tri[0], tri[1], tri[2], *pts[d].coords()];
                    if !general_position(k, &to) {
                        continue;
                    }
                    let Some(map) = map_from_frames(k, &from, &to) else { continue };
                    if preserves_fast(&map, c) {
                        out.insert(map);
                        if out.len() > cap {
                            return Err(Error::CapExceeded(cap));
                        }
                    }
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// All canonically scaled invertible matrices.
fn full_scan(c: &PlaneCurve, cap: usize) -> Result<Vec<ProjMap>> {
    let k = c.field();
    let q = k.order() as u64;
    let total = (q.saturating_pow(9) - 1) / (q - 1);
    if total > MAX_SCAN {
        return Err(Error::ScanTooLarge(total));
    }
    let mut out = Vec::new();
    let mut idx = [0u32; 9];
    loop {
        // canonical: the first nonzero entry is one
        if let Some(first) = idx.iter().position(|&i| i != 0) {
            if k.from_index(idx[first]).unwrap() == Fe::ONE {
                let e: Vec<Fe> = idx.iter().map(|&i| k.from_index(i).unwrap()).collect();
                let m = [[e[0], e[1], e[2]], [e[3], e[4], e[5]], [e[6], e[7], e[8]]];
                if let Ok(map) = ProjMap::new(k, m) {
                    if preserves_fast(&map, c) {
                        out.push(map);
                        if out.len() > cap {
                            return Err(Error::CapExceeded(cap));
                        }
                    }
                }
            }
        }
        let mut pos = 9;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < k.order() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// The first element (in the group's order) sending `a` to `b`.
pub fn find_sending(g: &AutGroup, a: &CurvePoint, b: &CurvePoint) -> Option<ProjMap> {
    g.elements().iter().find(|m| m.apply(a) == *b).cloned()
}

/// Where the Galois points sit on the source curve.
#[derive(Clone, Debug)]
pub enum Centers {
    Inner(Vec<CurvePoint>),
    Outer(CurvePoint),
}

#[derive(Clone, Debug)]
pub struct UniquenessReport {
    /// Sends the second model onto the first.
    pub map: ProjMap,
    pub models: [EmbeddingModel; 2],
    /// Scalars applied to `f` and `g` in each run.
    pub scalars: [[Fe; 2]; 2],
    pub seeds: [u64; 2],
}

/// One seeded construction. Seed 0 keeps the normalized functions; other
/// seeds rescale `f` and `g` by random nonzero constants.
fn seeded_model(input: &CheckInput, centers: &Centers, seed: u64) -> Result<(EmbeddingModel, [Fe; 2])> {
    let mut run = input.clone();
    run.seed = seed;
    let n = run.groups.len();
    let cons = match centers {
        Centers::Inner(p) => {
            let r = if n == 2 { check_two_inner(&run, p)? } else { check_three_inner(&run, p)? };
            if !r.overall {
                return Err(Error::Precondition("criteria are not satisfied".into()));
            }
            construct_inner(&run, p, &r)?
        }
        Centers::Outer(q) => {
            let r = if n == 2 { check_two_outer(&run, q)? } else { check_three_outer(&run, q)? };
            if !r.overall {
                return Err(Error::Precondition("criteria are not satisfied".into()));
            }
            construct_outer(&run, q, &r)?
        }
    };
    if seed == 0 {
        return Ok((cons.model, [Fe::ONE, Fe::ONE]));
    }
    let k = input.curve.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scalar = || k.from_index(rng.gen_range(1..k.order())).unwrap();
    let (a, b) = (scalar(), scalar());
    let model = implicitize(&cons.model.f.scale(a), &cons.model.g.scale(b))?;
    Ok((model, [a, b]))
}

/// Two seeded constructions and the projective equivalence between them.
pub fn uniqueness_compare(input: &CheckInput, centers: &Centers, seed_a: u64, seed_b: u64) -> Result<UniquenessReport> {
    for (i, g) in input.groups.iter().enumerate().take(2) {
        if g.order() < 3 {
            return Err(Error::HypothesisViolation(format!(
                "uniqueness needs |G_{}| ≥ 3, got {}",
                i + 1,
                g.order()
            )));
        }
    }
    let (ma, sa) = seeded_model(input, centers, seed_a)?;
    let (mb, sb) = seeded_model(input, centers, seed_b)?;
    let marks = |m: &EmbeddingModel| -> Result<Vec<_>> {
        input.curve.smooth_points().iter().map(|p| image_point(m, p)).collect()
    };
    let map = match projective_equivalence(&ma.image, &marks(&ma)?, &mb.image, &marks(&mb)?)? {
        Equivalence::Found { map, .. } => map,
        Equivalence::NotEquivalent { .. } => return Err(Error::EquivalenceNotFound),
    };
    Ok(UniquenessReport { map, models: [ma, mb], scalars: [sa, sb], seeds: [seed_a, seed_b] })
}
