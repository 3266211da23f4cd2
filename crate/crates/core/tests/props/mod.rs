//! Randomized property suites, shared by the core test target and the CLI
//! acceptance run. Each suite runs a seed-pinned proptest runner and returns
//! the failure message, if any.

#![allow(dead_code)]

#[path = "../common/mod.rs"]
mod common;

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestError, TestRng, TestRunner};

use galpt_core::action::{
    function_degree, is_invariant, mobius_normalize, orbit_and_stabilizer, orbit_sum, AutGroup, ProjMap, RatFunc,
    DEFAULT_CAP,
};
use galpt_core::algebra::field::prime_field;
use galpt_core::algebra::{build_field, Fe, Field, TriPoly};
use galpt_core::curve::{CurvePoint, Divisor};
use galpt_core::galois::{check_three_inner, enumerate_linear_automorphisms, CheckInput};
use galpt_core::linsys::{projective_equivalence, Equivalence};

use common::*;

pub const CASES: u32 = 1000;
const SEED: [u8; 32] = *b"galois points, collinear, seeded";

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, max_global_rejects: cases * 4, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

fn report<T: std::fmt::Debug>(r: Result<(), TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(TestCaseError::fail(format!($($msg)+)));
        }
    };
}

/// H9 with its automorphism group (order 6048) and the group at `P4`.
pub struct World {
    pub h: H9,
    pub full: AutGroup,
    pub g4: AutGroup,
    pub t4: RatFunc,
    pub fq: Fq9,
    pub smooth: Vec<CurvePoint>,
}

pub fn world() -> &'static World {
    static W: OnceLock<World> = OnceLock::new();
    W.get_or_init(|| {
        let h = h9();
        let fq = fq9();
        let Equivalence::Found { map: m, .. } = projective_equivalence(&fq.curve, &[], &h.curve, &[]).unwrap() else {
            panic!("the Fermat and Hermitian quartics are equivalent over F9")
        };
        let minv = m.inverse();
        let moved: Vec<ProjMap> = fq.hints.iter().map(|s| minv.compose(s).compose(&m)).collect();
        let full = enumerate_linear_automorphisms(&h.curve, Some(&moved), DEFAULT_CAP).unwrap();
        let two_i = h.k.mul(h.k.from_i64(2), h.i);
        let g4 = h.g[0].conjugate(&h.tau(two_i)).unwrap();
        let t4 = ratio(&h.curve, [L, O, O], [O, L, h.i]);
        let smooth = h.curve.smooth_points();
        World { h, full, g4, t4, fq, smooth }
    })
}

// ---- field axioms

fn fields() -> Vec<Field> {
    vec![
        build_field(2, &[1, 1, 0, 1]).unwrap(),
        f9(),
        build_field(5, &[2, 0, 1]).unwrap(),
        build_field(2, &[1, 1, 0, 0, 1]).unwrap(),
        prime_field(7).unwrap(),
        prime_field(13).unwrap(),
    ]
}

fn modpow(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut r = 1;
    b = b.rem_euclid(p);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn field_axioms(cases: u32) -> Result<(), String> {
    let fs = fields();
    let n = fs.len();
    report(runner(cases).run(&(0..n, any::<u32>(), any::<u32>(), any::<u32>()), |(fi, x, y, z)| {
        let k = &fs[fi];
        let q = k.order();
        let e = |v: u32| k.from_index(v % q).unwrap();
        let (a, b, c) = (e(x), e(y), e(z));
        check!(k.add(a, k.add(b, c)) == k.add(k.add(a, b), c), "additive associativity");
        check!(k.mul(a, k.mul(b, c)) == k.mul(k.mul(a, b), c), "multiplicative associativity");
        check!(k.add(a, b) == k.add(b, a) && k.mul(a, b) == k.mul(b, a), "commutativity");
        check!(k.mul(a, k.add(b, c)) == k.add(k.mul(a, b), k.mul(a, c)), "distributivity");
        check!(k.add(a, k.neg(a)).is_zero() && k.sub(a, b) == k.add(a, k.neg(b)), "additive inverse");
        check!(k.add(a, Fe::ZERO) == a && k.mul(a, Fe::ONE) == a, "identities");
        if !a.is_zero() {
            check!(k.mul(a, k.inv(a)) == Fe::ONE, "multiplicative inverse");
            check!(k.pow(a, (q - 1) as u64) == Fe::ONE, "Lagrange");
            check!(k.div(k.mul(b, a), a) == b, "division");
        }
        check!(k.frobenius(k.add(a, b)) == k.add(k.frobenius(a), k.frobenius(b)), "Frobenius is additive");
        check!(k.pth_root(k.frobenius(a)) == a, "p-th root");
        check!(k.from_coords(&k.coords(a)).unwrap() == a, "coordinate round trip");
        if k.degree() == 1 {
            // integers modulo p as the oracle
            let p = k.characteristic() as i64;
            let (u, v) = ((x % 1000) as i64 - 500, (y % 1000) as i64 - 500);
            check!(k.add(k.from_i64(u), k.from_i64(v)) == k.from_i64(u + v), "prime field sum");
            check!(k.mul(k.from_i64(u), k.from_i64(v)) == k.from_i64(u * v), "prime field product");
            if u.rem_euclid(p) != 0 {
                check!(k.inv(k.from_i64(u)) == k.from_i64(modpow(u, p - 2, p)), "prime field inverse");
            }
        }
        Ok(())
    }))
}

// ---- orbit-stabilizer

pub fn orbit_stabilizer(cases: u32) -> Result<(), String> {
    let w = world();
    let groups: Vec<&AutGroup> = vec![&w.h.g[0], &w.h.g[1], &w.h.g[2], &w.g4, &w.full];
    let np = w.smooth.len();
    report(runner(cases).run(&(0..groups.len(), 0..np), |(gi, pi)| {
        let g = groups[gi];
        let p = w.smooth[pi];
        let o = orbit_and_stabilizer(g, &p);
        check!(o.points.len() * o.stabilizer.len() == g.order(), "|orbit| |stab| = |G| fails at {p:?}");
        check!(o.stabilizer.iter().all(|s| s.apply(&p) == p), "stabilizer moves the point");
        check!(o.points.iter().all(|q| w.h.curve.contains(q.coords())), "orbit leaves the curve");
        let d = orbit_sum(g, &p);
        check!(d.degree() == g.order() as i64, "orbit sum has degree {}", d.degree());
        check!(
            o.points.iter().all(|q| d.multiplicity(q) == o.stabilizer.len() as i64),
            "orbit sum multiplicities differ from the stabilizer order"
        );
        Ok(())
    }))
}

// ---- divisors of functions

fn line(k: &Field, c: [u32; 3]) -> Option<TriPoly> {
    let q = k.order();
    let v = c.map(|x| k.from_index(x % q).unwrap());
    (!v.iter().all(|x| x.is_zero())).then(|| TriPoly::linear(k, v))
}

fn product(k: &Field, ls: &[[u32; 3]]) -> Option<TriPoly> {
    let mut f = TriPoly::one(k);
    for &c in ls {
        f = f.mul(&line(k, c)?);
    }
    Some(f)
}

/// `(f)` assembled from valuations at every smooth rational point.
fn divisor_by_valuations(f: &RatFunc, pts: &[CurvePoint]) -> Result<Divisor, String> {
    let mut d = Divisor::zero();
    for p in pts {
        match f.valuation(p).map_err(|e| e.to_string())? {
            Some(v) if v != 0 => d.add_point(*p, v),
            _ => {}
        }
    }
    Ok(d)
}

fn lines_strategy() -> impl Strategy<Value = (Vec<[u32; 3]>, Vec<[u32; 3]>)> {
    (1usize..=3).prop_flat_map(|m| {
        (prop::collection::vec(any::<[u32; 3]>(), m), prop::collection::vec(any::<[u32; 3]>(), m))
    })
}

/// On a Hermitian curve every rational line meets the curve in rational
/// points only, so divisors of products of lines need no extension.
pub fn degree_zero(cases: u32) -> Result<(), String> {
    let w = world();
    let (k, c) = (&w.h.k, &w.h.curve);
    report(runner(cases).run(&lines_strategy(), |(num, den)| {
        let (Some(n), Some(d)) = (product(k, &num), product(k, &den)) else {
            return Err(TestCaseError::reject("zero line"));
        };
        let f = RatFunc::new(c, n, d).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let div = f.divisor().map_err(|e| TestCaseError::fail(e.to_string()))?;
        check!(div.degree() == 0, "deg (f) = {}", div.degree());
        let oracle = divisor_by_valuations(&f, &w.smooth).map_err(TestCaseError::fail)?;
        check!(div == oracle, "divisor {} differs from valuations {}", div.render(k), oracle.render(k));
        Ok(())
    }))
}

// ---- pullback action

pub fn pullback_law(cases: u32) -> Result<(), String> {
    let w = world();
    let (k, c) = (&w.h.k, &w.h.curve);
    let (n, np) = (w.full.order(), w.smooth.len());
    let strat = (0..n, 0..n, any::<[u32; 3]>(), any::<[u32; 3]>(), prop::collection::vec((0..np, -3i64..=3), 1..5));
    report(runner(cases).run(&strat, |(si, ti, a, b, terms)| {
        let s = &w.full.elements()[si];
        let t = &w.full.elements()[ti];
        let d = Divisor::from_terms(terms.iter().map(|&(i, m)| (w.smooth[i], m)));
        let st = s.compose(t);
        check!(st.pullback_divisor(&d) == t.pullback_divisor(&s.pullback_divisor(&d)), "(st)* = t* s*");
        check!(s.pullback_divisor(&d).degree() == d.degree(), "pullback changes the degree");
        let (Some(la), Some(lb)) = (line(k, a), line(k, b)) else {
            return Err(TestCaseError::reject("zero line"));
        };
        let f = RatFunc::new(c, la, lb).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let lhs = f.pullback(s).divisor().map_err(|e| TestCaseError::fail(e.to_string()))?;
        let rhs = s.pullback_divisor(&f.divisor().map_err(|e| TestCaseError::fail(e.to_string()))?);
        check!(lhs == rhs, "(f∘s) differs from s*(f)");
        let twice = f.pullback(s).pullback(t).divisor().map_err(|e| TestCaseError::fail(e.to_string()))?;
        let once = f.pullback(&st).divisor().map_err(|e| TestCaseError::fail(e.to_string()))?;
        check!(twice == once, "(f∘s)∘t differs from f∘(st)");
        Ok(())
    }))
}

// ---- Möbius normalization

pub fn mobius_postcondition(cases: u32) -> Result<(), String> {
    let w = world();
    let h = &w.h;
    let fq_yz = ratio(&w.fq.curve, [O, L, O], [O, O, L]);
    let fq_xz = ratio(&w.fq.curve, [L, O, O], [O, O, L]);
    let fq_smooth = w.fq.curve.smooth_points();
    let cases_list: Vec<(&AutGroup, RatFunc, &[CurvePoint])> = vec![
        (&h.g[0], h.t[0].clone(), &w.smooth),
        (&h.g[1], h.t[1].clone(), &w.smooth),
        (&h.g[2], h.t[2].clone(), &w.smooth),
        (&w.g4, w.t4.clone(), &w.smooth),
        (&w.fq.g[0], fq_yz, &fq_smooth),
        (&w.fq.g[1], fq_xz, &fq_smooth),
    ];
    let n = cases_list.len();
    report(runner(cases).run(&(0..n, any::<usize>(), any::<usize>()), |(ci, a, b)| {
        let (g, t, pts) = (cases_list[ci].0, &cases_list[ci].1, cases_list[ci].2);
        let p = pts[a % pts.len()];
        let tp = t.value(&p).map_err(|e| TestCaseError::fail(e.to_string()))?;
        // the first point after `b` in a different fiber
        let Some(q) = (0..pts.len())
            .map(|j| pts[(b + j) % pts.len()])
            .find(|q| t.value(q).ok() != Some(tp))
        else {
            return Err(TestCaseError::reject("single fiber"));
        };
        let u = mobius_normalize(t, g, &p, &q).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let expected = orbit_sum(g, &p).sub(&orbit_sum(g, &q));
        let got = divisor_by_valuations(&u, pts).map_err(TestCaseError::fail)?;
        check!(got == expected, "(u) differs from the orbit difference");
        check!(is_invariant(&u, g), "normalized function is not invariant");
        check!(u.value(&p).ok() == Some(Some(Fe::ZERO)) && u.value(&q).ok() == Some(None), "zero and pole misplaced");
        Ok(())
    }))
}

// ---- chord and tangent assertions on positive reports

pub fn fact3_chords(cases: u32) -> Result<(), String> {
    let w = world();
    let h = &w.h;
    let pts = [h.p[0], h.p[1], h.p[2], h.p[3]];
    let groups = [&h.g[0], &h.g[1], &h.g[2], &w.g4];
    let ts = [&h.t[0], &h.t[1], &h.t[2], &w.t4];
    let triples: Vec<[usize; 3]> = (0..4)
        .flat_map(|a| (0..4).flat_map(move |b| (0..4).map(move |c| [a, b, c])))
        .filter(|[a, b, c]| a != b && b != c && a != c)
        .collect();
    let nt = triples.len();
    report(runner(cases).run(&(0..w.full.order(), 0..nt, any::<bool>()), |(gi, ti, given)| {
        let m = &w.full.elements()[gi];
        let minv = m.inverse();
        let tr = triples[ti];
        let points: Vec<CurvePoint> = tr.iter().map(|&i| m.apply(&pts[i])).collect();
        let gs: Vec<AutGroup> = tr.iter().map(|&i| groups[i].conjugate(m).unwrap()).collect();
        let invariants = tr.iter().map(|&i| given.then(|| ts[i].pullback(&minv))).collect();
        let input = CheckInput { curve: h.curve.clone(), groups: gs.clone(), invariants, seed: gi as u64 };
        let r = check_three_inner(&input, &points).map_err(|e| TestCaseError::fail(e.to_string()))?;
        check!(r.overall, "transported configuration is not positive");
        check!(!r.chords.is_empty() && r.chords.iter().all(|c| c.holds()), "chord assertion fails: {:?}", r.chords);
        check!(r.chords.iter().all(|c| c.chord_order == 1), "chord valuation is not 1");
        check!(gs[0].elements().iter().all(|s| s.apply(&points[0]) != points[1]), "G_1 moves P_1 to P_2");
        Ok(())
    }))
}

// ---- degrees of coordinate ratios

pub fn function_degrees(cases: u32) -> Result<(), String> {
    let w = world();
    let c = &w.h.curve;
    let fs = [
        (ratio(c, [L, O, O], [O, L, O]), 3),
        (ratio(c, [L, O, O], [O, O, L]), 3),
        (ratio(c, [O, L, O], [O, O, L]), 4),
    ];
    // moving by an automorphism keeps the degree
    report(runner(cases).run(&(0..3usize, any::<u64>(), 0..w.full.order()), |(fi, seed, gi)| {
        let (f, d) = &fs[fi];
        let got = function_degree(f, seed).map_err(|e| TestCaseError::fail(e.to_string()))?.degree;
        check!(got == *d, "degree {got}, expected {d}");
        let moved = f.pullback(&w.full.elements()[gi]);
        let got = function_degree(&moved, seed).map_err(|e| TestCaseError::fail(e.to_string()))?.degree;
        check!(got == *d, "moved degree {got}, expected {d}");
        Ok(())
    }))
}

pub const SUITES: [(&str, fn(u32) -> Result<(), String>); 7] = [
    ("field axioms", field_axioms),
    ("orbit-stabilizer counting", orbit_stabilizer),
    ("degree-0 law for divisors of functions", degree_zero),
    ("pullback action law", pullback_law),
    ("Möbius normalization divisor", mobius_postcondition),
    ("chord and tangent assertions", fact3_chords),
    ("degrees of X/Y, X/Z, Y/Z", function_degrees),
];
