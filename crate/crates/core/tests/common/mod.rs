#![allow(dead_code)]

use galpt_core::action::{AutGroup, ProjMap, RatFunc, DEFAULT_CAP};
use galpt_core::algebra::{build_field, Fe, Field, TriPoly};
use galpt_core::curve::{PlaneCurve, ProjPoint};

pub fn f9() -> Field {
    build_field(3, &[1, 0, 1]).unwrap()
}

pub fn pt(k: &Field, c: [Fe; 3]) -> ProjPoint {
    ProjPoint::new(k, c).unwrap()
}

pub fn map(k: &Field, m: [[Fe; 3]; 3]) -> ProjMap {
    ProjMap::new(k, m).unwrap()
}

pub fn ratio(c: &PlaneCurve, a: [Fe; 3], b: [Fe; 3]) -> RatFunc {
    RatFunc::ratio(c, a, b).unwrap()
}

pub const O: Fe = Fe::ZERO;
pub const L: Fe = Fe::ONE;

pub struct H9 {
    pub k: Field,
    pub i: Fe,
    pub curve: PlaneCurve,
    /// P1 = (0:0:1), P2 = (0:1:0), P3 = (0:i:1), P4 = (0:2i:1).
    pub p: [ProjPoint; 4],
    pub g: [AutGroup; 3],
    pub t: [RatFunc; 3],
    pub n: ProjMap,
}

impl H9 {
    pub fn sigma(&self, b: Fe) -> ProjMap {
        map(&self.k, [[L, O, O], [O, L, O], [O, b, L]])
    }

    pub fn tau(&self, b: Fe) -> ProjMap {
        map(&self.k, [[L, O, O], [O, L, b], [O, O, L]])
    }
}

pub fn h9() -> H9 {
    let k = f9();
    let i = k.gen();
    let curve = PlaneCurve::new(TriPoly::from_terms(
        &k,
        [([0, 3, 1], L), ([0, 1, 3], L), ([4, 0, 0], k.from_i64(-1))],
    ))
    .unwrap();
    let i2 = k.mul(k.from_i64(2), i);
    let p = [pt(&k, [O, O, L]), pt(&k, [O, L, O]), pt(&k, [O, i, L]), pt(&k, [O, i2, L])];
    let g1 = AutGroup::closure(&[map(&k, [[L, O, O], [O, L, O], [O, i, L]])], &curve, DEFAULT_CAP).unwrap();
    let g2 = AutGroup::closure(&[map(&k, [[L, O, O], [O, L, i], [O, O, L]])], &curve, DEFAULT_CAP).unwrap();
    let n = map(&k, [[L, O, O], [O, L, i], [O, O, L]]);
    let g3 = g1.conjugate(&n).unwrap();
    let t = [
        ratio(&curve, [L, O, O], [O, L, O]),
        ratio(&curve, [L, O, O], [O, O, L]),
        ratio(&curve, [L, O, O], [O, L, k.neg(i)]),
    ];
    H9 { k, i, curve, p, g: [g1, g2, g3], t, n }
}

pub struct Fq9 {
    pub k: Field,
    pub i: Fe,
    pub curve: PlaneCurve,
    /// Q = (1+i : 1 : 0).
    pub q: ProjPoint,
    pub g: [AutGroup; 3],
    /// Sends (1:0:0) to (1:1:0); G3 = c G1 c^{-1}.
    pub conj: ProjMap,
    pub hints: Vec<ProjMap>,
}

pub fn fq9_hints(k: &Field) -> Vec<ProjMap> {
    let i = k.gen();
    let a = k.add(L, i);
    let d = k.mul(k.from_i64(2), a);
    vec![
        map(k, [[i, O, O], [O, L, O], [O, O, L]]),
        map(k, [[L, O, O], [O, i, O], [O, O, L]]),
        map(k, [[O, L, O], [L, O, O], [O, O, L]]),
        map(k, [[O, O, L], [L, O, O], [O, L, O]]),
        // a unitary block mixing X and Y
        map(k, [[a, a, O], [a, d, O], [O, O, L]]),
    ]
}

pub fn fq9() -> Fq9 {
    let k = f9();
    let i = k.gen();
    let curve = PlaneCurve::new(TriPoly::from_terms(&k, [([4, 0, 0], L), ([0, 4, 0], L), ([0, 0, 4], L)])).unwrap();
    let q = pt(&k, [k.add(L, i), L, O]);
    let g1 = AutGroup::closure(&[map(&k, [[i, O, O], [O, L, O], [O, O, L]])], &curve, DEFAULT_CAP).unwrap();
    let g2 = AutGroup::closure(&[map(&k, [[L, O, O], [O, i, O], [O, O, L]])], &curve, DEFAULT_CAP).unwrap();
    let hints = fq9_hints(&k);
    let aut = galpt_core::galois::enumerate_linear_automorphisms(&curve, Some(&hints), DEFAULT_CAP).unwrap();
    let conj = galpt_core::galois::find_sending(&aut, &pt(&k, [L, O, O]), &pt(&k, [L, L, O])).unwrap();
    let g3 = g1.conjugate(&conj).unwrap();
    Fq9 { k, i, curve, q, g: [g1, g2, g3], conj, hints }
}
