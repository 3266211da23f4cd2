//! Projective-linear automorphisms, finite groups of them, orbits, rational
//! functions on a curve and their pullbacks, fixed-field generators.

mod invariant;
mod ratfunc;

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::algebra::linalg::{identity3, mat3_apply, mat3_det, mat3_inverse, mat3_mul, Mat3};
use crate::algebra::{Fe, Field};
use crate::curve::{CurvePoint, Divisor, PlaneCurve, ProjPoint};
use crate::error::{Error, Result};

pub use invariant::{function_degree, invariant_generator, is_invariant, mobius_normalize, mobius_pole, FunctionDegree};
pub use ratfunc::RatFunc;

/// Default bound on the size of a group closure.
pub const DEFAULT_CAP: usize = 100_000;

/// An invertible 3x3 matrix up to scalars, acting on column vectors.
/// Canonically scaled so its first nonzero entry (row-major) is one.
#[derive(Clone)]
pub struct ProjMap {
    field: Field,
    m: Mat3,
}

impl PartialEq for ProjMap {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

impl Eq for ProjMap {}

impl Hash for ProjMap {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.m.hash(state);
    }
}

impl PartialOrd for ProjMap {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ProjMap {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.m.cmp(&other.m)
    }
}

impl fmt::Debug for ProjMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl ProjMap {
    pub fn new(k: &Field, m: Mat3) -> Result<Self> {
        if mat3_det(k, &m).is_zero() {
            return Err(Error::SingularMatrix);
        }
        let lead = m.iter().flatten().copied().find(|c| !c.is_zero()).unwrap();
        let inv = k.inv(lead);
        let mut out = m;
        for x in out.iter_mut().flatten() {
            *x = k.mul(*x, inv);
        }
        Ok(ProjMap { field: k.clone(), m: out })
    }

    pub fn identity(k: &Field) -> Self {
        ProjMap { field: k.clone(), m: identity3() }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    pub fn is_identity(&self) -> bool {
        self.m == identity3()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ProjMap) -> ProjMap {
        ProjMap::new(&self.field, mat3_mul(&self.field, &self.m, &other.m)).expect("product of invertible maps")
    }

    pub fn inverse(&self) -> ProjMap {
        let inv = mat3_inverse(&self.field, &self.m).expect("invertible");
        ProjMap::new(&self.field, inv).unwrap()
    }

    pub fn conjugate_by(&self, n: &ProjMap) -> ProjMap {
        n.compose(self).compose(&n.inverse())
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(&self.field, mat3_apply(&self.field, &self.m, p.coords())).expect("invertible map")
    }

    pub fn apply_coords(&self, x: &[Fe; 3]) -> [Fe; 3] {
        mat3_apply(&self.field, &self.m, x)
    }

    /// Divisor pullback: points are moved by the inverse map.
    pub fn pullback_divisor(&self, d: &Divisor) -> Divisor {
        let inv = self.inverse();
        d.map_points(|p| inv.apply(p))
    }

    pub fn render(&self) -> String {
        let k = &self.field;
        let rows: Vec<String> = self
            .m
            .iter()
            .map(|r| format!("[{}, {}, {}]", k.display(r[0]), k.display(r[1]), k.display(r[2])))
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

/// The constant `c` with `F(M x) = c F(x)`, or `None` when `M` does not
/// preserve the curve.
pub fn map_preserves_curve(m: &ProjMap, c: &PlaneCurve) -> Option<Fe> {
    let k = c.field();
    let moved = c.form().compose_linear(m.matrix());
    let (e, lead) = c.form().leading_term()?;
    let ratio = k.div(moved.coeff(e), lead);
    if ratio.is_zero() {
        return None;
    }
    (moved == c.form().scale(ratio)).then_some(ratio)
}

/// Whether `m` sends the curve into itself, decided from rational points
/// when there are more than `deg^2` of them (Bézout then forces `F | F∘M`),
/// and symbolically otherwise.
pub(crate) fn preserves_fast(m: &ProjMap, c: &PlaneCurve) -> bool {
    let pts = c.rational_points();
    let n = c.degree() as usize;
    if pts.len() > n * n {
        pts.iter().all(|p| c.contains(&m.apply_coords(p.coords())))
    } else {
        map_preserves_curve(m, c).is_some()
    }
}

/// A finite group of curve automorphisms, stored as a sorted element list.
#[derive(Clone)]
pub struct AutGroup {
    curve: PlaneCurve,
    generators: Vec<ProjMap>,
    elements: Vec<ProjMap>,
    index: HashSet<ProjMap>,
}

impl fmt::Debug for AutGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AutGroup(order {}, gens {:?})", self.order(), self.generators)
    }
}

impl PartialEq for AutGroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl AutGroup {
    /// Closure of `gens` under composition. Every element is verified to
    /// preserve the curve.
    pub fn closure(gens: &[ProjMap], curve: &PlaneCurve, cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::Precondition("cap must be at least 1".into()));
        }
        for g in gens {
            if map_preserves_curve(g, curve).is_none() {
                return Err(Error::NotAutomorphism);
            }
        }
        let id = ProjMap::identity(curve.field());
        let mut index: HashSet<ProjMap> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = x.compose(g);
                if index.insert(y.clone()) {
                    if index.len() > cap {
                        return Err(Error::CapExceeded(cap));
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<ProjMap> = index.iter().cloned().collect();
        elements.sort();
        if !elements.iter().all(|m| preserves_fast(m, curve)) {
            return Err(Error::NotAutomorphism);
        }
        Ok(AutGroup { curve: curve.clone(), generators: gens.to_vec(), elements, index })
    }

    pub fn trivial(curve: &PlaneCurve) -> Self {
        AutGroup::closure(&[], curve, 1).unwrap()
    }

    /// Builds a group from a list already known to be closed; closure is
    /// re-checked.
    pub fn from_elements(elements: Vec<ProjMap>, curve: &PlaneCurve) -> Result<Self> {
        let mut distinct: HashSet<&ProjMap> = elements.iter().collect();
        let id = ProjMap::identity(curve.field());
        distinct.insert(&id);
        match AutGroup::closure(&elements, curve, distinct.len()) {
            Err(Error::CapExceeded(_)) => Err(Error::Precondition("element list is not closed".into())),
            other => other,
        }
    }

    /// Wraps a complete set of automorphisms found by exhaustive search;
    /// every element serves as a generator.
    pub(crate) fn from_verified(mut elements: Vec<ProjMap>, curve: &PlaneCurve) -> Result<Self> {
        elements.sort();
        elements.dedup();
        let index: HashSet<ProjMap> = elements.iter().cloned().collect();
        if !index.contains(&ProjMap::identity(curve.field())) {
            return Err(Error::CertificationFailed("scan missed the identity".into()));
        }
        Ok(AutGroup { curve: curve.clone(), generators: elements.clone(), elements, index })
    }

    pub fn curve(&self) -> &PlaneCurve {
        &self.curve
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[ProjMap] {
        &self.generators
    }

    pub fn elements(&self) -> &[ProjMap] {
        &self.elements
    }

    pub fn contains(&self, m: &ProjMap) -> bool {
        self.index.contains(m)
    }

    /// `n G n^{-1}`, with `n` required to preserve the curve.
    pub fn conjugate(&self, n: &ProjMap) -> Result<AutGroup> {
        if map_preserves_curve(n, &self.curve).is_none() {
            return Err(Error::NotAutomorphism);
        }
        let gens: Vec<ProjMap> = self.generators.iter().map(|g| g.conjugate_by(n)).collect();
        AutGroup::closure(&gens, &self.curve, self.order().max(1))
    }

    /// Elements common to both groups.
    pub fn intersection(&self, other: &AutGroup) -> Vec<ProjMap> {
        self.elements.iter().filter(|m| other.contains(m)).cloned().collect()
    }
}

/// The orbit of a point (sorted) and its stabilizer.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub points: Vec<CurvePoint>,
    pub stabilizer: Vec<ProjMap>,
}

pub fn orbit_and_stabilizer(g: &AutGroup, p: &CurvePoint) -> Orbit {
    let mut points: Vec<CurvePoint> = Vec::new();
    let mut stabilizer = Vec::new();
    for s in g.elements() {
        let q = s.apply(p);
        if q == *p {
            stabilizer.push(s.clone());
        }
        points.push(q);
    }
    points.sort();
    points.dedup();
    Orbit { points, stabilizer }
}

/// `Σ_{σ ∈ G} σ(P)`.
pub fn orbit_sum(g: &AutGroup, p: &CurvePoint) -> Divisor {
    let mut d = Divisor::zero();
    for s in g.elements() {
        d.add_point(s.apply(p), 1);
    }
    d
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::TriPoly;
    use crate::curve::tests::{f9, fq9, h9};

    pub(crate) fn sigma(k: &Field, b: Fe) -> ProjMap {
        let (o, l) = (Fe::ZERO, Fe::ONE);
        ProjMap::new(k, [[l, o, o], [o, l, o], [o, b, l]]).unwrap()
    }

    pub(crate) fn tau(k: &Field, b: Fe) -> ProjMap {
        let (o, l) = (Fe::ZERO, Fe::ONE);
        ProjMap::new(k, [[l, o, o], [o, l, b], [o, o, l]]).unwrap()
    }

    pub(crate) fn p(k: &Field, c: [Fe; 3]) -> ProjPoint {
        ProjPoint::new(k, c).unwrap()
    }

    #[test]
    fn preservation_examples() {
        let k = f9();
        let h = h9(&k);
        let i = k.gen();
        assert_eq!(map_preserves_curve(&sigma(&k, i), &h), Some(Fe::ONE));
        assert_eq!(map_preserves_curve(&sigma(&k, Fe::ONE), &h), None);
        assert_eq!(map_preserves_curve(&ProjMap::identity(&k), &h), Some(Fe::ONE));
    }

    #[test]
    fn closure_examples() {
        let k = f9();
        let h = h9(&k);
        let i = k.gen();
        let g1 = AutGroup::closure(&[sigma(&k, i)], &h, DEFAULT_CAP).unwrap();
        assert_eq!(g1.order(), 3);
        assert_eq!(sigma(&k, i).compose(&sigma(&k, i)), sigma(&k, k.add(i, i)));
        for b in [Fe::ZERO, i, k.add(i, i)] {
            assert!(g1.contains(&sigma(&k, b)));
        }
        let f = fq9(&k);
        let (o, l) = (Fe::ZERO, Fe::ONE);
        let d = ProjMap::new(&k, [[i, o, o], [o, l, o], [o, o, l]]).unwrap();
        assert_eq!(AutGroup::closure(&[d], &f, DEFAULT_CAP).unwrap().order(), 4);
        assert_eq!(AutGroup::trivial(&f).order(), 1);
        assert_eq!(
            AutGroup::closure(&[sigma(&k, i)], &h, 2).unwrap_err(),
            Error::CapExceeded(2)
        );
        assert_eq!(AutGroup::closure(&[sigma(&k, l)], &h, 10).unwrap_err(), Error::NotAutomorphism);
    }

    #[test]
    fn orbits_on_hermitian() {
        let k = f9();
        let h = h9(&k);
        let i = k.gen();
        let two_i = k.add(i, i);
        let (o, l) = (Fe::ZERO, Fe::ONE);
        let g1 = AutGroup::closure(&[sigma(&k, i)], &h, DEFAULT_CAP).unwrap();
        let p1 = p(&k, [o, o, l]);
        let p2 = p(&k, [o, l, o]);
        let p3 = p(&k, [o, i, l]);
        let p4 = p(&k, [o, two_i, l]);
        let orb = orbit_and_stabilizer(&g1, &p2);
        let mut expect = vec![p2, p3, p4];
        expect.sort();
        assert_eq!(orb.points, expect);
        assert_eq!(orb.stabilizer.len(), 1);
        assert_eq!(sigma(&k, i).apply(&p2), p4);
        assert_eq!(sigma(&k, two_i).apply(&p2), p3);
        let orb = orbit_and_stabilizer(&g1, &p1);
        assert_eq!(orb.points, vec![p1]);
        assert_eq!(orb.stabilizer.len(), 3);
        assert_eq!(orbit_sum(&g1, &p2), Divisor::from_terms([(p2, 1), (p3, 1), (p4, 1)]));
        assert_eq!(orbit_sum(&g1, &p1), Divisor::from_terms([(p1, 3)]));
        // divisor pullback by sigma_{2i}: 4 P3 -> 4 P2
        let d = sigma(&k, two_i).pullback_divisor(&Divisor::from_terms([(p3, 4)]));
        assert_eq!(d, Divisor::from_terms([(p2, 4)]));
    }

    #[test]
    fn fermat_orbit_sum_is_line_section() {
        let k = f9();
        let f = fq9(&k);
        let i = k.gen();
        let (o, l) = (Fe::ZERO, Fe::ONE);
        let d = ProjMap::new(&k, [[i, o, o], [o, l, o], [o, o, l]]).unwrap();
        let g = AutGroup::closure(&[d], &f, DEFAULT_CAP).unwrap();
        let q = f.point_check([k.add(l, i), l, o]).unwrap();
        let s = orbit_sum(&g, &q);
        assert_eq!(s, f.line_intersection_divisor(&TriPoly::var(&k, 2)).unwrap());
    }
}
