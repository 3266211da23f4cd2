//! Function degree, invariance, fixed-field generators and Möbius
//! normalization of quotient maps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::{orbit_sum, AutGroup, RatFunc};
use crate::algebra::linalg::mat3_apply;
use crate::algebra::{Fe, TriPoly};
use crate::curve::{CurvePoint, Divisor};
use crate::error::{Error, Result};

const DEGREE_RETRIES: usize = 16;
const MAX_RATIO_CANDIDATES: usize = 256;

/// Result of a degree computation: the degree, the sampled fiber it was read
/// from, and the pole degree when it could be computed independently.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionDegree {
    pub degree: u32,
    pub lambda: Fe,
    pub fiber: Divisor,
    pub pole_degree: Option<u32>,
    pub attempts: usize,
}

/// Degree of `f` as a map to the line: the size of `(f - λ)_0` for a seeded
/// sample of `λ`, resampled when the fiber is irrational or meets a singular
/// point.
pub fn function_degree(f: &RatFunc, seed: u64) -> Result<FunctionDegree> {
    if f.is_constant() {
        return Err(Error::ConstantFunction);
    }
    let c = f.curve();
    let k = c.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pole_degree = match c.intersection_divisor(f.den()) {
        Ok(dd) => {
            let dn = c.intersection_divisor(f.num()).ok();
            dn.map(|dn| (dd.degree() - dd.min(&dn).degree()) as u32)
        }
        Err(_) => None,
    };
    for attempt in 1..=DEGREE_RETRIES {
        let lambda = k.from_index(rng.gen_range(0..k.order())).unwrap();
        let g = f.num().sub(&f.den().scale(lambda));
        let dg = match c.intersection_divisor(&g) {
            Ok(d) => d,
            Err(Error::ExtensionRequired(_) | Error::SingularPoint(_)) => continue,
            Err(e) => return Err(e),
        };
        // subtract the base locus of the pencil <num, den>
        let mut fiber = dg.clone();
        for (p, &m) in dg.terms() {
            let vd = c.local_valuation(p, f.den())? as i64;
            fiber.add_point(*p, -m.min(vd));
        }
        let degree = fiber.degree() as u32;
        if let Some(pd) = pole_degree {
            if pd != degree {
                return Err(Error::CertificationFailed(format!(
                    "fiber degree {degree} differs from pole degree {pd}"
                )));
            }
        }
        return Ok(FunctionDegree { degree, lambda, fiber, pole_degree, attempts: attempt });
    }
    Err(Error::RetriesExhausted(DEGREE_RETRIES))
}

pub fn is_invariant(f: &RatFunc, g: &AutGroup) -> bool {
    g.elements().iter().all(|s| f.pullback(s) == *f)
}

/// Linear forms `ℓ` (up to scalars) with `ℓ ∘ σ = χ(σ) ℓ` for every
/// generator, paired with their characters. Coordinate forms come first.
fn semi_invariant_forms(g: &AutGroup) -> Vec<([Fe; 3], Vec<Fe>)> {
    let k = g.curve().field();
    let mut forms: Vec<[Fe; 3]> = vec![
        [Fe::ONE, Fe::ZERO, Fe::ZERO],
        [Fe::ZERO, Fe::ONE, Fe::ZERO],
        [Fe::ZERO, Fe::ZERO, Fe::ONE],
    ];
    for a in k.elements() {
        for b in k.elements() {
            forms.push([Fe::ONE, a, b]);
        }
        forms.push([Fe::ZERO, Fe::ONE, a]);
    }
    let mut seen = std::collections::HashSet::new();
    forms.retain(|f| seen.insert(*f));
    let mut out = Vec::new();
    'forms: for l in forms {
        let mut chars = Vec::new();
        for s in g.generators() {
            let m = s.matrix();
            let mt = [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ];
            let moved = mat3_apply(k, &mt, &l);
            let j = l.iter().position(|c| !c.is_zero()).unwrap();
            let chi = k.div(moved[j], l[j]);
            if (0..3).any(|i| moved[i] != k.mul(chi, l[i])) {
                continue 'forms;
            }
            chars.push(chi);
        }
        out.push((l, chars));
    }
    out
}

fn accept(t: &RatFunc, g: &AutGroup, seed: u64) -> bool {
    if t.is_constant() || !is_invariant(t, g) {
        return false;
    }
    matches!(function_degree(t, seed), Ok(d) if d.degree as usize == g.order())
}

/// A generator `t` of the fixed field: invariant with degree `|G|`.
/// Candidates in order: ratios of semi-invariant linear forms sharing a
/// character, orbit products of coordinate ratios, Reynolds sums.
pub fn invariant_generator(g: &AutGroup, seed: u64) -> Result<RatFunc> {
    if g.order() < 2 {
        return Err(Error::Precondition("group must have order at least 2".into()));
    }
    let c = g.curve();
    let k = c.field();
    let forms = semi_invariant_forms(g);
    let mut tried = 0;
    for (a, ca) in &forms {
        for (b, cb) in &forms {
            if a == b || ca != cb {
                continue;
            }
            tried += 1;
            if tried > MAX_RATIO_CANDIDATES {
                break;
            }
            let Ok(t) = RatFunc::ratio(c, *a, *b) else { continue };
            if accept(&t, g, seed) {
                return Ok(t);
            }
        }
    }
    let coord_ratios: Vec<(usize, usize)> = vec![(0, 1), (0, 2), (1, 2), (1, 0), (2, 0), (2, 1)];
    for &(i, j) in &coord_ratios {
        let base = RatFunc::new(c, TriPoly::var(k, i), TriPoly::var(k, j))?;
        let mut prod = RatFunc::constant(c, Fe::ONE);
        let mut ok = true;
        for s in g.elements() {
            match prod.mul(&base.pullback(s)) {
                Ok(p) => prod = p,
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && accept(&prod, g, seed) {
            return Ok(prod);
        }
    }
    for &(i, j) in &coord_ratios {
        let base = RatFunc::new(c, TriPoly::var(k, i), TriPoly::var(k, j))?;
        let mut sum = RatFunc::constant(c, Fe::ZERO);
        for s in g.elements() {
            sum = sum.add(&base.pullback(s))?;
        }
        if accept(&sum, g, seed) {
            return Ok(sum);
        }
    }
    Err(Error::NotFound)
}

/// The Möbius transform of `t` with zero fiber through `zero_at` and pole
/// fiber through `pole_at`. The divisor identity
/// `(f) = Σ σ(zero_at) - Σ σ(pole_at)` is verified before returning.
pub fn mobius_normalize(t: &RatFunc, g: &AutGroup, zero_at: &CurvePoint, pole_at: &CurvePoint) -> Result<RatFunc> {
    if t.is_constant() {
        return Err(Error::ConstantFunction);
    }
    let a = t.value(zero_at)?;
    let b = t.value(pole_at)?;
    if a == b {
        return Err(Error::SameFiber);
    }
    let f = match (a, b) {
        (Some(a), Some(b)) => {
            let num = t.num().sub(&t.den().scale(a));
            let den = t.num().sub(&t.den().scale(b));
            RatFunc::new(t.curve(), num, den)?
        }
        (Some(a), None) => t.shift(a),
        (None, Some(b)) => t.shift(b).inv()?,
        (None, None) => unreachable!(),
    };
    let expected = orbit_sum(g, zero_at).sub(&orbit_sum(g, pole_at));
    let got = f.divisor()?;
    if got != expected {
        let k = t.field();
        return Err(Error::CertificationFailed(format!(
            "normalized divisor {} differs from the orbit difference {}",
            got.render(k),
            expected.render(k)
        )));
    }
    Ok(f)
}

/// The outer variant: a transform of `t` whose pole divisor is the orbit sum
/// through `pole_at`, verified before returning.
pub fn mobius_pole(t: &RatFunc, g: &AutGroup, pole_at: &CurvePoint) -> Result<RatFunc> {
    if t.is_constant() {
        return Err(Error::ConstantFunction);
    }
    let f = match t.value(pole_at)? {
        None => t.clone(),
        Some(b) => t.shift(b).inv()?,
    };
    let expected = orbit_sum(g, pole_at);
    let got = f.divisor()?.negative_part();
    if got != expected {
        let k = t.field();
        return Err(Error::CertificationFailed(format!(
            "pole divisor {} differs from the orbit sum {}",
            got.render(k),
            expected.render(k)
        )));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::tests::{p, sigma, tau};
    use crate::action::{ProjMap, DEFAULT_CAP};
    use crate::curve::tests::{f9, fq9, h9};

    fn e(i: usize) -> [Fe; 3] {
        let mut v = [Fe::ZERO; 3];
        v[i] = Fe::ONE;
        v
    }

    #[test]
    fn degrees_on_hermitian() {
        let k = f9();
        let h = h9(&k);
        let deg = |a, b| function_degree(&RatFunc::ratio(&h, e(a), e(b)).unwrap(), 7).unwrap().degree;
        assert_eq!(deg(0, 1), 3);
        assert_eq!(deg(0, 2), 3);
        assert_eq!(deg(1, 2), 4);
        let f = fq9(&k);
        assert_eq!(function_degree(&RatFunc::ratio(&f, e(1), e(2)).unwrap(), 7).unwrap().degree, 4);
        assert_eq!(
            function_degree(&RatFunc::constant(&h, Fe::ONE), 0).unwrap_err(),
            Error::ConstantFunction
        );
    }

    #[test]
    fn invariants_and_generators() {
        let k = f9();
        let h = h9(&k);
        let i = k.gen();
        let g1 = AutGroup::closure(&[sigma(&k, i)], &h, DEFAULT_CAP).unwrap();
        let g2 = AutGroup::closure(&[tau(&k, i)], &h, DEFAULT_CAP).unwrap();
        let xy = RatFunc::ratio(&h, e(0), e(1)).unwrap();
        let xz = RatFunc::ratio(&h, e(0), e(2)).unwrap();
        assert!(is_invariant(&xy, &g1));
        assert!(!is_invariant(&xz, &g1));
        assert!(is_invariant(&xz, &AutGroup::trivial(&h)));
        assert_eq!(invariant_generator(&g1, 0).unwrap(), xy);
        assert_eq!(invariant_generator(&g2, 0).unwrap(), xz);
        let f = fq9(&k);
        let (o, l) = (Fe::ZERO, Fe::ONE);
        let d = ProjMap::new(&k, [[i, o, o], [o, l, o], [o, o, l]]).unwrap();
        let g = AutGroup::closure(&[d], &f, DEFAULT_CAP).unwrap();
        assert_eq!(invariant_generator(&g, 0).unwrap(), RatFunc::ratio(&f, e(1), e(2)).unwrap());
    }

    #[test]
    fn mobius_examples() {
        let k = f9();
        let h = h9(&k);
        let i = k.gen();
        let (o, l) = (Fe::ZERO, Fe::ONE);
        let g1 = AutGroup::closure(&[sigma(&k, i)], &h, DEFAULT_CAP).unwrap();
        let g2 = AutGroup::closure(&[tau(&k, i)], &h, DEFAULT_CAP).unwrap();
        let p1 = p(&k, [o, o, l]);
        let p2 = p(&k, [o, l, o]);
        let t1 = RatFunc::ratio(&h, e(0), e(1)).unwrap();
        let f = mobius_normalize(&t1, &g1, &p1, &p2).unwrap();
        assert_eq!(f, RatFunc::ratio(&h, e(1), e(0)).unwrap());
        let t2 = RatFunc::ratio(&h, e(0), e(2)).unwrap();
        let g = mobius_normalize(&t2, &g2, &p2, &p1).unwrap();
        assert_eq!(g, RatFunc::ratio(&h, e(2), e(0)).unwrap());
        let p3 = p(&k, [o, i, l]);
        assert_eq!(mobius_normalize(&t1, &g1, &p2, &p3).unwrap_err(), Error::SameFiber);

        let fq = fq9(&k);
        let d = ProjMap::new(&k, [[i, o, o], [o, l, o], [o, o, l]]).unwrap();
        let g = AutGroup::closure(&[d], &fq, DEFAULT_CAP).unwrap();
        let q = fq.point_check([k.add(l, i), l, o]).unwrap();
        let t = RatFunc::ratio(&fq, e(1), e(2)).unwrap();
        assert_eq!(mobius_pole(&t, &g, &q).unwrap(), t);
    }
}
