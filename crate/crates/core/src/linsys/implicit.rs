use crate::action::RatFunc;
use crate::algebra::linalg::kernel;
use crate::algebra::{Fe, TriPoly};
use crate::curve::{CurvePoint, Divisor, PlaneCurve, ProjPoint};
use crate::error::{Error, Result};
use crate::linsys::span_dimension;

/// The plane model `(f : g : 1)` of a curve and its image equation
/// `Φ(U, V, W)`, with `U, V, W` stored as variables 0, 1, 2.
#[derive(Clone, Debug)]
pub struct EmbeddingModel {
    pub source: PlaneCurve,
    pub f: RatFunc,
    pub g: RatFunc,
    pub phi: TriPoly,
    pub image: PlaneCurve,
    /// Degree of the moving part of the linear system `<f, g, 1>`.
    pub system_degree: u32,
    pub map_degree: u32,
    pub birational: bool,
}

impl EmbeddingModel {
    pub fn degree(&self) -> u32 {
        self.phi.homogeneous_degree().unwrap()
    }

    /// The forms `(A : B : C)` representing the map.
    pub fn coordinate_forms(&self) -> [TriPoly; 3] {
        coordinate_forms(&self.f, &self.g)
    }

    /// `Φ(A, B, C) ≡ 0` modulo the source equation.
    pub fn verify_identity(&self) -> bool {
        let [a, b, c] = self.coordinate_forms();
        self.source.vanishes_on(&self.phi.compose([&a, &b, &c]))
    }
}

fn coordinate_forms(f: &RatFunc, g: &RatFunc) -> [TriPoly; 3] {
    [f.num().mul(g.den()), g.num().mul(f.den()), f.den().mul(g.den())]
}

/// Image curve of `(f : g : 1)`: `Φ` is the unique (up to scalars) form of
/// least degree with `Φ(A, B, C) ≡ 0` modulo the source equation, found as a
/// kernel vector over the monomials of that degree.
pub fn implicitize(f: &RatFunc, g: &RatFunc) -> Result<EmbeddingModel> {
    let c = f.curve();
    let k = c.field();
    if f.is_constant() || g.is_constant() {
        return Err(Error::ConstantFunction);
    }
    let one = RatFunc::constant(c, Fe::ONE);
    if span_dimension(&[one, f.clone(), g.clone()])? < 3 {
        return Err(Error::EliminationDegenerate("1, f, g are linearly dependent".into()));
    }
    let forms = coordinate_forms(f, g);
    let e_sys = forms[0].homogeneous_degree()?;
    let divs: Vec<Divisor> = forms.iter().map(|a| c.intersection_divisor(a)).collect::<Result<_>>()?;
    let base = divs[1..].iter().fold(divs[0].clone(), |acc, d| acc.min(d));
    let system_degree = (c.degree() * e_sys) as i64 - base.degree();
    let system_degree = system_degree as u32;

    let mut phi = None;
    for e in 1..=system_degree {
        let monos: Vec<[u32; 3]> = (0..=e)
            .rev()
            .flat_map(|a| (0..=e - a).rev().map(move |b| [a, b, e - a - b]))
            .collect();
        let images: Vec<TriPoly> = monos
            .iter()
            .map(|m| {
                c.normal_form(
                    &forms[0].pow(m[0]).mul(&forms[1].pow(m[1])).mul(&forms[2].pow(m[2])),
                )
            })
            .collect();
        let mut keys: Vec<[u32; 3]> = images.iter().flat_map(|p| p.terms().map(|(e, _)| *e)).collect();
        keys.sort();
        keys.dedup();
        let rows: Vec<Vec<Fe>> = keys.iter().map(|&key| images.iter().map(|p| p.coeff(key)).collect()).collect();
        let ker = kernel(k, &rows, monos.len());
        if ker.is_empty() {
            continue;
        }
        if ker.len() > 1 {
            return Err(Error::EliminationDegenerate(format!(
                "{}-dimensional family of degree-{e} relations",
                ker.len()
            )));
        }
        let poly = TriPoly::from_terms(k, monos.iter().zip(&ker[0]).map(|(&m, &v)| (m, v)));
        let (_, lead) = poly.leading_term().unwrap();
        phi = Some(poly.scale(k.inv(lead)));
        break;
    }
    let phi = phi.ok_or_else(|| Error::EliminationDegenerate("no relation up to the system degree".into()))?;
    let d = phi.homogeneous_degree()?;
    if system_degree % d != 0 {
        return Err(Error::CertificationFailed(format!(
            "image degree {d} does not divide the system degree {system_degree}"
        )));
    }
    let map_degree = system_degree / d;
    let image = PlaneCurve::new(phi.clone())?;
    let model = EmbeddingModel {
        source: c.clone(),
        f: f.clone(),
        g: g.clone(),
        phi,
        image,
        system_degree,
        map_degree,
        birational: map_degree == 1,
    };
    if !model.verify_identity() {
        return Err(Error::CertificationFailed("image equation does not vanish on the curve".into()));
    }
    Ok(model)
}

/// `φ(P)`, resolving poles by the valuation of each coordinate: entries of
/// minimal valuation contribute their leading coefficient, others vanish.
pub fn image_point(model: &EmbeddingModel, p: &CurvePoint) -> Result<ProjPoint> {
    let k = model.source.field();
    let c = &model.source;
    let mut vals: Vec<(i64, Fe)> = Vec::new();
    for f in [&model.f, &model.g] {
        let a = c.form_order(p, f.num())?;
        let b = c.form_order(p, f.den())?;
        vals.push((a.order as i64 - b.order as i64, k.div(a.lead, b.lead)));
    }
    vals.push((0, Fe::ONE));
    let m = vals.iter().map(|v| v.0).min().unwrap();
    let coords: Vec<Fe> = vals.iter().map(|&(v, lead)| if v == m { lead } else { Fe::ZERO }).collect();
    let q = ProjPoint::new(k, [coords[0], coords[1], coords[2]])?;
    if !model.phi.eval(q.coords()).is_zero() {
        return Err(Error::CertificationFailed(format!("image point {} is off the image curve", q.render(k))));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::tests::p;
    use crate::curve::tests::{f9, fq9, h9};

    fn e(i: usize) -> [Fe; 3] {
        let mut v = [Fe::ZERO; 3];
        v[i] = Fe::ONE;
        v
    }

    #[test]
    fn hermitian_model() {
        let k = f9();
        let h = h9(&k);
        let f = RatFunc::ratio(&h, e(1), e(0)).unwrap();
        let g = RatFunc::ratio(&h, e(2), e(0)).unwrap();
        let m = implicitize(&f, &g).unwrap();
        // oracle: U^3 V + U V^3 - W^4
        let expect = TriPoly::from_terms(
            &k,
            [([3, 1, 0], Fe::ONE), ([1, 3, 0], Fe::ONE), ([0, 0, 4], k.from_i64(-1))],
        );
        let (_, lead) = expect.leading_term().unwrap();
        assert_eq!(m.phi, expect.scale(k.inv(lead)));
        assert_eq!(m.degree(), 4);
        assert!(m.birational);
        let i = k.gen();
        let (o, l) = (Fe::ZERO, Fe::ONE);
        assert_eq!(image_point(&m, &p(&k, [o, o, l])).unwrap(), p(&k, [o, l, o]));
        assert_eq!(image_point(&m, &p(&k, [o, l, o])).unwrap(), p(&k, [l, o, o]));
        assert_eq!(image_point(&m, &p(&k, [o, i, l])).unwrap(), p(&k, [i, l, o]));
        assert_eq!(implicitize(&f, &f).unwrap_err().code(), "ELIMINATION_DEGENERATE");
    }

    #[test]
    fn fermat_model() {
        let k = f9();
        let fq = fq9(&k);
        let f = RatFunc::ratio(&fq, e(1), e(2)).unwrap();
        let g = RatFunc::ratio(&fq, e(0), e(2)).unwrap();
        let m = implicitize(&f, &g).unwrap();
        assert_eq!(m.phi, fq.form().clone());
        assert!(m.birational);
    }
}
