use crate::action::{function_degree, is_invariant, AutGroup, RatFunc};
use crate::algebra::linalg::cross;
use crate::algebra::Fe;
use crate::curve::{CurvePoint, ProjPoint};
use crate::error::{Error, Result};
use crate::linsys::{image_point, implicitize, EmbeddingModel};

use super::{CheckInput, CheckKind, ConditionReport, Evidence, OracleTranscript};

/// Galois property of the projection from `center` on the image model,
/// certified by a group of `|G|` automorphisms fixing the projection, which
/// has degree `|G|`.
#[derive(Clone, Debug)]
pub struct GaloisCertificate {
    pub center: ProjPoint,
    pub inner: bool,
    /// Two lines through the center; the projection is their ratio.
    pub lines: [[Fe; 3]; 2],
    pub group: AutGroup,
    /// The projection pulled back to the source curve.
    pub projection: RatFunc,
    pub invariant: bool,
    pub degree: Option<u32>,
    /// Inner centers must be smooth points of the image.
    pub smooth: bool,
    pub artin: bool,
    pub oracle: Option<OracleTranscript>,
}

pub fn galois_certificate(
    model: &EmbeddingModel,
    center: &ProjPoint,
    g: &AutGroup,
    seed: u64,
) -> Result<GaloisCertificate> {
    let k = model.source.field();
    let c = center.coords();
    let mut lines = Vec::new();
    for j in 0..3 {
        let mut e = [Fe::ZERO; 3];
        e[j] = Fe::ONE;
        let l = cross(k, c, &e);
        if l.iter().any(|x| !x.is_zero()) && (lines.is_empty() || !proportional(k, &lines[0], &l)) {
            lines.push(l);
        }
        if lines.len() == 2 {
            break;
        }
    }
    let [a, b, cc] = model.coordinate_forms();
    let pull = |l: &[Fe; 3]| a.scale(l[0]).add(&b.scale(l[1])).add(&cc.scale(l[2]));
    let projection = RatFunc::new(&model.source, pull(&lines[0]), pull(&lines[1]))?;
    let inner = model.phi.eval(c).is_zero();
    let smooth = !inner || (0..3).any(|i| !model.phi.derivative(i).eval(c).is_zero());
    let invariant = is_invariant(&projection, g);
    let degree = if projection.is_constant() { None } else { Some(function_degree(&projection, seed)?.degree) };
    let artin = invariant && smooth && degree == Some(g.order() as u32);
    Ok(GaloisCertificate {
        center: *center,
        inner,
        lines: [lines[0], lines[1]],
        group: g.clone(),
        projection,
        invariant,
        degree,
        smooth,
        artin,
        oracle: None,
    })
}

fn proportional(k: &crate::algebra::Field, a: &[Fe; 3], b: &[Fe; 3]) -> bool {
    cross(k, a, b).iter().all(|x| x.is_zero())
}

/// The plane model `(f : g : 1)` with its marked Galois points.
#[derive(Clone, Debug)]
pub struct Construction {
    pub kind: CheckKind,
    pub model: EmbeddingModel,
    /// Image marks `φ(P_i)` (inner) or the outer centers.
    pub marks: Vec<ProjPoint>,
    /// `φ(Q)` for outer constructions.
    pub q_image: Option<ProjPoint>,
    /// `(c_0, c_1, c_2)` with `h = c_0 + c_1 f + c_2 g`.
    pub coefficients: Option<Vec<Fe>>,
    pub certificates: Vec<GaloisCertificate>,
    pub seed: u64,
}

fn h_coefficients(report: &ConditionReport) -> Option<Vec<Fe>> {
    report.conditions.iter().find_map(|c| match &c.evidence {
        Evidence::Span { certificate, .. } => certificate.coefficients().map(|x| x.to_vec()),
        _ => None,
    })
}

fn embed(report: &ConditionReport, expected_degree: u32) -> Result<EmbeddingModel> {
    let model = implicitize(&report.functions[0], &report.functions[1])?;
    if !model.birational {
        return Err(Error::NotBirational(model.map_degree));
    }
    if model.degree() != expected_degree {
        return Err(Error::DegreeMismatch { expected: expected_degree, found: model.degree() });
    }
    if !model.verify_identity() {
        return Err(Error::CertificationFailed("image equation does not vanish on the map".into()));
    }
    Ok(model)
}

fn third_center(report: &ConditionReport) -> Result<(Vec<Fe>, ProjPoint)> {
    let cs = h_coefficients(report).ok_or_else(|| Error::Precondition("report carries no span coefficients".into()))?;
    let k = report.functions[0].field();
    let center = ProjPoint::new(k, [k.neg(cs[2]), cs[1], Fe::ZERO])
        .map_err(|_| Error::CertificationFailed("h is constant on the model".into()))?;
    Ok((cs, center))
}

fn certify_all(
    model: &EmbeddingModel,
    marks: &[ProjPoint],
    groups: &[AutGroup],
    inner: bool,
    seed: u64,
) -> Result<Vec<GaloisCertificate>> {
    let k = model.source.field();
    let mut out = Vec::new();
    for (m, g) in marks.iter().zip(groups) {
        let cert = galois_certificate(model, m, g, seed)?;
        if !cert.artin || cert.inner != inner {
            return Err(Error::CertificationFailed(format!(
                "projection from {} is not certified {} Galois",
                m.render(k),
                if inner { "inner" } else { "outer" }
            )));
        }
        out.push(cert);
    }
    Ok(out)
}

fn unit(k: &crate::algebra::Field, i: usize) -> ProjPoint {
    let mut v = [Fe::ZERO; 3];
    v[i] = Fe::ONE;
    ProjPoint::new(k, v).unwrap()
}

/// The embedding behind a positive two- or three-inner report.
pub fn construct_inner(input: &CheckInput, points: &[CurvePoint], report: &ConditionReport) -> Result<Construction> {
    if !report.overall || !report.kind.is_inner() {
        return Err(Error::Precondition("construction needs a positive inner report".into()));
    }
    let k = input.curve.field();
    let model = embed(report, input.groups[0].order() as u32 + 1)?;
    let mut marks = Vec::new();
    for (i, expect) in [(0, unit(k, 1)), (1, unit(k, 0))] {
        let m = image_point(&model, &points[i])?;
        if m != expect {
            return Err(Error::CertificationFailed(format!(
                "φ(P_{}) = {}, expected {}",
                i + 1,
                m.render(k),
                expect.render(k)
            )));
        }
        marks.push(m);
    }
    let mut coefficients = None;
    if report.kind == CheckKind::ThreeInner {
        let (cs, center) = third_center(report)?;
        // the source-side route: supp(D) ∩ supp((h) + D) = {P_3}
        let d = report.divisor.as_ref().unwrap();
        let hd = report.functions[2].divisor()?.add(d);
        let common: Vec<&CurvePoint> = d.support().filter(|p| hd.multiplicity(p) > 0).collect();
        if common != vec![&points[2]] {
            return Err(Error::CertificationFailed("supp(D) ∩ supp((h)+D) is not {P_3}".into()));
        }
        let m3 = image_point(&model, &points[2])?;
        if m3 != center {
            return Err(Error::CertificationFailed(format!(
                "φ(P_3) = {} differs from the pencil center {}",
                m3.render(k),
                center.render(k)
            )));
        }
        marks.push(center);
        coefficients = Some(cs);
    }
    if marks.iter().any(|m| !m.coords()[2].is_zero()) {
        return Err(Error::CertificationFailed("marks are not on W = 0".into()));
    }
    let certificates = certify_all(&model, &marks, &input.groups, true, input.seed)?;
    Ok(Construction { kind: report.kind, model, marks, q_image: None, coefficients, certificates, seed: input.seed })
}

/// The embedding behind a positive two- or three-outer report.
pub fn construct_outer(input: &CheckInput, q: &CurvePoint, report: &ConditionReport) -> Result<Construction> {
    if !report.overall || report.kind.is_inner() {
        return Err(Error::Precondition("construction needs a positive outer report".into()));
    }
    let k = input.curve.field();
    let model = embed(report, input.groups[0].order() as u32)?;
    // f = U/W and g = V/W are the projections from (0:1:0) and (1:0:0)
    let mut marks = vec![unit(k, 1), unit(k, 0)];
    let mut coefficients = None;
    if report.kind == CheckKind::ThreeOuter {
        let (cs, center) = third_center(report)?;
        marks.push(center);
        coefficients = Some(cs);
    }
    let qi = image_point(&model, q)?;
    if !qi.coords()[2].is_zero() {
        return Err(Error::CertificationFailed(format!("φ(Q) = {} is off the line of the centers", qi.render(k))));
    }
    let certificates = certify_all(&model, &marks, &input.groups, false, input.seed)?;
    Ok(Construction {
        kind: report.kind,
        model,
        marks,
        q_image: Some(qi),
        coefficients,
        certificates,
        seed: input.seed,
    })
}
