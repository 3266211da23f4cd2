use crate::action::{map_preserves_curve, orbit_sum, AutGroup, ProjMap};
use crate::curve::{CurvePoint, Divisor, ProjPoint};
use crate::error::{Error, Result};
use crate::linsys::{general_position, image_point, map_from_frames, EmbeddingModel};

use super::{galois_certificate, is_total_inflection, Condition, Evidence, GaloisCertificate, InflectionCheck, Verdict};

/// A model with Galois points at `φ(P_1)` and `φ(P_2)`, an automorphism
/// `σ ∈ G_1` with `σ(P_2) = P_3`, and the group expected at `φ(P_3)`.
#[derive(Clone, Debug)]
pub struct ExtendInput {
    pub model: EmbeddingModel,
    pub sigma: ProjMap,
    /// `P_1, P_2, P_3`.
    pub points: Vec<CurvePoint>,
    /// `G_1, G_2, G_3`.
    pub groups: Vec<AutGroup>,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct ExtensionReport {
    pub conditions: Vec<Condition>,
    pub inflections: Vec<InflectionCheck>,
    /// All three points are total inflections, so the conditions hold
    /// without divisor computations; they are re-verified regardless.
    pub fast_path: bool,
    pub certificate: GaloisCertificate,
    /// `σ*(P_3 + Σ γ(P_3))` and `P_2 + Σ τ(P_2)`.
    pub pulled: Divisor,
    pub target: Divisor,
    pub extendable: bool,
    pub matrix: Option<ProjMap>,
    pub transcript: Vec<String>,
}

pub fn check_extendability(input: &ExtendInput) -> Result<ExtensionReport> {
    let model = &input.model;
    let k = model.source.field();
    if input.points.len() != 3 || input.groups.len() != 3 {
        return Err(Error::Precondition("three points and three groups are required".into()));
    }
    if model.degree() < 4 {
        return Err(Error::ModelDegreeBelowFour(model.degree()));
    }
    let (p, g, s) = (&input.points, &input.groups, &input.sigma);
    if !g[0].contains(s) {
        return Err(Error::Precondition(format!("{} is not in G_1", s.render())));
    }
    if s.apply(&p[1]) != p[2] {
        return Err(Error::Precondition("σ does not map P_2 to P_3".into()));
    }
    let mut transcript = Vec::new();
    let inflections: Vec<InflectionCheck> =
        (0..3).map(|i| is_total_inflection(&g[i], &p[i])).collect::<Result<_>>()?;
    let fast_path = inflections.iter().all(|c| c.fixed);
    if fast_path {
        transcript.push("all three points are total inflections; conditions follow and are re-verified".into());
    }

    let mut conditions = Vec::new();
    let mut push = |label, pass: bool, summary: String| {
        let verdict = if pass { Verdict::Pass } else { Verdict::Fail };
        conditions.push(Condition { label, verdict, summary, evidence: Evidence::None });
    };
    let s_p1 = s.apply(&p[0]);
    push(
        "a",
        s_p1 == p[0],
        format!("σ(P_1) = {}, P_1 = {}", s_p1.render(k), p[0].render(k)),
    );
    let m3 = image_point(model, &p[2])?;
    let certificate = galois_certificate(model, &m3, &g[2], input.seed)?;
    let b_pass = certificate.artin && certificate.inner;
    push(
        "b",
        b_pass,
        format!(
            "projection from φ(P_3) = {}: invariant {}, degree {}, |G_3| = {}",
            m3.render(k),
            certificate.invariant,
            certificate.degree.map_or("-".into(), |d| d.to_string()),
            g[2].order()
        ),
    );
    let pulled = s.pullback_divisor(&orbit_sum(&g[2], &p[2]).plus(p[2], 1));
    let target = orbit_sum(&g[1], &p[1]).plus(p[1], 1);
    push(
        "c",
        pulled == target,
        format!("σ*(P_3 + Σ γ(P_3)) = {}, P_2 + Σ τ(P_2) = {}", pulled.render(k), target.render(k)),
    );
    let extendable = conditions.iter().all(|c| c.verdict == Verdict::Pass);
    if fast_path && !extendable {
        return Err(Error::CertificationFailed(
            "total inflections at all points, yet a condition failed".into(),
        ));
    }
    let matrix = if extendable {
        let m = build_linear_extension(model, s)?;
        transcript.push(format!("σ̃ = {} satisfies φ∘σ = σ̃∘φ modulo the curve", m.render()));
        Some(m)
    } else {
        None
    };
    Ok(ExtensionReport {
        conditions,
        inflections,
        fast_path,
        certificate,
        pulled,
        target,
        extendable,
        matrix,
        transcript,
    })
}

/// The linear map `σ̃` with `φ∘σ = σ̃∘φ`, read off four image points in
/// general position and certified as an identity of rational maps.
pub fn build_linear_extension(model: &EmbeddingModel, sigma: &ProjMap) -> Result<ProjMap> {
    let c = &model.source;
    let k = c.field();
    if map_preserves_curve(sigma, c).is_none() {
        return Err(Error::NotAutomorphism);
    }
    let mut from: Vec<[crate::algebra::Fe; 3]> = Vec::new();
    let mut to: Vec<[crate::algebra::Fe; 3]> = Vec::new();
    let mut pairs: Vec<(ProjPoint, ProjPoint)> = Vec::new();
    for p in c.smooth_points() {
        let x = image_point(model, &p)?;
        let y = image_point(model, &sigma.apply(&p))?;
        pairs.push((x, y));
        if from.len() < 4 {
            let mut f2 = from.clone();
            let mut t2 = to.clone();
            f2.push(*x.coords());
            t2.push(*y.coords());
            if general_position(k, &f2) && general_position(k, &t2) {
                from = f2;
                to = t2;
            }
        }
    }
    if from.len() < 4 {
        return Err(Error::InsufficientMarks);
    }
    let m = map_from_frames(k, &[from[0], from[1], from[2], from[3]], &[to[0], to[1], to[2], to[3]])
        .ok_or_else(|| Error::CertificationFailed("frame map is singular".into()))?;
    if let Some((x, _)) = pairs.iter().find(|(x, y)| m.apply(x) != *y) {
        return Err(Error::CertificationFailed(format!("σ̃ disagrees at image point {}", x.render(k))));
    }
    if !extension_identity_holds(model, sigma, &m) {
        return Err(Error::CertificationFailed("φ∘σ and σ̃∘φ differ".into()));
    }
    Ok(m)
}

/// `φ∘σ = σ̃∘φ` as rational maps: `(A∘σ : B∘σ : C∘σ)` and `σ̃(A, B, C)`
/// have vanishing 2x2 minors modulo the curve, and the latter is not zero.
pub fn extension_identity_holds(model: &EmbeddingModel, sigma: &ProjMap, sigma_tilde: &ProjMap) -> bool {
    let c = &model.source;
    let forms = model.coordinate_forms();
    let moved: Vec<_> = forms.iter().map(|a| a.compose_linear(sigma.matrix())).collect();
    let mm = sigma_tilde.matrix();
    let image: Vec<_> = (0..3)
        .map(|r| forms[0].scale(mm[r][0]).add(&forms[1].scale(mm[r][1])).add(&forms[2].scale(mm[r][2])))
        .collect();
    let minors_vanish = [(0, 1), (0, 2), (1, 2)].iter().all(|&(i, j)| {
        let minor = moved[i].mul(&image[j]).sub(&moved[j].mul(&image[i]));
        minor.is_zero() || c.vanishes_on(&minor)
    });
    minors_vanish && !image.iter().all(|f| c.vanishes_on(f))
}
