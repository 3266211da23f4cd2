use crate::action::RatFunc;
use crate::algebra::linalg::{rank, solve};
use crate::algebra::{Fe, TriPoly};
use crate::curve::CurvePoint;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum SpanOutcome {
    /// `target = Σ c_i basis_i`, verified symbolically modulo the curve.
    Coefficients(Vec<Fe>),
    /// No combination exists. The witness, when present, is a sample point
    /// whose value constraint is inconsistent with the earlier samples.
    Refuted { witness: Option<CurvePoint> },
}

#[derive(Clone, Debug)]
pub struct SpanCertificate {
    pub target: RatFunc,
    pub basis: Vec<RatFunc>,
    pub outcome: SpanOutcome,
}

impl SpanCertificate {
    pub fn coefficients(&self) -> Option<&[Fe]> {
        match &self.outcome {
            SpanOutcome::Coefficients(c) => Some(c),
            SpanOutcome::Refuted { .. } => None,
        }
    }

    /// Re-checks the stored coefficients symbolically.
    pub fn verify(&self) -> bool {
        match &self.outcome {
            SpanOutcome::Coefficients(c) => identity_holds(&self.target, &self.basis, c),
            SpanOutcome::Refuted { .. } => solve_symbolic(&self.target, &self.basis).is_none(),
        }
    }
}

/// Forms `N_0, N_1, ..` with `target ∈ span(basis)` iff `N_0 = Σ c_i N_i`
/// holds as an identity of canonical remainders: everything is cleared to
/// the common denominator `den_h · Π den_i`.
fn cleared_forms(target: &RatFunc, basis: &[RatFunc]) -> (TriPoly, Vec<TriPoly>) {
    let c = target.curve();
    let k = c.field();
    let all_dens = basis.iter().fold(TriPoly::one(k), |acc, b| acc.mul(b.den()));
    let n0 = c.normal_form(&target.num().mul(&all_dens));
    let ns = (0..basis.len())
        .map(|i| {
            let others = basis
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(target.den().clone(), |acc, (_, b)| acc.mul(b.den()));
            c.normal_form(&basis[i].num().mul(&others))
        })
        .collect();
    (n0, ns)
}

fn monomial_rows(forms: &[&TriPoly]) -> Vec<Vec<Fe>> {
    let mut monos: Vec<[u32; 3]> = forms.iter().flat_map(|f| f.terms().map(|(e, _)| *e)).collect();
    monos.sort();
    monos.dedup();
    monos
        .iter()
        .map(|&e| forms.iter().map(|f| f.coeff(e)).collect())
        .collect()
}

fn solve_symbolic(target: &RatFunc, basis: &[RatFunc]) -> Option<Vec<Fe>> {
    let (n0, ns) = cleared_forms(target, basis);
    let refs: Vec<&TriPoly> = ns.iter().collect();
    let mut rows = monomial_rows(&[refs.as_slice(), &[&n0]].concat());
    let b: Vec<Fe> = rows.iter_mut().map(|r| r.pop().unwrap()).collect();
    if rows.is_empty() {
        return Some(vec![Fe::ZERO; basis.len()]);
    }
    solve(target.field(), &rows, &b)
}

fn identity_holds(target: &RatFunc, basis: &[RatFunc], coeffs: &[Fe]) -> bool {
    let (n0, ns) = cleared_forms(target, basis);
    let k = target.field();
    let combo = ns
        .iter()
        .zip(coeffs)
        .fold(TriPoly::zero(k), |acc, (n, &c)| acc.add(&n.scale(c)));
    combo == n0
}

/// Value of a function at a point where its denominator does not vanish.
fn plain_value(f: &RatFunc, p: &CurvePoint) -> Option<Fe> {
    let k = f.field();
    let d = f.den().eval(p.coords());
    (!d.is_zero()).then(|| k.div(f.num().eval(p.coords()), d))
}

/// Coefficients of `target` in the span of `basis`, or a refutation.
/// Values at sample points act as a prefilter; the answer is always decided
/// and certified symbolically.
pub fn span_coefficients(target: &RatFunc, basis: &[RatFunc]) -> Result<SpanCertificate> {
    let c = target.curve();
    let k = c.field();
    if basis.iter().any(|b| b.curve() != c) {
        return Err(Error::FieldMismatch);
    }
    let max_deg = basis.iter().map(|b| b.form_degree()).chain([target.form_degree()]).max().unwrap_or(1) as usize;
    let needed = 2 * max_deg * max_deg;
    let mut rows: Vec<Vec<Fe>> = Vec::new();
    let mut rhs: Vec<Fe> = Vec::new();
    let mut samples = 0;
    for p in c.smooth_points() {
        let Some(t) = plain_value(target, &p) else { continue };
        let Some(row) = basis.iter().map(|b| plain_value(b, &p)).collect::<Option<Vec<Fe>>>() else {
            continue;
        };
        rows.push(row);
        rhs.push(t);
        samples += 1;
        if solve(k, &rows, &rhs).is_none() {
            return Ok(SpanCertificate {
                target: target.clone(),
                basis: basis.to_vec(),
                outcome: SpanOutcome::Refuted { witness: Some(p) },
            });
        }
    }
    if samples < needed.min(basis.len() + 1) {
        return Err(Error::SamplingExhausted);
    }
    let outcome = match solve_symbolic(target, basis) {
        Some(coeffs) => {
            if !identity_holds(target, basis, &coeffs) {
                return Err(Error::CertificationFailed("span identity does not reduce to zero".into()));
            }
            SpanOutcome::Coefficients(coeffs)
        }
        None => SpanOutcome::Refuted { witness: None },
    };
    Ok(SpanCertificate { target: target.clone(), basis: basis.to_vec(), outcome })
}

/// Dimension of the linear span of `fns` inside the function field.
pub fn span_dimension(fns: &[RatFunc]) -> Result<usize> {
    let first = fns.first().ok_or_else(|| Error::Precondition("empty function list".into()))?;
    let c = first.curve();
    let k = c.field();
    let forms: Vec<TriPoly> = (0..fns.len())
        .map(|i| {
            let others = fns
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(TriPoly::one(k), |acc, (_, f)| acc.mul(f.den()));
            c.normal_form(&fns[i].num().mul(&others))
        })
        .collect();
    let refs: Vec<&TriPoly> = forms.iter().collect();
    Ok(rank(k, &monomial_rows(&refs)))
}
