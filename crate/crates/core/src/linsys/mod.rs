//! Linear systems on a curve: span membership and dimension, base loci,
//! implicitization of `(f : g : 1)`, image points and projective
//! equivalence of plane models.

mod equiv;
mod implicit;
mod span;

pub use equiv::{projective_equivalence, Equivalence};
pub(crate) use equiv::{general_position, map_from_frames};
pub use implicit::{image_point, implicitize, EmbeddingModel};
pub use span::{span_coefficients, span_dimension, SpanCertificate, SpanOutcome};

use crate::curve::Divisor;
use crate::error::{Error, Result};

/// Point-wise minimum of effective divisors of equal degree.
pub fn base_locus(divisors: &[Divisor]) -> Result<Divisor> {
    let first = divisors.first().ok_or_else(|| Error::Precondition("no divisors".into()))?;
    if divisors.iter().any(|d| !d.is_effective() && !d.is_zero() || d.degree() != first.degree()) {
        return Err(Error::Precondition("divisors must be effective of equal degree".into()));
    }
    Ok(divisors.iter().skip(1).fold(first.clone(), |acc, d| acc.min(d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::tests::p;
    use crate::algebra::Fe;
    use crate::curve::tests::f9;

    #[test]
    fn base_locus_examples() {
        let k = f9();
        let i = k.gen();
        let (o, l) = (Fe::ZERO, Fe::ONE);
        let p1 = p(&k, [o, o, l]);
        let p2 = p(&k, [o, l, o]);
        let p3 = p(&k, [o, i, l]);
        let p4 = p(&k, [o, k.add(i, i), l]);
        let d = Divisor::from_terms([(p1, 1), (p2, 1), (p3, 1), (p4, 1)]);
        let a = Divisor::from_terms([(p1, 4)]);
        let b = Divisor::from_terms([(p2, 4)]);
        assert_eq!(base_locus(&[d.clone(), a.clone(), b]).unwrap(), Divisor::zero());
        assert_eq!(base_locus(&[d.clone(), d.clone()]).unwrap(), d);
        let c = Divisor::from_terms([(p1, 3), (p2, 1)]);
        assert_eq!(base_locus(&[a, c]).unwrap(), Divisor::from_terms([(p1, 3)]));
    }
}
