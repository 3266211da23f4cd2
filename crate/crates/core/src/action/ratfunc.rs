use std::fmt;

use crate::action::ProjMap;
use crate::algebra::{Fe, Field, TriPoly};
use crate::curve::{CurvePoint, Divisor, PlaneCurve};
use crate::error::{Error, Result};

/// A rational function on a curve: a quotient of forms of equal degree, both
/// kept as canonical remainders modulo the curve equation.
#[derive(Clone)]
pub struct RatFunc {
    curve: PlaneCurve,
    num: TriPoly,
    den: TriPoly,
    degree: u32,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.curve == other.curve
            && self
                .curve
                .vanishes_on(&self.num.mul(&other.den).sub(&other.num.mul(&self.den)))
    }
}

impl RatFunc {
    pub fn new(curve: &PlaneCurve, num: TriPoly, den: TriPoly) -> Result<Self> {
        if num.field() != curve.field() || den.field() != curve.field() {
            return Err(Error::FieldMismatch);
        }
        let dd = den.homogeneous_degree()?;
        if !num.is_zero() && num.homogeneous_degree()? != dd {
            return Err(Error::NotHomogeneous);
        }
        let den = curve.normal_form(&den);
        if den.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        let num = curve.normal_form(&num);
        Ok(RatFunc { curve: curve.clone(), num, den, degree: dd })
    }

    pub fn constant(curve: &PlaneCurve, c: Fe) -> Self {
        let k = curve.field();
        RatFunc::new(curve, TriPoly::constant(k, c), TriPoly::one(k)).unwrap()
    }

    /// The ratio of two coordinate-free linear forms `a / b`.
    pub fn ratio(curve: &PlaneCurve, a: [Fe; 3], b: [Fe; 3]) -> Result<Self> {
        let k = curve.field();
        RatFunc::new(curve, TriPoly::linear(k, a), TriPoly::linear(k, b))
    }

    pub fn curve(&self) -> &PlaneCurve {
        &self.curve
    }

    pub fn field(&self) -> &Field {
        self.curve.field()
    }

    pub fn num(&self) -> &TriPoly {
        &self.num
    }

    pub fn den(&self) -> &TriPoly {
        &self.den
    }

    /// Common degree of numerator and denominator forms.
    pub fn form_degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The constant value when the function is constant.
    pub fn constant_value(&self) -> Option<Fe> {
        let k = self.field();
        if self.num.is_zero() {
            return Some(Fe::ZERO);
        }
        // both sides are canonical remainders, so proportionality is exact
        let (e, c) = self.den.leading_term()?;
        let ratio = k.div(self.num.coeff(e), c);
        (self.num == self.den.scale(ratio)).then_some(ratio)
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn add(&self, other: &RatFunc) -> Result<RatFunc> {
        RatFunc::new(
            &self.curve,
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &RatFunc) -> Result<RatFunc> {
        self.add(&other.scale(self.field().neg(Fe::ONE)))
    }

    pub fn mul(&self, other: &RatFunc) -> Result<RatFunc> {
        RatFunc::new(&self.curve, self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, c: Fe) -> RatFunc {
        RatFunc { num: self.num.scale(c), ..self.clone() }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.num.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        Ok(RatFunc { num: self.den.clone(), den: self.num.clone(), ..self.clone() })
    }

    /// `self - c`.
    pub fn shift(&self, c: Fe) -> RatFunc {
        RatFunc::new(&self.curve, self.num.sub(&self.den.scale(c)), self.den.clone()).unwrap()
    }

    /// `f ∘ M`.
    pub fn pullback(&self, m: &ProjMap) -> RatFunc {
        RatFunc::new(
            &self.curve,
            self.num.compose_linear(m.matrix()),
            self.den.compose_linear(m.matrix()),
        )
        .expect("automorphisms keep denominators nonzero")
    }

    /// `v_P(f)`; `None` for the zero function.
    pub fn valuation(&self, p: &CurvePoint) -> Result<Option<i64>> {
        if self.num.is_zero() {
            return Ok(None);
        }
        let a = self.curve.form_order(p, &self.num)?;
        let b = self.curve.form_order(p, &self.den)?;
        Ok(Some(a.order as i64 - b.order as i64))
    }

    /// Value at a point; `None` means the point is a pole.
    pub fn value(&self, p: &CurvePoint) -> Result<Option<Fe>> {
        if self.num.is_zero() {
            return Ok(Some(Fe::ZERO));
        }
        let k = self.field();
        let a = self.curve.form_order(p, &self.num)?;
        let b = self.curve.form_order(p, &self.den)?;
        Ok(match a.order.cmp(&b.order) {
            std::cmp::Ordering::Greater => Some(Fe::ZERO),
            std::cmp::Ordering::Less => None,
            std::cmp::Ordering::Equal => Some(k.div(a.lead, b.lead)),
        })
    }

    /// `(f)`, zeros minus poles.
    pub fn divisor(&self) -> Result<Divisor> {
        if self.num.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        if self.is_constant() {
            return Ok(Divisor::zero());
        }
        self.curve.divisor_of_quotient(&self.num, &self.den)
    }

    pub fn render(&self) -> String {
        let names = ["X", "Y", "Z"];
        if self.den.leading_term().map(|(e, _)| e) == Some([0, 0, 0]) {
            let c = self.den.leading_term().unwrap().1;
            return self.num.scale(self.field().inv(c)).render(&names);
        }
        format!("({})/({})", self.num.render(&names), self.den.render(&names))
    }
}
