//! Intersection divisors with forms, and divisors of quotients of forms.

use crate::algebra::{Fe, TriPoly};
use crate::curve::{Divisor, PlaneCurve, ProjPoint};
use crate::error::{Error, Result};

impl PlaneCurve {
    /// The divisor cut on the curve by `g`. Every intersection point must be
    /// rational and smooth; the total multiplicity is checked against Bézout.
    pub fn intersection_divisor(&self, g: &TriPoly) -> Result<Divisor> {
        let k = self.field();
        if g.is_zero() || self.vanishes_on(g) {
            return Err(Error::IdenticallyZero);
        }
        let deg_g = g.homogeneous_degree()?;
        let expected = (self.degree() * deg_g) as i64;
        let mut d = Divisor::zero();
        for p in self.rational_points() {
            if !g.eval(p.coords()).is_zero() {
                continue;
            }
            if !self.is_smooth_at(p.coords()) {
                return Err(Error::SingularPoint(p.render(k)));
            }
            d.add_point(*p, self.local_valuation(p, g)? as i64);
        }
        if d.degree() != expected {
            let hint = if deg_g == 1 {
                format!("; the line meets the curve in points of degree up to {}", self.line_splitting_degree(g))
            } else {
                String::new()
            };
            return Err(Error::ExtensionRequired(format!(
                "only {} of {} intersection points with {} are rational{}",
                d.degree(),
                expected,
                g.render(&["X", "Y", "Z"]),
                hint
            )));
        }
        Ok(d)
    }

    /// Intersection divisor with a line; an alias of
    /// [`PlaneCurve::intersection_divisor`] that rejects non-linear input.
    pub fn line_intersection_divisor(&self, l: &TriPoly) -> Result<Divisor> {
        if l.is_zero() || l.homogeneous_degree()? != 1 {
            return Err(Error::Precondition("not a nonzero linear form".into()));
        }
        self.intersection_divisor(l)
    }

    /// Smallest extension degree over which the line meets the curve in
    /// rational points only.
    fn line_splitting_degree(&self, l: &TriPoly) -> u32 {
        let k = self.field();
        let coeffs = [l.coeff([1, 0, 0]), l.coeff([0, 1, 0]), l.coeff([0, 0, 1])];
        // parametrize the line by two points on it: a + t b
        let Some(j) = (0..3).rev().find(|&i| !coeffs[i].is_zero()) else {
            return 1;
        };
        let others: Vec<usize> = (0..3).filter(|&i| i != j).collect();
        let point_with = |i: usize| {
            let mut v = [Fe::ZERO; 3];
            v[i] = Fe::ONE;
            v[j] = k.neg(k.div(coeffs[i], coeffs[j]));
            v
        };
        let (a, b) = (point_with(others[0]), point_with(others[1]));
        let t = TriPoly::var(k, 0);
        let s = TriPoly::var(k, 1);
        let sub: Vec<TriPoly> = (0..3)
            .map(|i| t.scale(a[i]).add(&s.scale(b[i])))
            .collect();
        let restricted = self.form().compose([&sub[0], &sub[1], &sub[2]]);
        let Some(u) = restricted.specialize(1, Fe::ONE).to_univariate(0) else {
            return 1;
        };
        if u.is_zero() {
            return 1;
        }
        let (_, factors) = u.factor(0);
        factors.iter().map(|(f, _)| f.degree().unwrap_or(1) as u32).fold(1, |acc, d| acc.max(d))
    }

    /// `(num) - (den)` for forms of equal degree.
    pub fn divisor_of_quotient(&self, num: &TriPoly, den: &TriPoly) -> Result<Divisor> {
        if num.homogeneous_degree()? != den.homogeneous_degree()? {
            return Err(Error::NotHomogeneous);
        }
        let d = self.intersection_divisor(num)?.sub(&self.intersection_divisor(den)?);
        debug_assert_eq!(d.degree(), 0);
        if d.degree() != 0 {
            return Err(Error::CertificationFailed("divisor of a function has nonzero degree".into()));
        }
        Ok(d)
    }

    /// Rational points of the curve on the line (or form) `l`.
    pub fn points_on_line(&self, l: &TriPoly) -> Vec<ProjPoint> {
        self.rational_points()
            .iter()
            .filter(|p| l.eval(p.coords()).is_zero())
            .copied()
            .collect()
    }
}
