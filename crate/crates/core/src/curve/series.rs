//! Truncated power series and branch expansions at smooth points.

use crate::algebra::{Fe, Field, TriPoly};
use crate::curve::{CurvePoint, PlaneCurve};
use crate::error::{Error, Result};

pub fn mul_trunc(k: &Field, a: &[Fe], b: &[Fe], n: usize) -> Vec<Fe> {
    let mut out = vec![Fe::ZERO; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] = k.add(out[i + j], k.mul(x, y));
        }
    }
    out
}

/// Inverse of a unit series modulo `s^n`.
pub fn inv_trunc(k: &Field, a: &[Fe], n: usize) -> Vec<Fe> {
    assert!(!a[0].is_zero(), "series is not a unit");
    let a0inv = k.inv(a[0]);
    let mut out = vec![Fe::ZERO; n];
    out[0] = a0inv;
    for m in 1..n {
        let mut acc = Fe::ZERO;
        for i in 1..=m.min(a.len() - 1) {
            acc = k.add(acc, k.mul(a[i], out[m - i]));
        }
        out[m] = k.neg(k.mul(acc, a0inv));
    }
    out
}

fn add_into(k: &Field, acc: &mut [Fe], x: &[Fe], c: Fe) {
    for (a, &b) in acc.iter_mut().zip(x) {
        *a = k.add(*a, k.mul(b, c));
    }
}

/// Polynomial in a dependent variable `y` whose coefficients are polynomials
/// in the parameter `s`: `coef[j][i]` multiplies `s^i y^j`.
#[derive(Clone, Debug)]
pub struct ParamPoly {
    coef: Vec<Vec<Fe>>,
}

impl ParamPoly {
    /// `f` restricted to `x_chart = 1`, `x_param = param0 + s`, `x_dep = y`.
    pub fn from_form(f: &TriPoly, chart: usize, param: usize, dep: usize, param0: Fe) -> Self {
        let k = f.field();
        let max_dep = f.degree_in(dep).unwrap_or(0) as usize;
        let max_par = f.degree_in(param).unwrap_or(0) as usize;
        let binom = shifted_powers(k, param0, max_par);
        let mut coef = vec![vec![Fe::ZERO; max_par + 1]; max_dep + 1];
        for (e, &c) in f.terms() {
            let _ = e[chart];
            add_into(k, &mut coef[e[dep] as usize], &binom[e[param] as usize], c);
        }
        ParamPoly { coef }
    }

    fn eval(&self, k: &Field, y: &[Fe], n: usize) -> Vec<Fe> {
        // Horner in y
        let mut acc = vec![Fe::ZERO; n];
        for c in self.coef.iter().rev() {
            acc = mul_trunc(k, &acc, y, n);
            for (a, &b) in acc.iter_mut().zip(c) {
                *a = k.add(*a, b);
            }
        }
        acc
    }

    fn derivative(&self, k: &Field) -> ParamPoly {
        let coef = self
            .coef
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c.iter().map(|&x| k.mul(x, k.from_i64(j as i64))).collect())
            .collect();
        ParamPoly { coef }
    }

    /// Newton lifting of a simple root `y0` at `s = 0` to a series root
    /// modulo `s^n`.
    pub fn lift_root(&self, k: &Field, y0: Fe, n: usize) -> Vec<Fe> {
        let d = self.derivative(k);
        let mut y = vec![y0];
        let mut prec = 1;
        while prec < n {
            prec = (2 * prec).min(n);
            y.resize(prec, Fe::ZERO);
            let r = self.eval(k, &y, prec);
            let dv = d.eval(k, &y, prec);
            let corr = mul_trunc(k, &r, &inv_trunc(k, &dv, prec), prec);
            for (a, &b) in y.iter_mut().zip(&corr) {
                *a = k.sub(*a, b);
            }
        }
        y.truncate(n.max(1));
        y
    }
}

/// Powers `(a + s)^e` for `e = 0..=max`, as coefficient vectors in `s`.
fn shifted_powers(k: &Field, a: Fe, max: usize) -> Vec<Vec<Fe>> {
    let mut out = vec![vec![Fe::ONE]];
    for e in 1..=max {
        let prev = &out[e - 1];
        let mut next = vec![Fe::ZERO; e + 1];
        for (i, &c) in prev.iter().enumerate() {
            next[i] = k.add(next[i], k.mul(c, a));
            next[i + 1] = k.add(next[i + 1], c);
        }
        out.push(next);
    }
    out
}

/// The unique branch of a curve through a smooth point, parametrized by a
/// coordinate line transverse to the tangent.
#[derive(Clone, Debug)]
pub struct Branch {
    pub point: CurvePoint,
    /// Coordinate set to one.
    pub chart: usize,
    /// Affine coordinate used as local parameter `x_param = param0 + s`.
    pub param: usize,
    /// Affine coordinate expanded as a series in `s`.
    pub dep: usize,
    param0: Fe,
    series: Vec<Fe>,
}

impl Branch {
    pub fn new(curve: &PlaneCurve, p: &CurvePoint, precision: usize) -> Result<Branch> {
        let k = curve.field();
        let x = p.coords();
        if !curve.contains(x) {
            return Err(Error::NotOnCurve(p.render(k)));
        }
        let chart = p.chart();
        let others: Vec<usize> = (0..3).filter(|&i| i != chart).collect();
        let grad: Vec<Fe> = others.iter().map(|&i| curve.form().derivative(i).eval(x)).collect();
        // Prefer the first affine coordinate as parameter (tangent not vertical).
        let (param, dep) = if !grad[1].is_zero() {
            (others[0], others[1])
        } else if !grad[0].is_zero() {
            (others[1], others[0])
        } else {
            return Err(Error::SingularPoint(p.render(k)));
        };
        let pp = ParamPoly::from_form(curve.form(), chart, param, dep, x[param]);
        let series = pp.lift_root(k, x[dep], precision.max(1));
        Ok(Branch { point: *p, chart, param, dep, param0: x[param], series })
    }

    pub fn precision(&self) -> usize {
        self.series.len()
    }

    /// The dependent coordinate as a series.
    pub fn series(&self) -> &[Fe] {
        &self.series
    }

    /// The form `g` evaluated along the branch, modulo `s^precision`.
    pub fn eval_form(&self, k: &Field, g: &TriPoly) -> Vec<Fe> {
        let n = self.precision();
        let max_par = g.degree_in(self.param).unwrap_or(0) as usize;
        let max_dep = g.degree_in(self.dep).unwrap_or(0) as usize;
        let par_pows = shifted_powers(k, self.param0, max_par);
        let mut dep_pows = vec![{
            let mut one = vec![Fe::ZERO; n];
            one[0] = Fe::ONE;
            one
        }];
        for j in 1..=max_dep {
            let next = mul_trunc(k, &dep_pows[j - 1], &self.series, n);
            dep_pows.push(next);
        }
        let mut acc = vec![Fe::ZERO; n];
        for (e, &c) in g.terms() {
            let t = mul_trunc(k, &par_pows[e[self.param] as usize], &dep_pows[e[self.dep] as usize], n);
            add_into(k, &mut acc, &t, c);
        }
        acc
    }
}

/// Order of vanishing of a form at a smooth point, and its leading
/// coefficient with respect to the branch parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalOrder {
    pub order: u32,
    pub lead: Fe,
}

impl PlaneCurve {
    pub fn branch(&self, p: &CurvePoint, precision: usize) -> Result<Branch> {
        Branch::new(self, p, precision)
    }

    /// Order of `g` along the branch at `p`. The precision doubles until the
    /// order resolves, up to the intersection bound `deg C * deg g + 1`.
    pub fn form_order(&self, p: &CurvePoint, g: &TriPoly) -> Result<LocalOrder> {
        let k = self.field();
        if g.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        let deg_g = g.homogeneous_degree()?;
        let cap = (self.degree() * deg_g + 1) as usize;
        let mut prec = 8.min(cap).max(1);
        loop {
            let br = self.branch(p, prec)?;
            let vals = br.eval_form(k, g);
            if let Some(i) = vals.iter().position(|c| !c.is_zero()) {
                return Ok(LocalOrder { order: i as u32, lead: vals[i] });
            }
            if prec >= cap {
                return Err(Error::IdenticallyZero);
            }
            prec = (prec * 2).min(cap);
        }
    }

    /// `v_P(g)` for a form `g` not vanishing on the curve.
    pub fn local_valuation(&self, p: &CurvePoint, g: &TriPoly) -> Result<u32> {
        self.form_order(p, g).map(|o| o.order)
    }
}
