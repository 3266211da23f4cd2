use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::field::{Fe, Field};
use crate::algebra::upoly::UniPoly;
use crate::error::{Error, Result};

/// Total degree bound for dense-ish work on forms.
pub const MAX_TOTAL_DEGREE: u32 = 64;

pub type Exps = [u32; 3];

/// Sparse polynomial in three variables `X, Y, Z` (indices 0, 1, 2).
#[derive(Clone, PartialEq, Eq)]
pub struct TriPoly {
    field: Field,
    terms: BTreeMap<Exps, Fe>,
}

impl fmt::Debug for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&["X", "Y", "Z"]))
    }
}

impl TriPoly {
    pub fn zero(field: &Field) -> Self {
        TriPoly { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, c: Fe) -> Self {
        TriPoly::monomial(field, c, [0, 0, 0])
    }

    pub fn one(field: &Field) -> Self {
        TriPoly::constant(field, Fe::ONE)
    }

    pub fn monomial(field: &Field, c: Fe, e: Exps) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        TriPoly { field: field.clone(), terms }
    }

    pub fn var(field: &Field, i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        TriPoly::monomial(field, Fe::ONE, e)
    }

    /// The linear form `a X + b Y + c Z`.
    pub fn linear(field: &Field, coeffs: [Fe; 3]) -> Self {
        let mut p = TriPoly::zero(field);
        for (i, &c) in coeffs.iter().enumerate() {
            let mut e = [0; 3];
            e[i] = 1;
            p.add_term(e, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exps, Fe)>>(field: &Field, terms: I) -> Self {
        let mut p = TriPoly::zero(field);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Fe)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: Exps) -> Fe {
        self.terms.get(&e).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exps, c: Fe) {
        if c.is_zero() {
            return;
        }
        let k = &self.field;
        let entry = self.terms.entry(e).or_insert(Fe::ZERO);
        *entry = k.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e[0] + e[1] + e[2]).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|e| e[0] + e[1] + e[2]);
        match it.next() {
            None => true,
            Some(d) => it.all(|x| x == d),
        }
    }

    /// Degree if homogeneous (zero counts as homogeneous of every degree and
    /// reports 0).
    pub fn homogeneous_degree(&self) -> Result<u32> {
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        Ok(self.total_degree().unwrap_or(0))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, &c) in &other.terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        let k = &self.field;
        for (&e, &c) in &other.terms {
            out.add_term(e, k.neg(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.from_i64(-1))
    }

    pub fn scale(&self, c: Fe) -> Self {
        let k = &self.field;
        if c.is_zero() {
            return TriPoly::zero(k);
        }
        TriPoly {
            field: k.clone(),
            terms: self.terms.iter().map(|(&e, &a)| (e, k.mul(a, c))).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = &self.field;
        let mut terms: BTreeMap<Exps, Fe> = BTreeMap::new();
        for (ea, &a) in &self.terms {
            for (eb, &b) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                let entry = terms.entry(e).or_insert(Fe::ZERO);
                *entry = k.add(*entry, k.mul(a, b));
            }
        }
        terms.retain(|_, c| !c.is_zero());
        TriPoly { field: k.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = TriPoly::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn mul_monomial(&self, c: Fe, m: Exps) -> Self {
        let k = &self.field;
        if c.is_zero() {
            return TriPoly::zero(k);
        }
        TriPoly {
            field: k.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, &a)| ([e[0] + m[0], e[1] + m[1], e[2] + m[2]], k.mul(a, c)))
                .collect(),
        }
    }

    pub fn eval(&self, x: &[Fe; 3]) -> Fe {
        let k = &self.field;
        let mut acc = Fe::ZERO;
        for (e, &c) in &self.terms {
            let t = k.mul(
                c,
                k.mul(k.pow(x[0], e[0] as u64), k.mul(k.pow(x[1], e[1] as u64), k.pow(x[2], e[2] as u64))),
            );
            acc = k.add(acc, t);
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let k = &self.field;
        let mut out = TriPoly::zero(k);
        for (e, &c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = *e;
            ne[var] -= 1;
            out.add_term(ne, k.mul(c, k.from_i64(e[var] as i64)));
        }
        out
    }

    /// Substitutes polynomials for the three variables.
    pub fn compose(&self, subs: [&TriPoly; 3]) -> Self {
        let k = &self.field;
        let mut powers: [Vec<TriPoly>; 3] = [vec![TriPoly::one(k)], vec![TriPoly::one(k)], vec![TriPoly::one(k)]];
        let mut out = TriPoly::zero(k);
        for (e, &c) in &self.terms {
            for v in 0..3 {
                while powers[v].len() <= e[v] as usize {
                    let next = powers[v].last().unwrap().mul(subs[v]);
                    powers[v].push(next);
                }
            }
            let t = powers[0][e[0] as usize]
                .mul(&powers[1][e[1] as usize])
                .mul(&powers[2][e[2] as usize])
                .scale(c);
            out = out.add(&t);
        }
        out
    }

    /// `p(M x)` for a 3x3 matrix `M` acting on column vectors `x = (X, Y, Z)`.
    pub fn compose_linear(&self, m: &[[Fe; 3]; 3]) -> Self {
        let k = &self.field;
        let rows: Vec<TriPoly> = m.iter().map(|r| TriPoly::linear(k, *r)).collect();
        self.compose([&rows[0], &rows[1], &rows[2]])
    }

    /// Coefficients with respect to `var`, lowest power first; each
    /// coefficient is free of `var`.
    pub fn coeffs_in(&self, var: usize) -> Vec<TriPoly> {
        let k = &self.field;
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![TriPoly::zero(k); deg + 1];
        for (e, &c) in &self.terms {
            let mut ne = *e;
            ne[var] = 0;
            out[e[var] as usize].add_term(ne, c);
        }
        out
    }

    pub fn from_coeffs_in(field: &Field, var: usize, coeffs: &[TriPoly]) -> Self {
        let mut out = TriPoly::zero(field);
        for (i, c) in coeffs.iter().enumerate() {
            let mut m = [0; 3];
            m[var] = i as u32;
            out = out.add(&c.mul_monomial(Fe::ONE, m));
        }
        out
    }

    /// Substitutes a constant for one variable.
    pub fn specialize(&self, var: usize, value: Fe) -> Self {
        let k = &self.field;
        let mut out = TriPoly::zero(k);
        for (e, &c) in &self.terms {
            let mut ne = *e;
            ne[var] = 0;
            out.add_term(ne, k.mul(c, k.pow(value, e[var] as u64)));
        }
        out
    }

    /// Univariate polynomial in `var`, valid when no other variable occurs.
    pub fn to_univariate(&self, var: usize) -> Option<UniPoly> {
        let k = &self.field;
        let mut v = vec![Fe::ZERO; self.degree_in(var).unwrap_or(0) as usize + 1];
        for (e, &c) in &self.terms {
            for (j, &x) in e.iter().enumerate() {
                if j != var && x != 0 {
                    return None;
                }
            }
            v[e[var] as usize] = c;
        }
        Some(UniPoly::new(k, v))
    }

    /// Leading term in lexicographic order `X > Y > Z`.
    pub fn leading_term(&self) -> Option<(Exps, Fe)> {
        self.terms.iter().next_back().map(|(&e, &c)| (e, c))
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let k = &self.field;
        let (le, lc) = divisor.leading_term()?;
        let inv = k.inv(lc);
        let mut rem = self.clone();
        let mut quot = TriPoly::zero(k);
        while let Some((e, c)) = rem.leading_term() {
            if e[0] < le[0] || e[1] < le[1] || e[2] < le[2] {
                return None;
            }
            let m = [e[0] - le[0], e[1] - le[1], e[2] - le[2]];
            let q = k.mul(c, inv);
            quot.add_term(m, q);
            rem = rem.sub(&divisor.mul_monomial(q, m));
        }
        Some(quot)
    }

    pub fn render(&self, names: &[&str; 3]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let k = &self.field;
        let mut parts = Vec::new();
        for (e, &c) in self.terms.iter().rev() {
            let mut mono = String::new();
            for v in 0..3 {
                match e[v] {
                    0 => {}
                    1 => mono.push_str(names[v]),
                    n => mono.push_str(&format!("{}^{}", names[v], n)),
                }
            }
            let cs = k.display(c);
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            parts.push(match (mono.is_empty(), c == Fe::ONE) {
                (true, _) => cs,
                (false, true) => mono,
                (false, false) => format!("{cs}*{mono}"),
            });
        }
        parts.join(" + ")
    }
}

/// Remainder of `g` on division by `f` as polynomials in `var`, where `f`
/// must contain the pure power `var^deg f`. The result has `var`-degree below
/// `deg f` and is congruent to `g` modulo `f`.
pub fn normal_form(g: &TriPoly, f: &TriPoly, var: usize) -> Result<TriPoly> {
    let n = f.homogeneous_degree()?;
    let mut pure = [0; 3];
    pure[var] = n;
    let lead = f.coeff(pure);
    if lead.is_zero() || n == 0 {
        return Err(Error::ExtensionRequired(
            "divisor is not monic in the chosen variable".into(),
        ));
    }
    let k = g.field().clone();
    let inv = k.inv(lead);
    // f = lead * var^n + tail, tail of var-degree < n
    let mut tail = f.clone();
    tail.add_term(pure, k.neg(lead));
    let tail = tail.scale(inv);
    let mut rem = g.clone();
    loop {
        let Some((&e, &c)) = rem.terms.iter().filter(|(e, _)| e[var] >= n).max_by_key(|(e, _)| e[var]) else {
            break;
        };
        // c * m * var^n  ==  -c * m * tail
        let mut m = e;
        m[var] -= n;
        rem.add_term(e, k.neg(c));
        rem = rem.sub(&tail.mul_monomial(c, m));
    }
    Ok(rem)
}

/// Sylvester resultant of `a` and `b` with respect to `var`.
pub fn resultant(a: &TriPoly, b: &TriPoly, var: usize) -> Result<TriPoly> {
    let k = a.field().clone();
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if a.is_zero() || b.is_zero() {
        return Ok(TriPoly::zero(&k));
    }
    let m = a.degree_in(var).unwrap_or(0) as usize;
    let n = b.degree_in(var).unwrap_or(0) as usize;
    if m == 0 && n == 0 {
        return Err(Error::VarAbsent(var));
    }
    if m == 0 {
        return Ok(a.pow(n as u32));
    }
    if n == 0 {
        return Ok(b.pow(m as u32));
    }
    let ca = a.coeffs_in(var);
    let cb = b.coeffs_in(var);
    let size = m + n;
    let mut mat = vec![vec![TriPoly::zero(&k); size]; size];
    // rows: n shifted copies of a, then m shifted copies of b; columns are
    // powers of var from high to low
    for r in 0..n {
        for (i, c) in ca.iter().enumerate() {
            mat[r][r + m - i] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in cb.iter().enumerate() {
            mat[n + r][r + n - i] = c.clone();
        }
    }
    Ok(bareiss_det(mat))
}

/// Fraction-free determinant over the polynomial ring.
pub fn bareiss_det(mut mat: Vec<Vec<TriPoly>>) -> TriPoly {
    let n = mat.len();
    let k = mat[0][0].field().clone();
    if n == 0 {
        return TriPoly::one(&k);
    }
    let mut sign_neg = false;
    let mut prev = TriPoly::one(&k);
    for col in 0..n {
        if mat[col][col].is_zero() {
            match (col + 1..n).find(|&r| !mat[r][col].is_zero()) {
                Some(r) => {
                    mat.swap(col, r);
                    sign_neg = !sign_neg;
                }
                None => return TriPoly::zero(&k),
            }
        }
        for i in col + 1..n {
            for j in col + 1..n {
                let t = mat[i][j].mul(&mat[col][col]).sub(&mat[i][col].mul(&mat[col][j]));
                mat[i][j] = t.exact_div(&prev).expect("Bareiss division is exact");
            }
            mat[i][col] = TriPoly::zero(&k);
        }
        prev = mat[col][col].clone();
    }
    let det = mat[n - 1][n - 1].clone();
    if sign_neg {
        det.neg()
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::build_field;

    fn f9() -> Field {
        build_field(3, &[1, 0, 1]).unwrap()
    }

    fn hermitian(k: &Field) -> TriPoly {
        TriPoly::from_terms(
            k,
            [([0, 3, 1], Fe::ONE), ([0, 1, 3], Fe::ONE), ([4, 0, 0], k.from_i64(-1))],
        )
    }

    /// Determinant by cofactor expansion, for small matrices of constants.
    fn cofactor_det(k: &Field, m: &[Vec<Fe>]) -> Fe {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        let mut acc = Fe::ZERO;
        for j in 0..n {
            let minor: Vec<Vec<Fe>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let t = k.mul(m[0][j], cofactor_det(k, &minor));
            acc = if j % 2 == 0 { k.add(acc, t) } else { k.sub(acc, t) };
        }
        acc
    }

    #[test]
    fn resultant_of_hermitian_and_x() {
        let k = f9();
        let f = hermitian(&k);
        let x = TriPoly::var(&k, 0);
        let r = resultant(&f, &x, 0).unwrap();
        let expected = TriPoly::from_terms(&k, [([0, 3, 1], Fe::ONE), ([0, 1, 3], Fe::ONE)]);
        // equal up to sign
        assert!(r == expected || r == expected.neg(), "{r:?}");
        // oracle: Sylvester determinant specialised at sample (y, z)
        for y in k.elements() {
            for z in k.elements().step_by(2) {
                let a = f.specialize(1, y).specialize(2, z).to_univariate(0).unwrap();
                let mut rows = Vec::new();
                let coeffs: Vec<Fe> = (0..=4).rev().map(|i| a.coeff(i)).collect();
                rows.push(vec![coeffs[0], coeffs[1], coeffs[2], coeffs[3], coeffs[4]]);
                for s in 0..4 {
                    let mut row = vec![Fe::ZERO; 5];
                    row[s] = Fe::ONE;
                    rows.push(row);
                }
                let det = cofactor_det(&k, &rows);
                assert_eq!(det, r.eval(&[Fe::ZERO, y, z]));
            }
        }
    }

    #[test]
    fn resultant_linear_pair() {
        let k = f9();
        let a = TriPoly::var(&k, 0).sub(&TriPoly::var(&k, 1));
        let b = TriPoly::var(&k, 0).add(&TriPoly::var(&k, 1));
        let r = resultant(&a, &b, 0).unwrap();
        let two_y = TriPoly::var(&k, 1).scale(k.from_i64(2));
        assert!(r == two_y || r == two_y.neg());
    }

    #[test]
    fn resultant_with_itself_vanishes() {
        let k = f9();
        let f = hermitian(&k);
        assert!(resultant(&f, &f, 0).unwrap().is_zero());
        assert!(resultant(&f, &f, 1).unwrap().is_zero());
    }

    #[test]
    fn resultant_var_absent() {
        let k = f9();
        let y = TriPoly::var(&k, 1);
        assert_eq!(resultant(&y, &y, 0).unwrap_err(), Error::VarAbsent(0));
    }

    #[test]
    fn exact_division() {
        let k = f9();
        let f = hermitian(&k);
        let g = TriPoly::var(&k, 0).add(&TriPoly::var(&k, 2));
        let prod = f.mul(&g);
        assert_eq!(prod.exact_div(&g).unwrap(), f);
        assert!(f.exact_div(&g).is_none());
    }

    #[test]
    fn compose_linear_matches_pointwise() {
        let k = f9();
        let f = hermitian(&k);
        let i = k.gen();
        let m = [[Fe::ONE, Fe::ZERO, Fe::ZERO], [Fe::ZERO, Fe::ONE, Fe::ZERO], [Fe::ZERO, i, Fe::ONE]];
        let g = f.compose_linear(&m);
        assert_eq!(g, f);
    }
}
