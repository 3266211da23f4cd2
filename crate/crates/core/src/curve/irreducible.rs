//! Irreducibility of a plane curve by recombination of branch series.
//!
//! The form is assumed monic in `X`. At `Z = 1`, `Y = y0 + s` with `f(X, y0)`
//! squarefree, every factor over the algebraic closure is a product of
//! `X - r_i(s)` for a subset of the Newton-lifted roots, and its coefficients
//! live in the field generated by the roots `r_i(0)`. Candidate subsets are
//! truncated, homogenized and confirmed by exact division.

use crate::algebra::{Embedding, Fe, Field, TriPoly, UniPoly};
use crate::curve::series::{mul_trunc, ParamPoly};
use crate::error::{Error, Result};

/// Largest degree for which all root subsets are tried.
const MAX_SUBSET_DEGREE: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    /// Irreducible over every extension of the base field.
    Absolute,
    /// Irreducible over the base field, but splits over an extension.
    OverBaseOnly,
    /// Irreducible over the base field as far as the check could certify;
    /// absolute irreducibility was not decided.
    Probable,
}

impl Irreducibility {
    pub fn as_str(&self) -> &'static str {
        match self {
            Irreducibility::Absolute => "absolute",
            Irreducibility::OverBaseOnly => "over-base-only",
            Irreducibility::Probable => "probable",
        }
    }
}

pub(crate) fn check(sheared: &TriPoly) -> Result<Irreducibility> {
    let k = sheared.field().clone();
    let n = sheared.homogeneous_degree()?;
    let Some(y0) = squarefree_fiber(sheared) else {
        return Ok(Irreducibility::Probable);
    };
    let fiber = fiber_poly(sheared, y0);
    let (_, factors) = fiber.factor(0);
    let split_degree = factors
        .iter()
        .map(|(g, _)| g.degree().unwrap() as u32)
        .fold(1, lcm);
    let Ok((big, emb)) = k.extension(split_degree) else {
        return Ok(Irreducibility::Probable);
    };
    let f_big = embed_form(sheared, &emb);
    let y0_big = emb.apply(y0);
    // roots grouped by their irreducible factor over the base field
    let mut orbits: Vec<Vec<Fe>> = Vec::new();
    for (g, _) in &factors {
        let g_big = UniPoly::new(&big, g.coeffs().iter().map(|&c| emb.apply(c)).collect());
        orbits.push(g_big.roots(0).into_iter().map(|(r, _)| r).collect());
    }
    let prec = n as usize + 1;
    let pp = ParamPoly::from_form(&f_big, 2, 1, 0, y0_big);
    let lifted: Vec<Vec<Vec<Fe>>> = orbits
        .iter()
        .map(|o| o.iter().map(|&r| pp.lift_root(&big, r, prec)).collect())
        .collect();
    let ctx = Recombine { k: &big, f: &f_big, y0: y0_big, prec };

    // factors over the base field: unions of orbits
    let m = orbits.len();
    if m > 1 {
        if m > 20 {
            return Ok(Irreducibility::Probable);
        }
        for mask in 1u32..(1 << m) - 1 {
            let roots: Vec<&Vec<Fe>> = (0..m)
                .filter(|i| mask & (1 << i) != 0)
                .flat_map(|i| lifted[i].iter())
                .collect();
            if roots.len() as u32 * 2 > n {
                continue;
            }
            if let Some(g) = ctx.try_subset(&roots) {
                let base = pull_back(&g, &emb, &k).expect("orbit unions are defined over the base field");
                return Err(Error::Reducible(format!(
                    "factor {}",
                    base.render(&["X", "Y", "Z"])
                )));
            }
        }
    }
    if split_degree == 1 {
        // every root is rational, so the orbit unions covered all subsets
        return Ok(Irreducibility::Absolute);
    }
    if n > MAX_SUBSET_DEGREE {
        return Ok(Irreducibility::Probable);
    }
    let all: Vec<&Vec<Fe>> = lifted.iter().flatten().collect();
    let total = all.len();
    for mask in 1u32..(1 << total) - 1 {
        if mask.count_ones() * 2 > n {
            continue;
        }
        let roots: Vec<&Vec<Fe>> = (0..total).filter(|i| mask & (1 << i) != 0).map(|i| all[i]).collect();
        if ctx.try_subset(&roots).is_some() {
            return Ok(Irreducibility::OverBaseOnly);
        }
    }
    Ok(Irreducibility::Absolute)
}

fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

fn fiber_poly(f: &TriPoly, y0: Fe) -> UniPoly {
    let k = f.field();
    f.specialize(1, y0)
        .specialize(2, Fe::ONE)
        .to_univariate(0)
        .unwrap_or_else(|| UniPoly::zero(k))
}

fn squarefree_fiber(f: &TriPoly) -> Option<Fe> {
    let k = f.field();
    k.elements().find(|&y| {
        let g = fiber_poly(f, y);
        let dg = g.derivative();
        !g.is_zero() && !dg.is_zero() && g.gcd(&dg).degree() == Some(0)
    })
}

fn embed_form(f: &TriPoly, emb: &Embedding) -> TriPoly {
    TriPoly::from_terms(emb.target(), f.terms().map(|(&e, &c)| (e, emb.apply(c))))
}

fn pull_back(g: &TriPoly, emb: &Embedding, k: &Field) -> Option<TriPoly> {
    let mut terms = Vec::new();
    for (&e, &c) in g.terms() {
        terms.push((e, emb.preimage(c)?));
    }
    Some(TriPoly::from_terms(k, terms))
}

struct Recombine<'a> {
    k: &'a Field,
    f: &'a TriPoly,
    y0: Fe,
    prec: usize,
}

impl Recombine<'_> {
    /// The factor `prod (X - r_i)` if it is a polynomial factor of `f`.
    fn try_subset(&self, roots: &[&Vec<Fe>]) -> Option<TriPoly> {
        let k = self.k;
        let e = roots.len();
        // cheap filter: the sum of roots must have degree <= 1 in s
        let mut sum = vec![Fe::ZERO; self.prec];
        for r in roots {
            for (a, &b) in sum.iter_mut().zip(r.iter()) {
                *a = k.add(*a, b);
            }
        }
        if sum.iter().skip(2).any(|c| !c.is_zero()) {
            return None;
        }
        // coefficients of X^j as series in s, j = 0..=e
        let mut poly: Vec<Vec<Fe>> = vec![{
            let mut one = vec![Fe::ZERO; self.prec];
            one[0] = Fe::ONE;
            one
        }];
        for r in roots {
            let neg: Vec<Fe> = r.iter().map(|&c| k.neg(c)).collect();
            let mut next = vec![vec![Fe::ZERO; self.prec]; poly.len() + 1];
            for (j, c) in poly.iter().enumerate() {
                for (a, &b) in next[j + 1].iter_mut().zip(c) {
                    *a = k.add(*a, b);
                }
                let t = mul_trunc(k, c, &neg, self.prec);
                for (a, &b) in next[j].iter_mut().zip(&t) {
                    *a = k.add(*a, b);
                }
            }
            poly = next;
        }
        // homogenize with s = Y - y0 Z; coefficient of X^j has degree <= e - j
        let shift = TriPoly::linear(k, [Fe::ZERO, Fe::ONE, k.neg(self.y0)]);
        let mut shift_pows = vec![TriPoly::one(k)];
        for i in 1..=e {
            shift_pows.push(shift_pows[i - 1].mul(&shift));
        }
        let mut g = TriPoly::zero(k);
        for (j, c) in poly.iter().enumerate() {
            for (i, &ci) in c.iter().enumerate() {
                if ci.is_zero() {
                    continue;
                }
                if i + j > e {
                    return None;
                }
                let z = (e - j - i) as u32;
                g = g.add(&shift_pows[i].mul_monomial(ci, [j as u32, 0, z]));
            }
        }
        self.f.exact_div(&g).map(|_| g)
    }
}
