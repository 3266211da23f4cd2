use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::field::{Fe, Field};

/// Dense univariate polynomial, coefficients low to high, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly{:?}", self.coeffs.iter().map(|c| c.index()).collect::<Vec<_>>())
    }
}

impl UniPoly {
    pub fn new(field: &Field, mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> Self {
        UniPoly::new(field, Vec::new())
    }

    pub fn constant(field: &Field, c: Fe) -> Self {
        UniPoly::new(field, vec![c])
    }

    /// The monomial `c * x^e`.
    pub fn monomial(field: &Field, c: Fe, e: usize) -> Self {
        let mut v = vec![Fe::ZERO; e + 1];
        v[e] = c;
        UniPoly::new(field, v)
    }

    /// `x - a`.
    pub fn linear(field: &Field, a: Fe) -> Self {
        UniPoly::new(field, vec![field.neg(a), Fe::ONE])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let k = &self.field;
        self.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| k.add(k.mul(acc, x), c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| k.add(self.coeff(i), other.coeff(i))).collect();
        UniPoly::new(k, v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let k = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| k.sub(self.coeff(i), other.coeff(i))).collect();
        UniPoly::new(k, v)
    }

    pub fn scale(&self, c: Fe) -> Self {
        let k = &self.field;
        UniPoly::new(k, self.coeffs.iter().map(|&a| k.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = &self.field;
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(k);
        }
        let mut v = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] = k.add(v[i + j], k.mul(a, b));
            }
        }
        UniPoly::new(k, v)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lead()))
    }

    /// Quotient and remainder. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let k = &self.field;
        let dd = divisor.degree().expect("division by zero polynomial");
        let inv_lead = k.inv(divisor.lead());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(k), self.clone());
        }
        let mut quot = vec![Fe::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = k.mul(rem[i], inv_lead);
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = k.sub(rem[i - dd + j], k.mul(c, b));
            }
        }
        (UniPoly::new(k, quot), UniPoly::new(k, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let k = &self.field;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| k.mul(c, k.from_i64(i as i64)))
            .collect();
        UniPoly::new(k, v)
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let k = &self.field;
        let mut acc = UniPoly::constant(k, Fe::ONE).rem(modulus);
        let mut base = self.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// `x^(q^times) mod modulus`, with `q` the field order.
    fn frobenius_power_of_x(&self, times: u32, modulus: &Self) -> Self {
        let q = self.field.order() as u64;
        let mut h = UniPoly::monomial(&self.field, Fe::ONE, 1).rem(modulus);
        for _ in 0..times {
            h = h.pow_mod(q, modulus);
        }
        h
    }

    fn x(&self) -> Self {
        UniPoly::monomial(&self.field, Fe::ONE, 1)
    }

    /// Rabin's irreducibility test over the coefficient field.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n as u32,
        };
        let f = self.monic();
        let x = self.x();
        if !f.frobenius_power_of_x(n, &f).sub(&x).rem(&f).is_zero() {
            return false;
        }
        let mut m = n;
        let mut primes = Vec::new();
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                primes.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        primes.into_iter().all(|r| {
            let h = f.frobenius_power_of_x(n / r, &f).sub(&x);
            f.gcd(&h).degree() == Some(0)
        })
    }

    /// Roots in the coefficient field with multiplicities, sorted by element
    /// index. Uses `gcd(f, x^q - x)` and equal-degree splitting driven by a
    /// generator seeded with `seed`.
    pub fn roots(&self, seed: u64) -> Vec<(Fe, u32)> {
        assert!(!self.is_zero(), "roots of the zero polynomial");
        let k = &self.field;
        let f = self.monic();
        if f.degree() == Some(0) {
            return Vec::new();
        }
        let x = self.x();
        let xq = x.pow_mod(k.order() as u64, &f);
        let g = f.gcd(&xq.sub(&x));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut linear = Vec::new();
        equal_degree_split(&g, 1, &mut rng, &mut linear);
        let mut out: Vec<(Fe, u32)> = linear
            .into_iter()
            .map(|l| {
                let a = k.neg(l.coeff(0));
                let mut mult = 0;
                let mut rest = f.clone();
                let lin = UniPoly::linear(k, a);
                loop {
                    let (q, r) = rest.div_rem(&lin);
                    if !r.is_zero() {
                        break;
                    }
                    mult += 1;
                    rest = q;
                }
                (a, mult)
            })
            .collect();
        out.sort();
        out
    }

    /// Squarefree decomposition: monic squarefree factors with multiplicities.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, u32)> {
        let k = &self.field;
        let p = k.characteristic();
        let mut out = Vec::new();
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return out;
        }
        let df = f.derivative();
        if df.is_zero() {
            // f = g(x^p)
            let root = self.pth_root_poly(&f);
            for (g, m) in root.squarefree_decomposition() {
                out.push((g, m * p));
            }
            return merge(out);
        }
        let mut c = f.gcd(&df);
        let mut w = f.div_rem(&c).0;
        let mut i = 1;
        while w.degree().unwrap_or(0) > 0 {
            let y = w.gcd(&c);
            let z = w.div_rem(&y).0;
            if z.degree().unwrap_or(0) > 0 {
                out.push((z.monic(), i));
            }
            i += 1;
            w = y;
            c = c.div_rem(&w).0;
        }
        if c.degree().unwrap_or(0) > 0 {
            let root = self.pth_root_poly(&c);
            for (g, m) in root.squarefree_decomposition() {
                out.push((g, m * p));
            }
        }
        merge(out)
    }

    fn pth_root_poly(&self, f: &UniPoly) -> UniPoly {
        let k = &self.field;
        let p = k.characteristic() as usize;
        let v = f
            .coeffs
            .iter()
            .step_by(p)
            .map(|&c| k.pth_root(c))
            .collect();
        UniPoly::new(k, v)
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// together with the leading-coefficient unit.
    pub fn factor(&self, seed: u64) -> (Fe, Vec<(UniPoly, u32)>) {
        assert!(!self.is_zero(), "factor of the zero polynomial");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (sqf, mult) in self.squarefree_decomposition() {
            for (g, d) in distinct_degree(&sqf) {
                let mut parts = Vec::new();
                equal_degree_split(&g, d, &mut rng, &mut parts);
                out.extend(parts.into_iter().map(|f| (f, mult)));
            }
        }
        out.sort_by(|a, b| {
            (a.0.degree(), &a.0.coeffs, a.1).cmp(&(b.0.degree(), &b.0.coeffs, b.1))
        });
        (self.lead(), out)
    }
}

fn merge(mut v: Vec<(UniPoly, u32)>) -> Vec<(UniPoly, u32)> {
    v.sort_by(|a, b| (a.1, &a.0.coeffs).cmp(&(b.1, &b.0.coeffs)));
    v
}

/// Splits a squarefree monic polynomial into (product of degree-d
/// irreducibles, d) pieces.
fn distinct_degree(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let k = f.field();
    let q = k.order() as u64;
    let x = f.x();
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 0;
    while rest.degree().unwrap_or(0) > 0 {
        d += 1;
        if 2 * d > rest.degree().unwrap() as u32 {
            out.push((rest.monic(), rest.degree().unwrap() as u32));
            break;
        }
        h = h.pow_mod(q, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    out
}

/// Cantor–Zassenhaus splitting of a monic squarefree product of degree-`d`
/// irreducibles; pushes the irreducible factors onto `out`.
fn equal_degree_split(f: &UniPoly, d: u32, rng: &mut ChaCha8Rng, out: &mut Vec<UniPoly>) {
    let n = match f.degree() {
        None | Some(0) => return,
        Some(n) => n as u32,
    };
    if n == d {
        out.push(f.monic());
        return;
    }
    let k = f.field().clone();
    let q = k.order() as u64;
    let p = k.characteristic();
    loop {
        let r = UniPoly::new(
            &k,
            (0..n).map(|_| k.from_index(rng.gen_range(0..k.order())).unwrap()).collect(),
        );
        if r.degree().unwrap_or(0) == 0 {
            continue;
        }
        let w = if p == 2 {
            // trace map r + r^2 + ... + r^(2^(kd - 1))
            let bits = k.degree() * d;
            let mut acc = r.rem(f);
            let mut t = acc.clone();
            for _ in 1..bits {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            // r^((q^d - 1)/2) = (r^(1 + q + ... + q^(d-1)))^((q-1)/2)
            let mut norm = r.rem(f);
            let mut t = norm.clone();
            for _ in 1..d {
                t = t.pow_mod(q, f);
                norm = norm.mul(&t).rem(f);
            }
            norm.pow_mod((q - 1) / 2, f).sub(&UniPoly::constant(&k, Fe::ONE))
        };
        let g = f.gcd(&w);
        let gd = g.degree().unwrap_or(0) as u32;
        if gd > 0 && gd < n {
            let h = f.div_rem(&g).0;
            equal_degree_split(&g, d, rng, out);
            equal_degree_split(&h.monic(), d, rng, out);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::build_field;

    fn f9() -> Field {
        build_field(3, &[1, 0, 1]).unwrap()
    }

    fn scan_roots(f: &UniPoly) -> Vec<(Fe, u32)> {
        let k = f.field().clone();
        let mut out = Vec::new();
        for a in k.elements() {
            let mut m = 0;
            let mut g = f.clone();
            while g.eval(a).is_zero() && !g.is_zero() {
                m += 1;
                g = g.div_rem(&UniPoly::linear(&k, a)).0;
            }
            if m > 0 {
                out.push((a, m));
            }
        }
        out
    }

    #[test]
    fn roots_of_b_cubed_plus_b() {
        let k = f9();
        let f = UniPoly::new(&k, vec![Fe::ZERO, Fe::ONE, Fe::ZERO, Fe::ONE]);
        let roots = f.roots(7);
        let i = k.gen();
        let expected = vec![(Fe::ZERO, 1), (i, 1), (k.mul(k.from_i64(2), i), 1)];
        let mut expected = expected;
        expected.sort();
        assert_eq!(roots, expected);
        assert_eq!(roots, scan_roots(&f));
    }

    #[test]
    fn fourth_roots_of_two() {
        let k = f9();
        let f = UniPoly::new(&k, vec![k.from_i64(-2), Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ONE]);
        let roots: Vec<Fe> = f.roots(1).into_iter().map(|r| r.0).collect();
        let i = k.gen();
        let mut expected: Vec<Fe> = [(1, 1), (1, 2), (2, 1), (2, 2)]
            .iter()
            .map(|&(a, b)| k.add(k.from_i64(a), k.mul(k.from_i64(b), i)))
            .collect();
        expected.sort();
        assert_eq!(roots, expected);
    }

    #[test]
    fn no_roots_of_t2_plus_1_over_f3() {
        let k = build_field(3, &[0, 1]).unwrap();
        let f = UniPoly::new(&k, vec![Fe::ONE, Fe::ZERO, Fe::ONE]);
        assert!(f.roots(0).is_empty());
        assert!(f.is_irreducible());
        let (_, fac) = f.factor(0);
        assert_eq!(fac.len(), 1);
        assert_eq!(fac[0].1, 1);
    }

    #[test]
    fn repeated_factor() {
        let k = build_field(3, &[0, 1]).unwrap();
        let l = UniPoly::linear(&k, Fe::ONE);
        let f = l.mul(&l);
        let (_, fac) = f.factor(0);
        assert_eq!(fac, vec![(l, 2)]);
        assert_eq!(f.roots(0), vec![(Fe::ONE, 2)]);
    }

    #[test]
    fn factor_b3_plus_b() {
        let k = f9();
        let f = UniPoly::new(&k, vec![Fe::ZERO, Fe::ONE, Fe::ZERO, Fe::ONE]);
        let (unit, fac) = f.factor(3);
        assert_eq!(unit, Fe::ONE);
        assert_eq!(fac.len(), 3);
        let prod = fac.iter().fold(UniPoly::constant(&k, unit), |acc, (g, m)| {
            (0..*m).fold(acc, |a, _| a.mul(g))
        });
        assert_eq!(prod, f);
    }

    #[test]
    fn factor_char_two_and_pth_powers() {
        let k = build_field(2, &[1, 1, 0, 1]).unwrap();
        // (x^2 + x + 1)^2 * x^3 * (x + 1)
        let a = UniPoly::new(&k, vec![Fe::ONE, Fe::ONE, Fe::ONE]);
        let f = a.mul(&a).mul(&UniPoly::monomial(&k, Fe::ONE, 3)).mul(&UniPoly::linear(&k, Fe::ONE));
        let (unit, fac) = f.factor(11);
        let prod = fac.iter().fold(UniPoly::constant(&k, unit), |acc, (g, m)| {
            (0..*m).fold(acc, |a, _| a.mul(g))
        });
        assert_eq!(prod, f);
        for (g, _) in &fac {
            assert!(g.is_irreducible());
        }
    }
}
