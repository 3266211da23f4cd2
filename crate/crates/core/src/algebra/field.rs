use std::fmt;
use std::sync::Arc;

use crate::algebra::upoly::UniPoly;
use crate::error::{Error, Result};

/// Largest field order for which log/exp/Zech tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

/// A field element, stored as the index `sum c_i p^i` of its coordinate
/// vector `(c_0, .., c_{d-1})` in the power basis of the modulus.
///
/// Elements carry no reference to their field; all arithmetic goes through
/// [`Field`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

const NO_ZECH: u32 = u32::MAX;

struct FieldData {
    p: u32,
    degree: u32,
    modulus: Vec<u32>,
    order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg_one_log: u32,
}

/// A finite field `F_p[t]/(m(t))` with precomputed discrete-log tables.
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.degree, self.0.modulus)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Builds `F_p[t]/(modulus)`. The modulus is given low-to-high and must be
/// monic and irreducible over `F_p`.
pub fn build_field(p: u64, modulus: &[u32]) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > u16::MAX as u64 {
        return Err(Error::FieldTooLarge(p));
    }
    let p32 = p as u32;
    let modulus: Vec<u32> = modulus.iter().map(|&c| c % p32).collect();
    if modulus.len() < 2 {
        return Err(Error::InvalidField("modulus must have degree at least 1".into()));
    }
    if *modulus.last().unwrap() != 1 {
        return Err(Error::InvalidField("modulus must be monic".into()));
    }
    let degree = (modulus.len() - 1) as u32;
    if degree > 1 {
        let base = prime_field(p32)?;
        let m = UniPoly::new(&base, modulus.iter().map(|&c| Fe(c)).collect());
        if !m.is_irreducible() {
            return Err(Error::ReducibleModulus(p32));
        }
    }
    build_unchecked(p32, modulus)
}

/// The prime field `F_p`, presented with modulus `t`.
pub fn prime_field(p: u32) -> Result<Field> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    build_unchecked(p, vec![0, 1])
}

fn build_unchecked(p: u32, modulus: Vec<u32>) -> Result<Field> {
    let degree = (modulus.len() - 1) as u32;
    let order64 = (p as u64).checked_pow(degree).unwrap_or(u64::MAX);
    if order64 > MAX_FIELD_ORDER {
        return Err(Error::FieldTooLarge(order64));
    }
    let order = order64 as u32;
    let d = degree as usize;

    let to_digits = |mut idx: u32| -> Vec<u32> {
        let mut v = vec![0u32; d];
        for c in v.iter_mut() {
            *c = idx % p;
            idx /= p;
        }
        v
    };
    let from_digits = |v: &[u32]| -> u32 { v.iter().rev().fold(0u32, |acc, &c| acc * p + c) };
    let mulmod = |a: &[u32], b: &[u32]| -> Vec<u32> {
        let mut prod = vec![0u64; 2 * d];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        for k in (d..2 * d).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (j, &mj) in modulus[..d].iter().enumerate() {
                let sub = c * mj as u64 % p as u64;
                prod[k - d + j] = (prod[k - d + j] + p as u64 - sub) % p as u64;
            }
        }
        prod[..d].iter().map(|&c| c as u32).collect()
    };
    let powmod = |base: &[u32], mut e: u64| -> Vec<u32> {
        let mut acc = to_digits(1);
        let mut b = base.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &b);
            }
            b = mulmod(&b, &b);
            e >>= 1;
        }
        acc
    };

    let group = (order - 1) as u64;
    let primes = prime_factors(group);
    let mut generator = None;
    for cand in 1..order {
        let digits = to_digits(cand);
        if primes.iter().all(|&r| from_digits(&powmod(&digits, group / r)) != 1) {
            generator = Some(digits);
            break;
        }
    }
    let generator = generator.ok_or_else(|| Error::InvalidField("no primitive element".into()))?;

    let mut exp = vec![0u32; group.max(1) as usize];
    let mut log = vec![0u32; order as usize];
    let mut cur = to_digits(1);
    for k in 0..group as usize {
        let idx = from_digits(&cur);
        exp[k] = idx;
        log[idx as usize] = k as u32;
        cur = mulmod(&cur, &generator);
    }
    let mut zech = vec![NO_ZECH; group.max(1) as usize];
    for k in 0..group as usize {
        let mut digits = to_digits(exp[k]);
        digits[0] = (digits[0] + 1) % p;
        let s = from_digits(&digits);
        if s != 0 {
            zech[k] = log[s as usize];
        }
    }
    let neg_one_log = if p == 2 { 0 } else { (group / 2) as u32 };
    Ok(Field(Arc::new(FieldData {
        p,
        degree,
        modulus,
        order,
        exp,
        log,
        zech,
        neg_one_log,
    })))
}

impl Field {
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.order).map(Fe)
    }

    pub fn from_index(&self, idx: u32) -> Result<Fe> {
        if idx < self.0.order {
            Ok(Fe(idx))
        } else {
            Err(Error::InvalidField(format!("index {idx} out of range")))
        }
    }

    /// The image of the integer `n` in the prime subfield.
    pub fn from_i64(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// The generator `t` of the power basis.
    pub fn gen(&self) -> Fe {
        if self.0.degree == 1 {
            self.neg(Fe(self.0.modulus[0]))
        } else {
            Fe(self.0.p)
        }
    }

    pub fn coords(&self, a: Fe) -> Vec<u32> {
        let p = self.0.p;
        let mut idx = a.0;
        (0..self.0.degree)
            .map(|_| {
                let c = idx % p;
                idx /= p;
                c
            })
            .collect()
    }

    /// Element with the given little-endian coordinates; shorter vectors are
    /// zero-padded.
    pub fn from_coords(&self, coords: &[u32]) -> Result<Fe> {
        if coords.len() > self.0.degree as usize {
            return Err(Error::InvalidField(format!(
                "coordinate vector of length {} for a degree-{} field",
                coords.len(),
                self.0.degree
            )));
        }
        if let Some(&c) = coords.iter().find(|&&c| c >= self.0.p) {
            return Err(Error::InvalidField(format!("coordinate {c} not reduced mod {}", self.0.p)));
        }
        Ok(Fe(coords.iter().rev().fold(0u32, |acc, &c| acc * self.0.p + c)))
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let d = &self.0;
        let group = d.order - 1;
        let la = d.log[a.0 as usize];
        let lb = d.log[b.0 as usize];
        let k = (lb + group - la) % group;
        let z = d.zech[k as usize];
        if z == NO_ZECH {
            Fe::ZERO
        } else {
            Fe(d.exp[((la as u64 + z as u64) % group as u64) as usize])
        }
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if a.0 == 0 {
            return a;
        }
        let d = &self.0;
        let group = d.order - 1;
        Fe(d.exp[((d.log[a.0 as usize] + d.neg_one_log) % group) as usize])
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let d = &self.0;
        let group = (d.order - 1) as u64;
        let s = (d.log[a.0 as usize] as u64 + d.log[b.0 as usize] as u64) % group;
        Fe(d.exp[s as usize])
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero");
        let d = &self.0;
        let group = d.order - 1;
        Fe(d.exp[((group - d.log[a.0 as usize]) % group) as usize])
    }

    pub fn try_inv(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            None
        } else {
            Some(self.inv(a))
        }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let d = &self.0;
        let group = (d.order - 1) as u64;
        let s = (d.log[a.0 as usize] as u64 * (e % group)) % group;
        Fe(d.exp[s as usize])
    }

    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.0.p as u64)
    }

    /// The unique `p`-th root.
    pub fn pth_root(&self, a: Fe) -> Fe {
        self.pow(a, (self.0.order / self.0.p) as u64)
    }

    pub fn sum<I: IntoIterator<Item = Fe>>(&self, it: I) -> Fe {
        it.into_iter().fold(Fe::ZERO, |acc, x| self.add(acc, x))
    }

    pub fn contains(&self, a: Fe) -> bool {
        a.0 < self.0.order
    }

    /// Human-readable rendering as a polynomial in `t`.
    pub fn display(&self, a: Fe) -> String {
        let coords = self.coords(a);
        let mut parts = Vec::new();
        for (i, &c) in coords.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}t^{i}"),
            };
            parts.push(part);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// A degree-`m` extension of this field, with the embedding of this field
    /// into it. The extension is presented by the first irreducible modulus of
    /// degree `m * degree()` over `F_p` in index order.
    pub fn extension(&self, m: u32) -> Result<(Field, Embedding)> {
        if m == 0 {
            return Err(Error::InvalidField("extension degree 0".into()));
        }
        if m == 1 {
            return Ok((self.clone(), Embedding::identity(self)));
        }
        let p = self.0.p;
        let big_degree = self.0.degree * m;
        let big_order = (p as u64).checked_pow(big_degree).unwrap_or(u64::MAX);
        if big_order > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge(big_order));
        }
        let base = prime_field(p)?;
        let count = (p as u64).pow(big_degree);
        for idx in 0..count {
            let mut coeffs = Vec::with_capacity(big_degree as usize + 1);
            let mut r = idx;
            for _ in 0..big_degree {
                coeffs.push((r % p as u64) as u32);
                r /= p as u64;
            }
            coeffs.push(1);
            if coeffs[0] == 0 {
                continue;
            }
            let poly = UniPoly::new(&base, coeffs.iter().map(|&c| Fe(c)).collect());
            if poly.is_irreducible() {
                let big = build_unchecked(p, coeffs)?;
                let emb = Embedding::new(self, &big)?;
                return Ok((big, emb));
            }
        }
        Err(Error::InvalidField("no irreducible modulus found".into()))
    }
}

/// A field homomorphism `K -> L` determined by the image of the generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    table: Vec<Fe>,
}

impl Embedding {
    pub fn identity(k: &Field) -> Self {
        Embedding {
            source: k.clone(),
            target: k.clone(),
            table: k.elements().collect(),
        }
    }

    /// Embeds `source` into `target` by sending `t` to the smallest root of
    /// the source modulus in `target`.
    pub fn new(source: &Field, target: &Field) -> Result<Self> {
        if source.characteristic() != target.characteristic()
            || target.degree() % source.degree() != 0
        {
            return Err(Error::FieldMismatch);
        }
        if source == target {
            return Ok(Embedding::identity(source));
        }
        let m = UniPoly::new(
            target,
            source.modulus().iter().map(|&c| target.from_i64(c as i64)).collect(),
        );
        let roots = m.roots(0);
        let root = roots.first().map(|r| r.0).ok_or(Error::FieldMismatch)?;
        let p = source.characteristic();
        let mut table = Vec::with_capacity(source.order() as usize);
        for a in source.elements() {
            let coords = source.coords(a);
            let mut acc = Fe::ZERO;
            for &c in coords.iter().rev() {
                acc = target.add(target.mul(acc, root), target.from_i64((c % p) as i64));
            }
            table.push(acc);
        }
        Ok(Embedding {
            source: source.clone(),
            target: target.clone(),
            table,
        })
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn apply(&self, a: Fe) -> Fe {
        self.table[a.index() as usize]
    }

    /// Preimage of `b`, if it lies in the image.
    pub fn preimage(&self, b: Fe) -> Option<Fe> {
        self.table.iter().position(|&x| x == b).map(|i| Fe(i as u32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Field {
        build_field(3, &[1, 0, 1]).unwrap()
    }

    #[test]
    fn builds_f9_with_i_squared_minus_one() {
        let k = f9();
        assert_eq!(k.order(), 9);
        let i = k.gen();
        assert_eq!(k.coords(i), vec![0, 1]);
        assert_eq!(k.mul(i, i), k.from_i64(-1));
        assert_eq!(k.mul(i, i), k.from_i64(2));
    }

    #[test]
    fn rejects_reducible_and_nonprime() {
        assert_eq!(build_field(3, &[2, 0, 1]).unwrap_err(), Error::ReducibleModulus(3));
        assert_eq!(build_field(4, &[1, 1]).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(build_field(3, &[1, 0, 2]), Err(Error::InvalidField(_))));
    }

    #[test]
    fn builds_f8() {
        let k = build_field(2, &[1, 1, 0, 1]).unwrap();
        assert_eq!(k.order(), 8);
        for a in k.elements().skip(1) {
            assert_eq!(k.mul(a, k.inv(a)), Fe::ONE);
            assert_eq!(k.add(a, a), Fe::ZERO);
        }
    }

    #[test]
    fn coordinates_roundtrip() {
        let k = f9();
        for a in k.elements() {
            assert_eq!(k.from_coords(&k.coords(a)).unwrap(), a);
        }
        // 2i + 1 <-> [1, 2]
        let e = k.from_coords(&[1, 2]).unwrap();
        assert_eq!(e, k.add(k.one(), k.mul(k.from_i64(2), k.gen())));
    }

    #[test]
    fn addition_matches_digitwise() {
        let k = build_field(3, &[1, 2, 0, 1]).unwrap(); // t^3 + 2t + 1
        for a in k.elements() {
            for b in k.elements() {
                let ca = k.coords(a);
                let cb = k.coords(b);
                let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % 3).collect();
                assert_eq!(k.add(a, b), k.from_coords(&s).unwrap());
            }
        }
    }

    #[test]
    fn embedding_f9_into_f81() {
        let k = f9();
        let (big, emb) = k.extension(2).unwrap();
        assert_eq!(big.order(), 81);
        for a in k.elements() {
            for b in k.elements() {
                assert_eq!(emb.apply(k.mul(a, b)), big.mul(emb.apply(a), emb.apply(b)));
                assert_eq!(emb.apply(k.add(a, b)), big.add(emb.apply(a), emb.apply(b)));
            }
        }
        assert_eq!(emb.preimage(emb.apply(k.gen())), Some(k.gen()));
    }
}
