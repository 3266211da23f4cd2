use std::collections::BTreeMap;

use crate::algebra::Field;
use crate::curve::ProjPoint;

/// A finite formal integer combination of points; zero multiplicities are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Divisor {
    terms: BTreeMap<ProjPoint, i64>,
}

impl Divisor {
    pub fn zero() -> Self {
        Divisor::default()
    }

    pub fn point(p: ProjPoint) -> Self {
        Divisor::zero().plus(p, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (ProjPoint, i64)>>(it: I) -> Self {
        let mut d = Divisor::zero();
        for (p, m) in it {
            d.add_point(p, m);
        }
        d
    }

    pub fn add_point(&mut self, p: ProjPoint, m: i64) {
        let e = self.terms.entry(p).or_insert(0);
        *e += m;
        if *e == 0 {
            self.terms.remove(&p);
        }
    }

    pub fn plus(mut self, p: ProjPoint, m: i64) -> Self {
        self.add_point(p, m);
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ProjPoint, &i64)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ProjPoint> {
        self.terms.keys()
    }

    pub fn multiplicity(&self, p: &ProjPoint) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&m| m > 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut d = self.clone();
        for (&p, &m) in &other.terms {
            d.add_point(p, m);
        }
        d
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i64) -> Self {
        Divisor::from_terms(self.terms.iter().map(|(&p, &m)| (p, m * c)))
    }

    pub fn positive_part(&self) -> Self {
        Divisor::from_terms(self.terms.iter().filter(|(_, &m)| m > 0).map(|(&p, &m)| (p, m)))
    }

    pub fn negative_part(&self) -> Self {
        Divisor::from_terms(self.terms.iter().filter(|(_, &m)| m < 0).map(|(&p, &m)| (p, -m)))
    }

    /// Point-wise minimum.
    pub fn min(&self, other: &Self) -> Self {
        let pts: std::collections::BTreeSet<ProjPoint> =
            self.terms.keys().chain(other.terms.keys()).copied().collect();
        Divisor::from_terms(pts.into_iter().map(|p| (p, self.multiplicity(&p).min(other.multiplicity(&p)))))
    }

    /// Maps every point, keeping multiplicities.
    pub fn map_points(&self, mut f: impl FnMut(&ProjPoint) -> ProjPoint) -> Self {
        Divisor::from_terms(self.terms.iter().map(|(p, &m)| (f(p), m)))
    }

    pub fn render(&self, k: &Field) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, &m)| if m == 1 { p.render(k) } else { format!("{m}{}", p.render(k)) })
            .collect();
        parts.join(" + ").replace("+ -", "- ")
    }
}
