//! Sparse vectors in a graded free module over the polynomial ring, ordered
//! position-over-term (a lower component index dominates).

use std::cmp::Ordering;

use crate::algebra::{Field, Monomial, MonomialOrder, Poly, Scalar};

pub type MTerm = (usize, Monomial, Scalar);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MVec {
    pub(crate) terms: Vec<MTerm>,
}

pub(crate) fn cmp_pos(ord: &MonomialOrder, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
    match b.0.cmp(&a.0) {
        Ordering::Equal => ord.cmp(a.1, b.1),
        o => o,
    }
}

impl MVec {
    pub fn zero() -> MVec {
        MVec { terms: Vec::new() }
    }

    /// Packs polynomial entries `entries[i]` into components `offset + i`.
    pub fn from_polys(entries: &[Poly], offset: usize) -> MVec {
        let mut terms = Vec::new();
        for (i, p) in entries.iter().enumerate() {
            for (m, c) in p.terms() {
                terms.push((offset + i, m.clone(), c.clone()));
            }
        }
        MVec { terms }
    }

    pub fn single(comp: usize, p: &Poly) -> MVec {
        MVec::from_polys(std::slice::from_ref(p), comp)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&MTerm> {
        self.terms.first()
    }

    pub fn lead_comp(&self) -> Option<usize> {
        self.terms.first().map(|t| t.0)
    }

    pub fn terms(&self) -> &[MTerm] {
        &self.terms
    }

    /// Unpacks components `[lo, hi)` into polynomials.
    pub fn to_polys(&self, field: Field, nvars: usize, lo: usize, hi: usize) -> Vec<Poly> {
        let mut buckets: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); hi - lo];
        for (c, m, s) in &self.terms {
            if (lo..hi).contains(c) {
                buckets[c - lo].push((m.clone(), s.clone()));
            }
        }
        buckets.into_iter().map(|t| Poly::from_sorted(field, nvars, t)).collect()
    }

    /// Largest term degree, counting component twists.
    pub fn max_degree(&self, ord: &MonomialOrder, twists: &[i32]) -> i32 {
        self.terms.iter().map(|(c, m, _)| ord.degree(m) + twists[*c]).max().unwrap_or(i32::MIN)
    }

    pub fn scale(&self, c: &Scalar) -> MVec {
        MVec { terms: self.terms.iter().map(|(i, m, d)| (*i, m.clone(), d.mul(c))).collect() }
    }

    pub fn monic(&self) -> MVec {
        match self.lead() {
            Some((_, _, c)) if !c.is_one() => self.scale(&c.inv().expect("nonzero")),
            _ => self.clone(),
        }
    }

    /// `self + c*m*other`, merging in one pass.
    pub fn add_scaled(&self, other: &MVec, m: &Monomial, c: &Scalar, ord: &MonomialOrder) -> MVec {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().map(|(i, n, d)| (*i, n.mul(m), d.mul(c))).peekable();
        loop {
            let ord_ab = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some(x), Some(y)) => cmp_pos(ord, (x.0, &x.1), (y.0, &y.1)),
            };
            match ord_ab {
                Ordering::Greater => out.push(a.next().unwrap().clone()),
                Ordering::Less => out.push(b.next().unwrap()),
                Ordering::Equal => {
                    let (i, n, d) = a.next().unwrap().clone();
                    let (_, _, e) = b.next().unwrap();
                    let s = d.add(&e);
                    if !s.is_zero() {
                        out.push((i, n, s));
                    }
                }
            }
        }
        MVec { terms: out }
    }

    pub fn sort(&mut self, ord: &MonomialOrder) {
        self.terms.sort_by(|a, b| cmp_pos(ord, (b.0, &b.1), (a.0, &a.1)));
    }
}
