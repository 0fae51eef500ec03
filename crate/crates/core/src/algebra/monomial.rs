//! Exponent vectors and graded monomial orders.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Dense exponent vector, one entry per ring variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut m = Monomial::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Monomial {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// Total (unweighted) degree.
    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// True when the two monomials share no variable.
    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Compact bit signature: bit `i` set when variable `i` occurs.
    pub(crate) fn support_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .fold(0u64, |acc, (i, _)| acc | (1 << (i % 64)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderKind {
    DegRevLex,
    DegLex,
}

/// A graded monomial order: weighted degree first, then lex or reverse lex
/// along a variable priority permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    /// Variable indices from highest to lowest priority.
    pub priority: Vec<usize>,
    /// Degree of each variable (all 1 for the standard grading).
    pub weights: Vec<u32>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, nvars: usize) -> MonomialOrder {
        MonomialOrder {
            kind,
            priority: (0..nvars).collect(),
            weights: vec![1; nvars],
        }
    }

    pub fn degrevlex(nvars: usize) -> MonomialOrder {
        Self::new(OrderKind::DegRevLex, nvars)
    }

    pub fn deglex(nvars: usize) -> MonomialOrder {
        Self::new(OrderKind::DegLex, nvars)
    }

    pub fn with_weights(mut self, weights: Vec<u32>) -> MonomialOrder {
        assert_eq!(weights.len(), self.priority.len());
        assert!(weights.iter().all(|&w| w > 0), "variable degrees must be positive");
        self.weights = weights;
        self
    }

    pub fn with_priority(mut self, priority: Vec<usize>) -> MonomialOrder {
        let mut sorted = priority.clone();
        sorted.sort_unstable();
        assert!(sorted.iter().copied().eq(0..self.priority.len()), "priority must be a permutation");
        self.priority = priority;
        self
    }

    pub fn nvars(&self) -> usize {
        self.priority.len()
    }

    pub fn degree(&self, m: &Monomial) -> i32 {
        m.0.iter().zip(&self.weights).map(|(&e, &w)| e as i32 * w as i32).sum()
    }

    /// Compares two monomials of the same length; panics otherwise.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let by_degree = self.degree(a).cmp(&self.degree(b));
        if by_degree != Ordering::Equal {
            return by_degree;
        }
        match self.kind {
            OrderKind::DegLex => {
                for &v in &self.priority {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            OrderKind::DegRevLex => {
                for &v in self.priority.iter().rev() {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// Checked comparison of two monomials under `ord`.
pub fn compare(m1: &Monomial, m2: &Monomial, ord: &MonomialOrder) -> Result<Ordering> {
    if m1.nvars() != m2.nvars() {
        return Err(Error::LengthMismatch(m1.nvars(), m2.nvars()));
    }
    if m1.nvars() != ord.nvars() {
        return Err(Error::LengthMismatch(m1.nvars(), ord.nvars()));
    }
    Ok(ord.cmp(m1, m2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn degrevlex_prefers_first_variable() {
        let ord = MonomialOrder::degrevlex(2);
        assert_eq!(compare(&m(&[1, 0]), &m(&[0, 1]), &ord).unwrap(), Ordering::Greater);
        assert_eq!(compare(&m(&[1, 0]), &m(&[1, 0]), &ord).unwrap(), Ordering::Equal);
    }

    #[test]
    fn deglex_orders_squares_first() {
        let ord = MonomialOrder::deglex(2);
        assert_eq!(ord.cmp(&m(&[2, 0]), &m(&[1, 1])), Ordering::Greater);
    }

    #[test]
    fn revlex_and_lex_differ_in_three_variables() {
        // lex: xz > y^2, revlex: y^2 > xz
        let lex = MonomialOrder::deglex(3);
        let rev = MonomialOrder::degrevlex(3);
        let xz = m(&[1, 0, 1]);
        let yy = m(&[0, 2, 0]);
        assert_eq!(lex.cmp(&xz, &yy), Ordering::Greater);
        assert_eq!(rev.cmp(&xz, &yy), Ordering::Less);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let ord = MonomialOrder::degrevlex(2);
        assert!(matches!(compare(&m(&[1]), &m(&[1, 0]), &ord), Err(Error::LengthMismatch(1, 2))));
    }

    #[test]
    fn weights_change_the_grading() {
        let ord = MonomialOrder::degrevlex(2).with_weights(vec![1, 3]);
        assert_eq!(ord.degree(&m(&[1, 1])), 4);
        assert_eq!(ord.cmp(&m(&[0, 1]), &m(&[2, 0])), Ordering::Greater);
    }

    #[test]
    fn priority_permutation_swaps_roles() {
        let ord = MonomialOrder::deglex(2).with_priority(vec![1, 0]);
        assert_eq!(ord.cmp(&m(&[0, 1]), &m(&[1, 0])), Ordering::Greater);
    }
}
