//! Sparse multivariate polynomials and the polynomial ring descriptor.

use std::cmp::Ordering;
use std::fmt;

use crate::algebra::monomial::{Monomial, MonomialOrder};
use crate::algebra::scalar::{Field, Scalar};
use crate::error::{Error, Result};

pub type Term = (Monomial, Scalar);

/// A polynomial as a list of terms sorted strictly descending in the
/// ambient monomial order, with no zero coefficients.
/// A polynomial whose terms have different degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MixedDegrees;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    nvars: usize,
    terms: Vec<Term>,
}

impl Poly {
    pub fn zero(field: Field, nvars: usize) -> Poly {
        Poly { field, nvars, terms: Vec::new() }
    }

    pub fn constant(field: Field, nvars: usize, c: Scalar) -> Poly {
        Poly::term(field, Monomial::one(nvars), c)
    }

    pub fn term(field: Field, m: Monomial, c: Scalar) -> Poly {
        let nvars = m.nvars();
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Poly { field, nvars, terms }
    }

    /// Builds a polynomial from arbitrary terms: sorts, merges duplicates and
    /// drops zeros.
    pub fn from_terms(field: Field, nvars: usize, mut terms: Vec<Term>, ord: &MonomialOrder) -> Poly {
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.add(&c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { field, nvars, terms: out }
    }

    /// Trusts the caller that `terms` is already canonical.
    pub(crate) fn from_sorted(field: Field, nvars: usize, terms: Vec<Term>) -> Poly {
        Poly { field, nvars, terms }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub(crate) fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Coefficient of the monomial 1.
    pub fn constant_coeff(&self) -> Scalar {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => self.field.zero(),
        }
    }

    /// True for zero and for nonzero scalars.
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// `Some(d)` when every term has weighted degree `d`; `None` for zero.
    /// `Err(MixedDegrees)` when the polynomial mixes degrees.
    pub fn homogeneous_degree(&self, ord: &MonomialOrder) -> std::result::Result<Option<i32>, MixedDegrees> {
        let mut deg = None;
        for (m, _) in &self.terms {
            let d = ord.degree(m);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return Err(MixedDegrees),
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn is_homogeneous(&self, ord: &MonomialOrder) -> bool {
        self.homogeneous_degree(ord).is_ok()
    }

    pub fn neg(&self) -> Poly {
        Poly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.field, self.nvars);
        }
        Poly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d.mul(c))).collect(),
        }
    }

    /// Multiplication by `c * m`; the order is multiplicative so sorting is kept.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.field, self.nvars);
        }
        Poly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), d.mul(c))).collect(),
        }
    }

    pub fn add(&self, other: &Poly, ord: &MonomialOrder) -> Poly {
        self.add_scaled(other, None, ord)
    }

    pub fn sub(&self, other: &Poly, ord: &MonomialOrder) -> Poly {
        self.add_scaled(other, Some((&Monomial::one(self.nvars), &self.field.from_i64(-1))), ord)
    }

    /// `self + c*m*other` in a single merge pass.
    pub fn add_scaled(&self, other: &Poly, factor: Option<(&Monomial, &Scalar)>, ord: &MonomialOrder) -> Poly {
        debug_assert_eq!(self.field, other.field);
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let scaled = |t: &Term| -> Term {
            match factor {
                Some((m, c)) => (t.0.mul(m), t.1.mul(c)),
                None => t.clone(),
            }
        };
        let mut b = other.terms.iter().map(scaled).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (Some(x), Some(y)) => match ord.cmp(&x.0, &y.0) {
                    Ordering::Greater => out.push(a.next().unwrap().clone()),
                    Ordering::Less => out.push(b.next().unwrap()),
                    Ordering::Equal => {
                        let (m, c) = a.next().unwrap().clone();
                        let (_, d) = b.next().unwrap();
                        let s = c.add(&d);
                        if !s.is_zero() {
                            out.push((m, s));
                        }
                    }
                },
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { field: self.field, nvars: self.nvars, terms: out }
    }

    pub fn mul(&self, other: &Poly, ord: &MonomialOrder) -> Poly {
        debug_assert_eq!(self.field, other.field);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field, self.nvars);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(m, c);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                terms.push((m.mul(n), c.mul(d)));
            }
        }
        Poly::from_terms(self.field, self.nvars, terms, ord)
    }

    /// Makes the leading coefficient 1 (no-op on zero).
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inv().expect("nonzero")),
            _ => self.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Field, variable names and monomial order of a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    pub field: Field,
    pub vars: Vec<String>,
    pub order: MonomialOrder,
}

impl PolyRing {
    pub fn new(field: Field, vars: Vec<String>, order: MonomialOrder) -> PolyRing {
        assert_eq!(vars.len(), order.nvars());
        PolyRing { field, vars, order }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(self.field, self.nvars())
    }

    pub fn one(&self) -> Poly {
        self.constant(1)
    }

    pub fn constant(&self, n: i64) -> Poly {
        Poly::constant(self.field, self.nvars(), self.field.from_i64(n))
    }

    pub fn scalar(&self, c: Scalar) -> Poly {
        Poly::constant(self.field, self.nvars(), c)
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::term(self.field, Monomial::var(self.nvars(), i), self.field.one())
    }

    pub fn monomial(&self, m: Monomial) -> Poly {
        Poly::term(self.field, m, self.field.one())
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b, &self.order)
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        a.sub(b, &self.order)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul(b, &self.order)
    }

    /// Weighted degree of a homogeneous polynomial; `None` for zero or mixed.
    pub fn degree(&self, p: &Poly) -> Option<i32> {
        p.homogeneous_degree(&self.order).ok().flatten()
    }

    /// Checked arithmetic: both operands must live in this ring.
    pub fn poly_arith(&self, a: &Poly, b: &Poly, op: ArithOp) -> Result<Poly> {
        for p in [a, b] {
            if p.field() != self.field {
                return Err(Error::FieldMismatch(p.field(), self.field));
            }
            if p.nvars() != self.nvars() {
                return Err(Error::VariableCountMismatch(p.nvars(), self.nvars()));
            }
        }
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
        })
    }

    pub fn parse(&self, text: &str) -> Result<Poly> {
        crate::algebra::parse::parse_poly(self, text)
    }

    /// Renders `p` in the text syntax accepted by [`PolyRing::parse`].
    pub fn fmt_poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in p.terms().iter().enumerate() {
            let neg = c.is_negative_display();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs_display();
            let mono = self.fmt_monomial(m);
            match (abs == "1", mono.is_empty()) {
                (_, true) => s.push_str(&abs),
                (true, false) => s.push_str(&mono),
                (false, false) => {
                    s.push_str(&abs);
                    s.push('*');
                    s.push_str(&mono);
                }
            }
        }
        s
    }

    pub fn fmt_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.vars[i].clone()),
                _ => parts.push(format!("{}^{}", self.vars[i], e)),
            }
        }
        parts.join("*")
    }

    pub fn display<'a>(&'a self, p: &'a Poly) -> impl fmt::Display + 'a {
        struct D<'a>(&'a PolyRing, &'a Poly);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.fmt_poly(self.1))
            }
        }
        D(self, p)
    }
}
