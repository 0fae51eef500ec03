//! Incremental Buchberger algorithm for submodules of graded free modules.
//!
//! Pairs are processed by sugar degree with deterministic tie-breaking. The
//! chain criterion is applied in Becker–Weispfenning form; the coprime-lead
//! criterion only for rank-one modules, where it is valid.

use std::collections::{BTreeSet, HashSet};

use crate::algebra::{Field, Monomial, MonomialOrder, PolyRing};
use crate::error::{Error, Result};
use crate::gb::mvec::MVec;

struct Lead {
    comp: usize,
    mono: Monomial,
    mask: u64,
}

pub struct IncrementalGb {
    field: Field,
    order: MonomialOrder,
    twists: Vec<i32>,
    elems: Vec<MVec>,
    leads: Vec<Lead>,
    sugar: Vec<i32>,
    queue: BTreeSet<(i32, usize, usize)>,
    pending: HashSet<(usize, usize)>,
    limit: Option<i32>,
}

impl IncrementalGb {
    /// Empty basis in the free module with the given component twists.
    /// `limit` caps the polynomial degree of S-pair lcms.
    pub fn new(ring: &PolyRing, twists: Vec<i32>, limit: Option<i32>) -> IncrementalGb {
        IncrementalGb {
            field: ring.field,
            order: ring.order.clone(),
            twists,
            elems: Vec::new(),
            leads: Vec::new(),
            sugar: Vec::new(),
            queue: BTreeSet::new(),
            pending: HashSet::new(),
            limit,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn twists(&self) -> &[i32] {
        &self.twists
    }

    /// Current basis elements (monic, not interreduced).
    pub fn elements(&self) -> &[MVec] {
        &self.elems
    }

    /// Adds a generator; it is top-reduced first and dropped if it reduces to zero.
    pub fn add_generator(&mut self, v: MVec) {
        let sugar = v.max_degree(&self.order, &self.twists);
        let v = self.top_reduce(v, usize::MAX);
        if !v.is_zero() {
            self.insert(v.monic(), sugar);
        }
    }

    fn insert(&mut self, v: MVec, sugar: i32) {
        let (comp, mono, _) = v.lead().expect("nonzero").clone();
        let new = self.elems.len();
        for i in 0..new {
            if self.leads[i].comp != comp {
                continue;
            }
            let lcm = self.leads[i].mono.lcm(&mono);
            let s = (sugar + self.order.degree(&mono.quotient_of(&lcm)))
                .max(self.sugar[i] + self.order.degree(&self.leads[i].mono.quotient_of(&lcm)));
            self.queue.insert((s, new, i));
            self.pending.insert((i, new));
        }
        self.leads.push(Lead { comp, mask: mono.support_mask(), mono });
        self.elems.push(v);
        self.sugar.push(sugar);
    }

    fn find_divisor(&self, comp: usize, m: &Monomial) -> Option<usize> {
        let mask = m.support_mask();
        self.leads
            .iter()
            .position(|l| l.comp == comp && l.mask & !mask == 0 && l.mono.divides(m))
    }

    /// Reduces leading terms until the leading term is irreducible or lies in
    /// a component `>= stop`.
    pub fn top_reduce(&self, mut v: MVec, stop: usize) -> MVec {
        while let Some((comp, m, c)) = v.lead().cloned() {
            if comp >= stop {
                break;
            }
            match self.find_divisor(comp, &m) {
                Some(k) => {
                    let q = self.leads[k].mono.quotient_of(&m);
                    v = v.add_scaled(&self.elems[k], &q, &c.neg(), &self.order);
                }
                None => break,
            }
        }
        v
    }

    /// Full normal form: no term is divisible by a leading term.
    pub fn normal_form(&self, v: MVec) -> MVec {
        let mut rest = v;
        let mut done = Vec::new();
        while let Some((comp, m, c)) = rest.lead().cloned() {
            match self.find_divisor(comp, &m) {
                Some(k) => {
                    let q = self.leads[k].mono.quotient_of(&m);
                    rest = rest.add_scaled(&self.elems[k], &q, &c.neg(), &self.order);
                }
                None => {
                    done.push(rest.terms.remove(0));
                }
            }
        }
        MVec { terms: done }
    }

    /// Smallest sugar among unprocessed pairs.
    pub fn next_degree(&self) -> Option<i32> {
        self.queue.first().map(|p| p.0)
    }

    pub fn complete(&mut self) -> Result<()> {
        self.complete_to(i32::MAX)
    }

    /// Processes every pair of sugar at most `deg`. For homogeneous input the
    /// basis is then correct in all degrees `<= deg`.
    pub fn complete_to(&mut self, deg: i32) -> Result<()> {
        while let Some(&(s, j, i)) = self.queue.first() {
            if s > deg {
                break;
            }
            self.queue.pop_first();
            self.pending.remove(&(i, j));
            let lcm = self.leads[i].mono.lcm(&self.leads[j].mono);
            if let Some(limit) = self.limit {
                if self.order.degree(&lcm) > limit {
                    return Err(Error::ResourceLimit { limit });
                }
            }
            if self.twists.len() == 1 && self.leads[i].mono.is_coprime(&self.leads[j].mono) {
                continue;
            }
            if self.chain_criterion(i, j, &lcm) {
                continue;
            }
            let qi = self.leads[i].mono.quotient_of(&lcm);
            let qj = self.leads[j].mono.quotient_of(&lcm);
            let one = self.field.one();
            let spoly = MVec::zero()
                .add_scaled(&self.elems[i], &qi, &one, &self.order)
                .add_scaled(&self.elems[j], &qj, &one.neg(), &self.order);
            let r = self.top_reduce(spoly, usize::MAX);
            if !r.is_zero() {
                self.insert(r.monic(), s);
            }
        }
        Ok(())
    }

    fn chain_criterion(&self, i: usize, j: usize, lcm: &Monomial) -> bool {
        let comp = self.leads[i].comp;
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        (0..self.elems.len()).any(|k| {
            k != i
                && k != j
                && self.leads[k].comp == comp
                && self.leads[k].mono.divides(lcm)
                && !self.pending.contains(&key(i, k))
                && !self.pending.contains(&key(j, k))
        })
    }

    /// Reduced basis: minimal leading terms, monic, tails fully reduced.
    pub fn reduced_basis(&self) -> Vec<MVec> {
        let n = self.elems.len();
        let mut keep = vec![true; n];
        for a in 0..n {
            for b in 0..n {
                if a == b || !keep[b] || self.leads[a].comp != self.leads[b].comp {
                    continue;
                }
                if self.leads[b].mono.divides(&self.leads[a].mono)
                    && (self.leads[a].mono != self.leads[b].mono || b < a)
                {
                    keep[a] = false;
                    break;
                }
            }
        }
        let minimal: Vec<usize> = (0..n).filter(|&k| keep[k]).collect();
        let mut sub = IncrementalGb {
            field: self.field,
            order: self.order.clone(),
            twists: self.twists.clone(),
            elems: Vec::new(),
            leads: Vec::new(),
            sugar: Vec::new(),
            queue: BTreeSet::new(),
            pending: HashSet::new(),
            limit: None,
        };
        for &k in &minimal {
            sub.leads.push(Lead {
                comp: self.leads[k].comp,
                mono: self.leads[k].mono.clone(),
                mask: self.leads[k].mask,
            });
            sub.elems.push(self.elems[k].clone());
        }
        let mut out = Vec::with_capacity(minimal.len());
        for idx in 0..sub.elems.len() {
            let v = &sub.elems[idx];
            let head = MVec { terms: vec![v.terms[0].clone()] };
            let tail = MVec { terms: v.terms[1..].to_vec() };
            let tail = sub.normal_form(tail);
            let mut terms = head.terms;
            terms.extend(tail.terms);
            out.push(MVec { terms });
        }
        out.sort_by(|a, b| {
            let (ca, ma, _) = a.lead().unwrap();
            let (cb, mb, _) = b.lead().unwrap();
            crate::gb::mvec::cmp_pos(&self.order, (*ca, ma), (*cb, mb))
        });
        out
    }
}
