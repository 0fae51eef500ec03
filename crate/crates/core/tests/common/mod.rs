//! Degree-by-degree linear algebra over QQ, independent of Gröbner bases.
//! Works for standard-graded rings only.

#![allow(dead_code)]

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use stablehom::algebra::{Poly, Scalar};
use stablehom::fmod::Presentation;
use stablehom::ring::RingCtx;

/// Exponent vectors of total degree `d` in `n` variables.
pub fn monomials(n: usize, d: i32) -> Vec<Vec<u16>> {
    if d < 0 {
        return Vec::new();
    }
    if n == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - first) {
            rest.insert(0, first as u16);
            out.push(rest);
        }
    }
    out
}

fn rational(c: &Scalar) -> BigRational {
    match c {
        Scalar::Rational(q) => q.clone(),
        Scalar::Modular { .. } => panic!("oracle works over QQ"),
    }
}

/// Rank of a dense matrix given as rows, by fraction-exact elimination.
pub fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let Some(width) = rows.first().map(|r| r.len()) else { return 0 };
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = BigRational::one() / rows[r][c].clone();
        let pivot: Vec<BigRational> = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    r
}

/// A graded free module `⊕ P(-t_i)` in one degree, as coordinates.
struct Block {
    offsets: Vec<usize>,
    index: Vec<HashMap<Vec<u16>, usize>>,
    width: usize,
}

impl Block {
    fn new(n: usize, degrees: &[i32]) -> Block {
        let mut offsets = Vec::new();
        let mut index = Vec::new();
        let mut width = 0;
        for &d in degrees {
            offsets.push(width);
            let map: HashMap<Vec<u16>, usize> = monomials(n, d).into_iter().enumerate().map(|(i, m)| (m, i)).collect();
            width += map.len();
            index.push(map);
        }
        Block { offsets, index, width }
    }

    /// Coordinates of `m · v`, where `v` has one polynomial per summand.
    fn vector(&self, m: &[u16], v: &[&Poly]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.width];
        for (i, p) in v.iter().enumerate() {
            for (mono, c) in p.terms() {
                let e: Vec<u16> = mono.exponents().iter().zip(m).map(|(a, b)| a + b).collect();
                let j = self.index[i].get(&e).expect("term of the expected degree");
                out[self.offsets[i] + j] += rational(c);
            }
        }
        out
    }
}

pub struct Oracle<'a> {
    pub ctx: &'a RingCtx,
}

impl Oracle<'_> {
    fn n(&self) -> usize {
        self.ctx.vars().len()
    }

    fn deg(&self, p: &Poly) -> i32 {
        p.terms().first().map(|(m, _)| m.total_degree() as i32).unwrap_or(0)
    }

    /// Rows spanning `⊕ I_{d_i}` inside the block with summand degrees `d`.
    fn ideal_rows(&self, block: &Block, degrees: &[i32]) -> Vec<Vec<BigRational>> {
        let zero = self.ctx.zero();
        let mut rows = Vec::new();
        for (i, &d) in degrees.iter().enumerate() {
            for g in self.ctx.ideal() {
                for m in monomials(self.n(), d - self.deg(g)) {
                    let v: Vec<&Poly> = (0..degrees.len()).map(|k| if k == i { g } else { &zero }).collect();
                    rows.push(block.vector(&m, &v));
                }
            }
        }
        rows
    }

    pub fn ring_dim(&self, d: i32) -> usize {
        let block = Block::new(self.n(), &[d]);
        block.width - rank(self.ideal_rows(&block, &[d]))
    }

    /// `dim_k M_d` for `M = coker(rel)`.
    pub fn module_dim(&self, m: &Presentation, d: i32) -> usize {
        let degrees: Vec<i32> = m.gens().iter().map(|g| d - g).collect();
        let block = Block::new(self.n(), &degrees);
        let mut rows = self.ideal_rows(&block, &degrees);
        for j in 0..m.num_rels() {
            let col = m.matrix().column(j);
            let refs: Vec<&Poly> = col.iter().collect();
            for mono in monomials(self.n(), d - m.rels()[j]) {
                rows.push(block.vector(&mono, &refs));
            }
        }
        block.width - rank(rows)
    }

    /// `dim_k Hom(M, R)_d`: tuples `r_i ∈ R_{g_i + d}` killing every relation.
    pub fn dual_dim(&self, m: &Presentation, d: i32) -> usize {
        let src_deg: Vec<i32> = m.gens().iter().map(|g| g + d).collect();
        let tgt_deg: Vec<i32> = m.rels().iter().map(|r| r + d).collect();
        let src = Block::new(self.n(), &src_deg);
        let tgt = Block::new(self.n(), &tgt_deg);
        let ideal_tgt = self.ideal_rows(&tgt, &tgt_deg);
        let ideal_src = rank(self.ideal_rows(&src, &src_deg));
        // Image of each basis vector of the source under r ↦ (Σ_i r_i rel_ij)_j.
        let mut images = Vec::new();
        for (i, &sd) in src_deg.iter().enumerate() {
            let row: Vec<&Poly> = (0..m.num_rels()).map(|j| m.matrix().get(i, j)).collect();
            for mono in monomials(self.n(), sd) {
                images.push(tgt.vector(&mono, &row));
            }
        }
        let rank_i = rank(ideal_tgt.clone());
        let mut stacked = images;
        stacked.extend(ideal_tgt);
        let rank_map = if tgt.width == 0 { 0 } else { rank(stacked) - rank_i };
        src.width - rank_map - ideal_src
    }

    pub fn free_dim(&self, twists: &[i32], d: i32) -> usize {
        twists.iter().map(|t| self.ring_dim(d - t)).sum()
    }
}
