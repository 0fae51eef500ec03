use std::collections::BTreeMap;

use crate::algebra::{Monomial, Scalar};
use crate::error::Result;
use crate::fmod::{resolve, BettiEntry, BettiTable, ModMap, Presentation};
use crate::gb::{buchberger, MVec};
use crate::matrix::Matrix;

/// `M* = Hom(M, R)` as the kernel of `rel_Mᵀ`, with its generators written
/// in the dual of the free cover of `M`.
#[derive(Clone, Debug)]
pub struct DualModule {
    pub pres: Presentation,
    /// Columns are the generators of `M*` inside `F_0*`.
    pub gens: Matrix,
}

impl DualModule {
    pub fn of(m: &Presentation) -> Result<DualModule> {
        let ctx = m.ctx();
        if m.num_gens() == 0 {
            return Ok(DualModule { pres: Presentation::zero(ctx), gens: ctx.zeros(0, 0) });
        }
        let row_twists: Vec<i32> = m.rels().iter().map(|t| -t).collect();
        let col_twists: Vec<i32> = m.gens().iter().map(|t| -t).collect();
        let (k, kdeg) = ctx.syzygies(&m.matrix().transpose(), &row_twists, &col_twists)?;
        let (s, sdeg) = if k.cols() == 0 { (ctx.zeros(0, 0), Vec::new()) } else { ctx.syzygies(&k, &col_twists, &kdeg)? };
        let mut pres = Presentation::from_parts(ctx, kdeg, sdeg, s);
        pres.minimal = true;
        Ok(DualModule { pres, gens: k })
    }

    /// The evaluation map `M → G*`, where `G → M*` is the free cover; its
    /// kernel is the kernel of `M → M**`.
    pub fn evaluation(&self, m: &Presentation) -> Result<ModMap> {
        let ctx = m.ctx();
        let target = Presentation::free(ctx, self.pres.gens().iter().map(|t| -t).collect());
        ModMap::new(m.clone(), target, self.gens.transpose())
    }
}

impl ModMap {
    /// `f* : B* → A*`.
    pub fn dual(&self) -> Result<ModMap> {
        let da = DualModule::of(&self.source)?;
        let db = DualModule::of(&self.target)?;
        self.dual_between(&da, &db)
    }

    pub fn dual_between(&self, da: &DualModule, db: &DualModule) -> Result<ModMap> {
        let ctx = self.ctx();
        let image = ctx.mat_mul(&self.gen_matrix.transpose(), &db.gens);
        let a_twists: Vec<i32> = self.source.gens().iter().map(|t| -t).collect();
        let g = if image.cols() == 0 || da.gens.cols() == 0 {
            ctx.zeros(da.pres.num_gens(), db.pres.num_gens())
        } else {
            ctx.lift_matrix(&da.gens, &a_twists, da.pres.gens(), &image)?
                .expect("the dual of a map preserves the kernel of the dual presentation")
        };
        ModMap::new(db.pres.clone(), da.pres.clone(), g)
    }
}

/// Rank of a scalar matrix by Gaussian elimination.
pub(crate) fn scalar_rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][c].inv().expect("nonzero pivot");
        for r in 0..rows.len() {
            if r == rank || rows[r][c].is_zero() {
                continue;
            }
            let factor = rows[r][c].mul(&inv);
            for k in c..ncols {
                let t = factor.mul(&rows[rank][k]);
                rows[r][k] = rows[r][k].sub(&t);
            }
        }
        rank += 1;
    }
    rank
}

/// Number of free summands of `m` in each generator degree, read off from
/// the degree-zero part of the evaluation pairing `M* × M → R`.
pub fn free_rank(m: &Presentation) -> Result<BTreeMap<i32, usize>> {
    let m = m.minimal()?;
    let d = DualModule::of(&m)?;
    let mut out = BTreeMap::new();
    let mut degrees: Vec<i32> = m.gens().to_vec();
    degrees.sort_unstable();
    degrees.dedup();
    for deg in degrees {
        let cols: Vec<usize> = (0..m.num_gens()).filter(|&i| m.gens()[i] == deg).collect();
        let rows: Vec<usize> = (0..d.pres.num_gens()).filter(|&k| d.pres.gens()[k] == -deg).collect();
        let block: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|&k| cols.iter().map(|&i| d.gens.get(i, k).constant_coeff()).collect())
            .collect();
        let r = scalar_rank(block);
        if r > 0 {
            out.insert(deg, r);
        }
    }
    Ok(out)
}

/// Betti table of `m` with its free summands removed.
pub fn stable_betti(m: &Presentation, len: usize) -> Result<BettiTable> {
    let mut table = resolve(m, len)?.betti();
    for (deg, r) in free_rank(m)? {
        if let Some(e) = table.iter_mut().find(|e| e.hom_deg == 0 && e.internal_deg == deg) {
            e.rank -= r;
        }
    }
    table.retain(|e: &BettiEntry| e.rank > 0);
    Ok(table)
}

/// Monomials of weighted degree exactly `d`.
pub(crate) fn monomials_of_degree(weights: &[u32], d: i32) -> Vec<Monomial> {
    fn go(weights: &[u32], idx: usize, left: i32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if idx == weights.len() {
            if left == 0 {
                out.push(Monomial::from_exponents(cur));
            }
            return;
        }
        let w = weights[idx] as i32;
        let mut e = 0;
        while e * w <= left {
            cur.push(e as u16);
            go(weights, idx + 1, left - e * w, cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    if d >= 0 {
        go(weights, 0, d, &mut Vec::new(), &mut out);
    }
    out
}

/// `dim_k M_t` for `t` in `lo..=hi`.
pub fn hilbert_function(m: &Presentation, lo: i32, hi: i32) -> Result<Vec<usize>> {
    let ctx = m.ctx();
    let n = m.num_gens();
    let mut gens: Vec<MVec> = m.matrix().columns().iter().map(|c| MVec::from_polys(c, 0)).collect();
    for i in 0..n {
        for g in ctx.ideal_gb() {
            gens.push(MVec::single(i, g));
        }
    }
    let gb = buchberger(ctx.ring(), m.gens().to_vec(), &gens, ctx.max_degree())?;
    let leads: Vec<(usize, Monomial)> = gb.iter().map(|v| v.lead().map(|(c, mono, _)| (*c, mono.clone())).unwrap()).collect();
    let weights = &ctx.order().weights;
    let mut out = Vec::new();
    for t in lo..=hi {
        let mut count = 0;
        for i in 0..n {
            for mono in monomials_of_degree(weights, t - m.gens()[i]) {
                if !leads.iter().any(|(c, l)| *c == i && l.divides(&mono)) {
                    count += 1;
                }
            }
        }
        out.push(count);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::gallery;

    fn residue_field(ctx: &std::sync::Arc<crate::ring::RingCtx>) -> Presentation {
        let vars: Vec<_> = (0..ctx.vars().len()).map(|i| ctx.ring().var(i)).collect();
        Presentation::new(ctx, vec![0], Matrix::from_rows(1, vars.len(), vars)).unwrap()
    }

    #[test]
    fn dual_of_residue_field() {
        let r = gallery::dual_numbers();
        let k = residue_field(&r);
        let d = DualModule::of(&k).unwrap();
        // Hom(k, R) is the socle (x), generated in degree 1.
        assert_eq!(d.pres.gens(), &[1]);
        let node = gallery::node();
        assert!(DualModule::of(&residue_field(&node)).unwrap().pres.is_zero().unwrap());
    }

    #[test]
    fn free_summands_are_counted() {
        let r = gallery::node();
        let k = residue_field(&r);
        let sum = Presentation::direct_sum(&r, &[&k, &Presentation::free(&r, vec![1, 1])]);
        let fr = free_rank(&sum).unwrap();
        assert_eq!(fr.get(&1), Some(&2));
        assert!(free_rank(&k).unwrap().is_empty());
        assert_eq!(stable_betti(&sum, 2).unwrap(), stable_betti(&k, 2).unwrap());
    }

    #[test]
    fn hilbert_function_of_quotients() {
        let r = gallery::node();
        let k = residue_field(&r);
        assert_eq!(hilbert_function(&k, 0, 3).unwrap(), vec![1, 0, 0, 0]);
        let free = Presentation::free(&r, vec![0]);
        assert_eq!(hilbert_function(&free, 0, 3).unwrap(), vec![1, 2, 2, 2]);
    }

    #[test]
    fn rank_of_scalar_matrices() {
        let f = crate::algebra::Field::Rationals;
        let s = |n: i64| f.from_i64(n);
        assert_eq!(scalar_rank(vec![vec![s(1), s(2)], vec![s(2), s(4)]]), 1);
        assert_eq!(scalar_rank(vec![vec![s(0), s(1)], vec![s(1), s(0)]]), 2);
        assert_eq!(scalar_rank(Vec::new()), 0);
    }
}
