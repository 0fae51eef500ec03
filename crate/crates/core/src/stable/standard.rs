use crate::complexes::Complex;
use crate::error::{Error, Result};
use crate::fmod::{resolve, Presentation};
use crate::matrix::Matrix;

/// A two-sided complex of free modules attached to a module `A`: the
/// minimal resolution of `A` in degrees `≤ 0`, glued at degree 0 to the dual
/// of a resolution of `Tr A` in degrees `≥ 1`.
#[derive(Clone, Debug)]
pub struct StandardResolution {
    /// Minimal presentation of `A`; degree 0 of the complex is its free cover.
    pub module: Presentation,
    pub complex: Complex,
}

/// Standard resolution of `a` on the window `[lo, hi]`, `lo ≤ 0 ≤ hi`.
///
/// Writing `P` for the minimal resolution of `A`, the transpose side is
/// `Q^0 = (P^{-1})*`, `Q^{-1} = (P^0)*`, `q^{-1} = (d^{-1})ᵀ`, continued by
/// minimal syzygies; then `F^n = (Q^{-n-1})*` and `d^n = (q^{-n-2})ᵀ` for `n ≥ 0`.
pub fn standard_resolution(a: &Presentation, lo: i32, hi: i32) -> Result<StandardResolution> {
    if lo > 0 || hi < 0 {
        return Err(Error::Invalid(format!("window [{lo}, {hi}] must contain degree 0")));
    }
    let min = a.minimal()?;
    let ctx = min.ctx().clone();
    let neg = resolve(&min, (-lo) as usize)?;

    let neg_twists = |t: &[i32]| -> Vec<i32> { t.iter().map(|x| -x).collect() };
    let mut q_twists = vec![neg_twists(min.rels()), neg_twists(min.gens())];
    let mut q_maps: Vec<Matrix> = vec![ctx.zeros(0, 0), min.matrix().transpose()];
    for k in 1..=(hi as usize) {
        let (m, deg) = if q_twists[k].is_empty() {
            (ctx.zeros(0, 0), Vec::new())
        } else {
            ctx.syzygies(&q_maps[k], &q_twists[k - 1], &q_twists[k])?
        };
        q_maps.push(m);
        q_twists.push(deg);
    }

    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for n in lo..=0 {
        terms.push(neg.twists(n)?.to_vec());
        if n < 0 {
            diffs.push(neg.diff(n)?);
        }
    }
    for n in 1..=hi {
        let k = (n + 1) as usize;
        terms.push(neg_twists(&q_twists[k]));
        diffs.push(q_maps[k].transpose());
    }
    let zero_above = (1..=hi).any(|n| q_twists[(n + 1) as usize].is_empty()) || min.num_gens() == 0;
    let mut complex = Complex::from_parts(&ctx, lo, terms, diffs);
    complex.zero_below = neg.zero_below;
    complex.zero_above = zero_above;
    Ok(StandardResolution { module: min, complex })
}

impl StandardResolution {
    pub fn lo(&self) -> i32 {
        self.complex.lo()
    }

    pub fn hi(&self) -> i32 {
        self.complex.hi()
    }

    /// Checks the defining conditions on the window: a complex, exact in
    /// the interior of the negative part, with exact dual in the interior of
    /// the non-negative part, and recovering the module at degree 0.
    pub fn verify(&self) -> Result<bool> {
        let c = &self.complex;
        if !c.is_complex() {
            return Ok(false);
        }
        for i in (c.lo() + 1)..0 {
            if !c.homology(i)?.is_zero()? {
                return Ok(false);
            }
        }
        let dual = c.dual();
        for j in (dual.lo() + 1)..=0.min(dual.hi() - 1) {
            if !dual.homology(j)?.is_zero()? {
                return Ok(false);
            }
        }
        if c.lo() < 0 {
            let h0 = c.truncate_le(0).homology(0)?;
            if h0.betti(1)? != self.module.betti(1)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
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
    fn dual_numbers_give_multiplication_chain() {
        let r = gallery::dual_numbers();
        let s = standard_resolution(&residue_field(&r), -2, 2).unwrap();
        for n in -2..=2 {
            assert_eq!(s.complex.rank(n).unwrap(), 1, "degree {n}");
        }
        for n in -2..2 {
            assert_eq!(r.fmt(s.complex.diff(n).unwrap().get(0, 0)), "x");
        }
        assert!(s.verify().unwrap());
    }

    #[test]
    fn node_residue_field_conditions() {
        let r = gallery::node();
        let s = standard_resolution(&residue_field(&r), -2, 2).unwrap();
        assert!(s.verify().unwrap());
        assert_eq!(s.complex.rank(0).unwrap(), 1);
        assert_eq!(s.complex.rank(-1).unwrap(), 2);
    }

    #[test]
    fn free_module_gives_split_complex() {
        let r = gallery::node();
        let s = standard_resolution(&Presentation::free(&r, vec![0]), -1, 2).unwrap();
        assert_eq!(s.complex.rank(-1).unwrap(), 0);
        assert_eq!(s.complex.rank(1).unwrap(), 1);
        assert_eq!(s.complex.rank(2).unwrap(), 0);
        assert!(s.complex.is_exact_everywhere(-1, 2).unwrap());
    }
}
