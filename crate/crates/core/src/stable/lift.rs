use crate::complexes::ChainMap;
use crate::error::{Error, Result};
use crate::fmod::ModMap;
use crate::stable::StandardResolution;

/// Lifts `f : A → B` to a chain map `F_A → F_B` on the shared window.
///
/// `f` must be a map between the presentations the two resolutions were
/// built from. Degree 0 is the generator matrix; lower degrees lift
/// through the resolution of `B`, higher degrees are transposes of lifts
/// through the dual of `F_A`, which is exact in non-positive degrees.
pub fn lift_chain_map(f: &ModMap, fa: &StandardResolution, fb: &StandardResolution) -> Result<ChainMap> {
    if f.source.gens() != fa.module.gens()
        || f.source.matrix() != fa.module.matrix()
        || f.target.gens() != fb.module.gens()
        || f.target.matrix() != fb.module.matrix()
    {
        return Err(Error::ShapeMismatch("map does not match the resolved presentations".into()));
    }
    let (a, b) = (&fa.complex, &fb.complex);
    let ctx = f.ctx().clone();
    let lo = a.lo().max(b.lo());
    let hi = a.hi().min(b.hi());
    if lo > 0 || hi < 0 {
        return Err(Error::WindowTooSmall { degree: 0, lo, hi });
    }

    let mut down = vec![f.gen_matrix.clone()];
    for n in ((lo + 1)..=0).rev() {
        let prev = down.last().expect("degree 0 present");
        let (ra, rb) = (a.rank(n - 1)?, b.rank(n - 1)?);
        let rhs = ctx.mat_mul(prev, &a.diff(n - 1)?);
        let next = if ra == 0 || rb == 0 {
            if !ctx.is_zero_matrix(&rhs) {
                return Err(Error::Invalid(format!("chain map does not lift to degree {}", n - 1)));
            }
            ctx.zeros(rb, ra)
        } else {
            ctx.lift_matrix(&b.diff(n - 1)?, b.twists(n)?, b.twists(n - 1)?, &rhs)?
                .ok_or_else(|| Error::Invalid(format!("chain map does not lift to degree {}", n - 1)))?
        };
        down.push(next);
    }
    down.reverse();

    let mut comps = down;
    for n in 0..hi {
        let cur = comps.last().expect("degree n present").clone();
        let (ra, rb) = (a.rank(n + 1)?, b.rank(n + 1)?);
        let next = if ra == 0 || rb == 0 {
            ctx.zeros(rb, ra)
        } else {
            let rhs = ctx.mat_mul(&cur.transpose(), &b.diff(n)?.transpose());
            let neg = |t: &[i32]| -> Vec<i32> { t.iter().map(|x| -x).collect() };
            let x = ctx
                .lift_matrix(&a.diff(n)?.transpose(), &neg(a.twists(n)?), &neg(a.twists(n + 1)?), &rhs)?
                .ok_or_else(|| Error::Invalid(format!("chain map does not extend to degree {}", n + 1)))?;
            x.transpose()
        };
        comps.push(next);
    }
    ChainMap::new(a.clone(), b.clone(), lo, comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fmod::Presentation;
    use crate::matrix::Matrix;
    use crate::ring::gallery;
    use crate::stable::standard_resolution;

    fn residue_field(ctx: &std::sync::Arc<crate::ring::RingCtx>) -> Presentation {
        let vars: Vec<_> = (0..ctx.vars().len()).map(|i| ctx.ring().var(i)).collect();
        Presentation::new(ctx, vec![0], Matrix::from_rows(1, vars.len(), vars)).unwrap().minimal().unwrap()
    }

    #[test]
    fn identity_lifts_to_identity() {
        let r = gallery::node();
        let k = residue_field(&r);
        let fk = standard_resolution(&k, -2, 1).unwrap();
        let f = lift_chain_map(&ModMap::identity(&k), &fk, &fk).unwrap();
        for n in -2..=1 {
            assert_eq!(f.comp(n).unwrap(), r.identity(fk.complex.rank(n).unwrap()));
        }
    }

    #[test]
    fn multiplication_by_x_on_residue_field() {
        let r = gallery::dual_numbers();
        let k = residue_field(&r);
        let x = r.parse("x").unwrap();
        let f = ModMap::times(&k, &x, 1).unwrap();
        let fa = standard_resolution(&f.source, -2, 2).unwrap();
        let fb = standard_resolution(&k, -2, 2).unwrap();
        let chain = lift_chain_map(&f, &fa, &fb).unwrap();
        assert!(chain.verify().unwrap());
        assert_eq!(chain.lo(), -2);
        assert_eq!(chain.hi(), 2);
    }
}
