use std::sync::Arc;

use crate::complexes::Complex;
use crate::error::{Error, Result};
use crate::fmod::Presentation;
use crate::matrix::Matrix;
use crate::ring::RingCtx;

/// `(d^{-k}, twists of F^{-k})` for `k = 1..`, starting from a minimal presentation.
pub(crate) type ResolutionSteps = Arc<Vec<(Matrix, Vec<i32>)>>;

/// The first `len` differentials of a minimal resolution of `m`, from the
/// ring's cache when available.
pub(crate) fn resolution_steps(m: &Presentation, len: usize) -> Result<(Presentation, ResolutionSteps)> {
    let min = m.minimal()?;
    let ctx = min.ctx().clone();
    let key = (min.matrix().clone(), min.gens().to_vec(), min.rels().to_vec());
    let mut steps: Vec<(Matrix, Vec<i32>)> = match ctx.cached_resolution(&key) {
        Some(data) if data.len() >= len => return Ok((min, data)),
        Some(data) => data.as_ref().clone(),
        None => vec![(min.matrix().clone(), min.rels().to_vec())],
    };
    while steps.len() < len {
        let (d, src) = steps.last().expect("nonempty");
        let tgt: Vec<i32> = if steps.len() == 1 { min.gens().to_vec() } else { steps[steps.len() - 2].1.clone() };
        let next = if d.cols() == 0 {
            (ctx.zeros(0, 0), Vec::new())
        } else {
            ctx.syzygies(d, &tgt, src)?
        };
        steps.push(next);
    }
    let data = Arc::new(steps);
    ctx.store_resolution(key, data.clone());
    Ok((min, data))
}

/// Minimal free resolution `F^{-n} → … → F^0` of `m` as a complex on `[-n, 0]`.
pub fn resolve(m: &Presentation, n: usize) -> Result<Complex> {
    let (min, steps) = resolution_steps(m, n)?;
    let ctx = min.ctx().clone();
    let mut terms = vec![min.gens().to_vec()];
    let mut diffs = Vec::new();
    for (d, src) in steps.iter().take(n) {
        terms.push(src.clone());
        diffs.push(d.clone());
    }
    terms.reverse();
    diffs.reverse();
    let zero_below = terms.iter().any(|t| t.is_empty());
    let mut c = Complex::from_parts(&ctx, -(n as i32), terms, diffs);
    c.zero_above = true;
    c.zero_below = zero_below;
    Ok(c)
}

/// `Ω^n m`, presented by the `(n+1)`-st differential of the minimal resolution.
pub fn syzygy(m: &Presentation, n: usize) -> Result<Presentation> {
    if n == 0 {
        return m.minimal();
    }
    let (_, steps) = resolution_steps(m, n + 1)?;
    let (d, src) = &steps[n];
    let gens = steps[n - 1].1.clone();
    let mut p = Presentation::from_parts(m.ctx(), gens, src.clone(), d.clone());
    p.minimal = true;
    Ok(p)
}

/// Auslander–Bridger transpose: cokernel of the dual of a minimal presentation.
pub fn transpose(m: &Presentation) -> Result<Presentation> {
    let min = m.minimal()?;
    let gens = min.rels().iter().map(|t| -t).collect();
    let rels = min.gens().iter().map(|t| -t).collect();
    Presentation::from_parts(min.ctx(), gens, rels, min.matrix().transpose()).minimal()
}

/// Homology at the middle of `src --in--> mid --out--> tgt` for free modules.
/// `None` stands for a zero map.
pub fn homology_of_frees(
    ctx: &Arc<RingCtx>,
    mid: &[i32],
    incoming: Option<(&Matrix, &[i32])>,
    outgoing: Option<(&Matrix, &[i32])>,
) -> Result<Presentation> {
    if mid.is_empty() {
        return Ok(Presentation::zero(ctx));
    }
    let (k, kdeg) = match outgoing {
        Some((out, tgt)) if out.rows() > 0 => ctx.syzygies(out, tgt, mid)?,
        _ => (ctx.identity(mid.len()), mid.to_vec()),
    };
    if k.cols() == 0 {
        return Ok(Presentation::zero(ctx));
    }
    let mut blocks = Vec::new();
    let mut rels = Vec::new();
    let lifted;
    if let Some((inc, src)) = incoming {
        lifted = ctx.lift_matrix(&k, mid, &kdeg, inc)?.ok_or(Error::NotAComplex)?;
        blocks.push(&lifted);
        rels.extend_from_slice(src);
    }
    let (s, sdeg) = ctx.syzygies(&k, mid, &kdeg)?;
    blocks.push(&s);
    rels.extend(sdeg);
    let rel = Matrix::hstack(ctx.ring(), k.cols(), &blocks);
    Presentation::from_parts(ctx, kdeg, rels, rel).minimal()
}

/// `Ext^i(m, R)`: cohomology of the dualized minimal resolution.
pub fn ext(m: &Presentation, i: usize) -> Result<Presentation> {
    let (min, steps) = resolution_steps(m, i + 1)?;
    let ctx = min.ctx();
    let term = |k: usize| -> Vec<i32> {
        let t = if k == 0 { min.gens() } else { &steps[k - 1].1 };
        t.iter().map(|x| -x).collect()
    };
    let mid = term(i);
    let out_t = steps[i].0.transpose();
    let tgt = term(i + 1);
    let in_t;
    let src;
    let incoming = if i == 0 {
        None
    } else {
        in_t = steps[i - 1].0.transpose();
        src = term(i - 1);
        Some((&in_t, src.as_slice()))
    };
    homology_of_frees(ctx, &mid, incoming, Some((&out_t, tgt.as_slice())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fmod::BettiEntry;
    use crate::ring::gallery;

    fn residue_field(ctx: &Arc<RingCtx>) -> Presentation {
        let vars: Vec<_> = (0..ctx.vars().len()).map(|i| ctx.ring().var(i)).collect();
        Presentation::new(ctx, vec![0], Matrix::from_rows(1, vars.len(), vars)).unwrap()
    }

    fn ranks(c: &Complex) -> Vec<usize> {
        (c.lo()..=c.hi()).rev().map(|n| c.rank(n).unwrap()).collect()
    }

    #[test]
    fn residue_field_over_node() {
        let r = gallery::node();
        let k = residue_field(&r);
        let c = resolve(&k, 2).unwrap();
        assert_eq!(ranks(&c), vec![1, 2, 2]);
        assert!(c.is_complex());
        assert_eq!(
            c.betti(),
            vec![
                BettiEntry { hom_deg: 0, internal_deg: 0, rank: 1 },
                BettiEntry { hom_deg: 1, internal_deg: 1, rank: 2 },
                BettiEntry { hom_deg: 2, internal_deg: 2, rank: 2 },
            ]
        );
    }

    #[test]
    fn free_module_resolution_stops() {
        let r = gallery::node();
        let f = Presentation::free(&r, vec![0]);
        let c = resolve(&f, 3).unwrap();
        assert_eq!(ranks(&c), vec![1, 0, 0, 0]);
        assert!(c.zero_below);
        assert!(syzygy(&f, 1).unwrap().is_zero().unwrap());
        assert!(transpose(&f).unwrap().is_zero().unwrap());
    }

    #[test]
    fn dual_numbers_are_self_injective() {
        let r = gallery::dual_numbers();
        let k = residue_field(&r);
        assert!(ext(&k, 1).unwrap().is_zero().unwrap());
        let tr = transpose(&k).unwrap();
        assert_eq!(tr.gens(), &[-1]);
        assert_eq!(tr.num_rels(), 1);
        let om = syzygy(&k, 1).unwrap();
        assert_eq!(om.gens(), &[1]);
        assert_eq!(om.rels(), &[2]);
    }

    #[test]
    fn ext_one_of_residue_field_over_node_is_nonzero() {
        let r = gallery::node();
        let k = residue_field(&r);
        assert!(!ext(&k, 1).unwrap().is_zero().unwrap());
        let e0 = ext(&Presentation::free(&r, vec![0, 2]), 0).unwrap();
        assert_eq!(e0.num_gens(), 2);
        assert_eq!(e0.num_rels(), 0);
    }
}
