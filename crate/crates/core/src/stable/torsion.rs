use crate::error::{Error, Result};
use crate::fmod::{
    ext, free_rank, hilbert_function, homology_at, resolution_steps, stable_betti, transpose, DualModule, ModMap,
    Presentation,
};
use crate::matrix::Matrix;
use crate::stable::{cone_of, standard_resolution};

/// `M` embeds in a free module, decided by `Ext¹(Tr M, R) = 0`.
pub fn torsionless(m: &Presentation) -> Result<bool> {
    ext(&transpose(m)?, 1)?.is_zero()
}

/// `M → M**` is injective, computed through the evaluation map into the
/// dual of a free cover of `M*`.
pub fn torsionless_by_evaluation(m: &Presentation) -> Result<bool> {
    let m = m.minimal()?;
    DualModule::of(&m)?.evaluation(&m)?.is_injective()
}

/// `Ext¹(M, R)* = 0`.
pub fn ext_dual_vanishes(m: &Presentation) -> Result<bool> {
    let e = ext(m, 1)?;
    DualModule::of(&e)?.pres.is_zero()
}

/// `J²M = Tr Ω¹ Tr Ω¹ M` together with `ψ_M : J²M → M`.
#[derive(Clone, Debug)]
pub struct J2Data {
    pub j2: Presentation,
    pub psi: ModMap,
}

pub fn j2_psi(m: &Presentation) -> Result<J2Data> {
    let (min, steps) = resolution_steps(m, 2)?;
    let ctx = min.ctx().clone();
    let zero = |min: &Presentation| {
        let z = Presentation::zero(&ctx);
        J2Data { j2: z.clone(), psi: ModMap::zero(&z, min) }
    };
    let (d1, f1) = &steps[0];
    if f1.is_empty() {
        return Ok(zero(&min));
    }
    let (d2, f2) = &steps[1];
    let neg = |t: &[i32]| -> Vec<i32> { t.iter().map(|x| -x).collect() };
    let (g, gdeg) = if f2.is_empty() {
        (ctx.identity(f1.len()), neg(f1))
    } else {
        ctx.syzygies(&d2.transpose(), &neg(f2), &neg(f1))?
    };
    if g.cols() == 0 {
        return Ok(zero(&min));
    }
    let j2 = Presentation::from_parts(&ctx, neg(&gdeg), f1.clone(), g.transpose());
    let big_psi = ctx
        .lift_matrix(&g, &neg(f1), &gdeg, &d1.transpose())?
        .ok_or_else(|| Error::Invalid("dual presentation does not factor through the syzygy".into()))?;
    let psi = ModMap::new(j2, min, big_psi.transpose())?.minimized()?;
    Ok(J2Data { j2: psi.source.clone(), psi })
}

pub fn j2(m: &Presentation) -> Result<Presentation> {
    Ok(j2_psi(m)?.j2)
}

pub fn psi(m: &Presentation) -> Result<ModMap> {
    Ok(j2_psi(m)?.psi)
}

/// The natural map `L → Ωⁿ Tr Ωⁿ Tr L`, `n ≥ 1`, read off by comparing the
/// standard resolution of `L` with a resolution of `Coker d_L^{n-1}`.
pub fn natural_map(l: &Presentation, n: usize) -> Result<ModMap> {
    if n == 0 {
        return Err(Error::Invalid("natural map needs n >= 1".into()));
    }
    let fl = standard_resolution(l, -1, n as i32)?;
    let c = &fl.complex;
    let ctx = c.ctx().clone();
    let top = c.twists(n as i32)?.to_vec();
    if top.is_empty() {
        return Ok(ModMap::zero(&fl.module, &Presentation::zero(&ctx)));
    }
    // P_0 = F^n, P_1 = F^{n-1}, P_{k+1} = syzygies of ∂_k.
    let mut p: Vec<Vec<i32>> = vec![top, c.twists(n as i32 - 1)?.to_vec()];
    let mut del: Vec<Matrix> = vec![ctx.zeros(0, 0), c.diff(n as i32 - 1)?];
    for k in 1..=n {
        let (s, sdeg) = if p[k].is_empty() {
            (ctx.zeros(0, 0), Vec::new())
        } else {
            ctx.syzygies(&del[k], &p[k - 1], &p[k])?
        };
        del.push(s);
        p.push(sdeg);
    }
    let target = Presentation::from_parts(&ctx, p[n].clone(), p[n + 1].clone(), del[n + 1].clone());
    let mut g = ctx.identity(p[1].len());
    for k in 2..=n {
        let src = c.twists((n - k) as i32)?;
        let rhs = ctx.mat_mul(&g, &c.diff((n - k) as i32)?);
        g = if p[k].is_empty() || src.is_empty() {
            ctx.zeros(p[k].len(), src.len())
        } else {
            ctx.lift_matrix(&del[k], &p[k - 1], &p[k], &rhs)?
                .ok_or_else(|| Error::Invalid(format!("comparison map does not lift at step {k}")))?
        };
    }
    ModMap::new(fl.module, target, g)?.minimized()
}

/// `a∘a_inv - id` and `a_inv∘a - id` both factor through projectives.
pub fn check_stable_iso_certificate(a: &ModMap, a_inv: &ModMap) -> Result<bool> {
    let left = a.compose(a_inv)?.sub(&ModMap::identity(&a.target))?;
    let right = a_inv.compose(a)?.sub(&ModMap::identity(&a.source))?;
    Ok(left.factors_through_projective()? && right.factors_through_projective()?)
}

/// Necessary condition for `M ≅ N` up to free summands: equal Betti tables
/// and Hilbert functions once free summands are removed.
pub fn stably_similar(m: &Presentation, n: &Presentation) -> Result<bool> {
    if stable_betti(m, 2)? != stable_betti(n, 2)? {
        return Ok(false);
    }
    let (m, n) = (m.minimal()?, n.minimal()?);
    let lo = m.gens().iter().chain(n.gens()).copied().min().unwrap_or(0);
    Ok(stable_hilbert(&m, lo)? == stable_hilbert(&n, lo)?)
}

const HF_SPAN: i32 = 4;

/// Hilbert function on `lo..=lo + HF_SPAN` with free summands subtracted.
fn stable_hilbert(m: &Presentation, lo: i32) -> Result<Vec<i64>> {
    let free = free_rank(m)?;
    let mut out: Vec<i64> = hilbert_function(m, lo, lo + HF_SPAN)?.into_iter().map(|v| v as i64).collect();
    let ring = hilbert_function(&Presentation::free(m.ctx(), vec![0]), 0, HF_SPAN)?;
    for (deg, r) in &free {
        for (i, v) in out.iter_mut().enumerate() {
            let t = lo + i as i32 - deg;
            if (0..=HF_SPAN).contains(&t) {
                *v -= (*r * ring[t as usize]) as i64;
            }
        }
    }
    Ok(out)
}

/// `0 → Ker f → Ker_f → Ω¹(Cok f) → 0` with its verification.
#[derive(Clone, Debug)]
pub struct KernelSequence {
    pub kernel: Presentation,
    pub pseudo_ker: Presentation,
    pub omega: Presentation,
    pub incl: ModMap,
    pub proj: ModMap,
    pub exact: bool,
}

pub fn kernel_sequence(f: &ModMap) -> Result<KernelSequence> {
    let data = cone_of(f)?;
    let ctx = data.map.ctx().clone();
    let c = &data.cone;
    let pker = Presentation::from_parts(&ctx, c.twists(-1)?.to_vec(), c.twists(-2)?.to_vec(), c.diff(-2)?);
    let b = &data.map.target;
    let phi = &data.map.gen_matrix;

    let kin = data.map.kernel()?;
    let k = &kin.gen_matrix;
    let y = if k.cols() == 0 || b.num_rels() == 0 {
        ctx.zeros(b.num_rels(), k.cols())
    } else {
        ctx.lift_matrix(b.matrix(), b.gens(), b.rels(), &ctx.mat_mul(phi, k))?
            .ok_or_else(|| Error::Invalid("kernel is not sent into the target relations".into()))?
    };
    let incl_m = Matrix::vstack(ctx.ring(), k.cols(), &[k, &y.neg()]);
    let incl = ModMap::new(kin.source.clone(), pker.clone(), incl_m)?;

    let g = Matrix::hstack(ctx.ring(), b.num_gens(), &[phi, b.matrix()]);
    let free_b = Presentation::free(&ctx, b.gens().to_vec());
    let to_free = ModMap::new(pker.clone(), free_b, g.clone())?;
    let image = to_free.image()?;
    let omega = image.source.clone();
    let z = if omega.num_gens() == 0 {
        ctx.zeros(0, g.cols())
    } else {
        ctx.lift_matrix(&image.gen_matrix, b.gens(), omega.gens(), &g)?
            .ok_or_else(|| Error::Invalid("map does not factor through its image".into()))?
    };
    let proj = ModMap::new(pker.clone(), omega.clone(), z)?;
    let exact = incl.is_injective()? && homology_at(&incl, &proj)?.is_zero()? && proj.is_surjective()?;
    Ok(KernelSequence { kernel: kin.source, pseudo_ker: pker, omega, incl, proj, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{gallery, make_ring, RingCtx, RingSpec};
    use crate::stable::is_rbm;
    use std::sync::Arc;

    fn residue_field(ctx: &Arc<RingCtx>) -> Presentation {
        let vars: Vec<_> = (0..ctx.vars().len()).map(|i| ctx.ring().var(i)).collect();
        Presentation::new(ctx, vec![0], Matrix::from_rows(1, vars.len(), vars)).unwrap()
    }

    fn mat(ctx: &Arc<RingCtx>, rows: usize, cols: usize, entries: &[&str]) -> Matrix {
        Matrix::from_rows(rows, cols, entries.iter().map(|s| ctx.parse(s).unwrap()).collect())
    }

    #[test]
    fn torsionless_examples() {
        let d = gallery::dual_numbers();
        assert!(torsionless(&Presentation::free(&d, vec![0, 1])).unwrap());
        assert!(torsionless(&residue_field(&d)).unwrap());
        assert!(torsionless_by_evaluation(&residue_field(&d)).unwrap());
        let n = gallery::node();
        assert!(!torsionless(&residue_field(&n)).unwrap());
        assert!(!torsionless_by_evaluation(&residue_field(&n)).unwrap());
    }

    #[test]
    fn psi_of_free_module_is_zero() {
        let r = gallery::node();
        let data = j2_psi(&Presentation::free(&r, vec![0])).unwrap();
        assert!(data.j2.is_zero().unwrap());
        assert!(is_rbm(&data.psi).unwrap().rbm);
    }

    #[test]
    fn psi_over_self_injective_ring() {
        let r = gallery::dual_numbers();
        let k = residue_field(&r);
        let data = j2_psi(&k).unwrap();
        assert!(stably_similar(&data.j2, &k).unwrap());
        assert!(is_rbm(&data.psi).unwrap().rbm);
        assert!(ext_dual_vanishes(&k).unwrap());
    }

    #[test]
    fn psi_over_embedded_line() {
        let r = gallery::embedded_line();
        // R/(x, y): Ext¹ has a nonzero dual and ψ is not rbm.
        let m = Presentation::new(&r, vec![0], mat(&r, 1, 2, &["x", "y"])).unwrap();
        assert!(!ext(&m, 1).unwrap().is_zero().unwrap());
        assert!(!ext_dual_vanishes(&m).unwrap());
        assert!(!is_rbm(&psi(&m).unwrap()).unwrap().rbm);
        // The residue field: R has positive depth, so Ext¹(k, R) is a sum of
        // copies of k and its dual vanishes.
        let k = residue_field(&r);
        assert!(!ext(&k, 1).unwrap().is_zero().unwrap());
        assert!(ext_dual_vanishes(&k).unwrap());
        assert!(is_rbm(&psi(&k).unwrap()).unwrap().rbm);
    }

    #[test]
    fn hypersurface_residue_field_has_vanishing_ext_dual() {
        let r = make_ring(RingSpec::new(&["x", "y"], &["x^2 - y^2"]).gorenstein(true)).unwrap();
        assert!(ext_dual_vanishes(&residue_field(&r)).unwrap());
    }

    #[test]
    fn stable_iso_certificates() {
        let r = gallery::node();
        let k = residue_field(&r).minimal().unwrap();
        assert!(check_stable_iso_certificate(&ModMap::identity(&k), &ModMap::identity(&k)).unwrap());
        let sum = Presentation::direct_sum(&r, &[&k, &Presentation::free(&r, vec![0])]);
        let inc = ModMap::new(k.clone(), sum.clone(), mat(&r, 2, 1, &["1", "0"])).unwrap();
        let pr = ModMap::new(sum, k.clone(), mat(&r, 1, 2, &["1", "0"])).unwrap();
        assert!(check_stable_iso_certificate(&inc, &pr).unwrap());
        let z = ModMap::zero(&k, &k);
        assert!(!check_stable_iso_certificate(&z, &z).unwrap());
    }

    #[test]
    fn kernel_sequence_of_projection() {
        let r = gallery::dual_numbers();
        let k = residue_field(&r);
        let f = ModMap::new(Presentation::free(&r, vec![0]), k, mat(&r, 1, 1, &["1"])).unwrap();
        let seq = kernel_sequence(&f).unwrap();
        assert!(seq.exact);
        assert!(stably_similar(&seq.pseudo_ker, &seq.kernel).unwrap());
    }

    #[test]
    fn natural_map_over_polynomial_ring_has_zero_target() {
        let r = gallery::polynomial3();
        let l = transpose(&residue_field(&r)).unwrap();
        let phi = natural_map(&l, 3).unwrap();
        assert!(phi.target.is_zero().unwrap());
        let t = crate::stable::theta(&phi).unwrap();
        assert!(t.check.perfect);
        let da = DualModule::of(&t.a).unwrap();
        let db = DualModule::of(&t.middle).unwrap();
        let dc = DualModule::of(&t.c).unwrap();
        let inj_dual = t.inj.dual_between(&da, &db).unwrap();
        let surj_dual = t.surj.dual_between(&db, &dc).unwrap();
        assert!(!crate::stable::is_perfect_exact(&surj_dual, &inj_dual).unwrap().perfect);
        assert!(!ext(&residue_field(&r), 3).unwrap().is_zero().unwrap());
    }
}
