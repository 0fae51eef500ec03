use crate::complexes::{ChainMap, Complex};
use crate::error::{Error, Result};
use crate::fmod::{homology_at, BettiTable, DualModule, ModMap, Presentation};
use crate::matrix::Matrix;
use crate::stable::{lift_chain_map, standard_resolution, StandardResolution};

/// The lifted chain map of a minimized `f` and its mapping cone on `[-2, 0]`.
#[derive(Clone, Debug)]
pub struct ConeData {
    /// `f` transported to minimal presentations of source and target.
    pub map: ModMap,
    pub fa: StandardResolution,
    pub fb: StandardResolution,
    pub chain: ChainMap,
    pub cone: Complex,
}

pub fn cone_of(f: &ModMap) -> Result<ConeData> {
    cone_with_window(f, -2, 1)
}

/// As [`cone_of`], resolving on `[lo, hi]`, which must contain `[-2, 1]`.
pub fn cone_with_window(f: &ModMap, lo: i32, hi: i32) -> Result<ConeData> {
    if lo > -2 {
        return Err(Error::WindowTooSmall { degree: -2, lo, hi });
    }
    if hi < 1 {
        return Err(Error::WindowTooSmall { degree: 1, lo, hi });
    }
    let map = f.minimized()?;
    let fa = standard_resolution(&map.source, lo, hi)?;
    let fb = standard_resolution(&map.target, lo, hi)?;
    let chain = lift_chain_map(&map, &fa, &fb)?;
    let cone = chain.cone_window(-2, 0)?;
    Ok(ConeData { map, fa, fb, chain, cone })
}

/// Pseudo-kernel `n_f : Ker_f → A` and pseudo-cokernel `c_f : B → Cok_f`
/// of the minimized map, with their factorization certificates.
#[derive(Clone, Debug)]
pub struct PseudoKernelResult {
    pub pseudo_ker: Presentation,
    pub n_f: ModMap,
    pub pseudo_coker: Presentation,
    pub c_f: ModMap,
    /// `f ∘ n_f` factors through a projective.
    pub kernel_certified: bool,
    /// `c_f ∘ f` factors through a projective.
    pub cokernel_certified: bool,
}

struct RawPseudo {
    /// `coker d_C^{-2}` on the generators `A^0 ⊕ B^{-1}`.
    ker: Presentation,
    /// `coker d_C^{-1}` on the generators `A^1 ⊕ B^0`.
    coker: Presentation,
}

fn raw_pseudo(data: &ConeData) -> Result<RawPseudo> {
    let c = &data.cone;
    let ctx = c.ctx();
    let ker = Presentation::from_parts(ctx, c.twists(-1)?.to_vec(), c.twists(-2)?.to_vec(), c.diff(-2)?);
    let coker = Presentation::from_parts(ctx, c.twists(0)?.to_vec(), c.twists(-1)?.to_vec(), c.diff(-1)?);
    Ok(RawPseudo { ker, coker })
}

pub fn pseudo_kernel_cokernel(f: &ModMap) -> Result<PseudoKernelResult> {
    let data = cone_of(f)?;
    pseudo_from_cone(&data)
}

pub fn pseudo_from_cone(data: &ConeData) -> Result<PseudoKernelResult> {
    let ctx = data.map.ctx().clone();
    let raw = raw_pseudo(data)?;
    let a = &data.map.source;
    let b = &data.map.target;
    let (na, nb1) = (a.num_gens(), data.fb.complex.rank(-1)?);
    let (na1, nb) = (data.fa.complex.rank(1)?, b.num_gens());

    // [I 0] : A^0 ⊕ B^{-1} → A^0
    let proj = Matrix::hstack(ctx.ring(), na, &[&ctx.identity(na), &ctx.zeros(na, nb1)]);
    let ker_min = raw.ker.minimize()?;
    let n_f = ModMap::new(ker_min.pres.clone(), a.clone(), ctx.mat_mul(&proj, &ker_min.to_old))?;

    // [0; I] : B^0 → A^1 ⊕ B^0
    let incl = Matrix::vstack(ctx.ring(), nb, &[&ctx.zeros(na1, nb), &ctx.identity(nb)]);
    let coker_min = raw.coker.minimize()?;
    let c_f = ModMap::new(b.clone(), coker_min.pres.clone(), ctx.mat_mul(&coker_min.to_new, &incl))?;

    let kernel_certified = data.map.compose(&n_f)?.factors_through_projective()?;
    let cokernel_certified = c_f.compose(&data.map)?.factors_through_projective()?;
    Ok(PseudoKernelResult {
        pseudo_ker: ker_min.pres,
        n_f,
        pseudo_coker: coker_min.pres,
        c_f,
        kernel_certified,
        cokernel_certified,
    })
}

/// Outcome of the rbm test: `H^{-1}` of the cone and its Betti table.
#[derive(Clone, Debug)]
pub struct RbmWitness {
    pub rbm: bool,
    pub h_minus_one: Presentation,
    pub betti: BettiTable,
}

pub fn is_rbm(f: &ModMap) -> Result<RbmWitness> {
    let data = cone_of(f)?;
    rbm_from_cone(&data)
}

pub fn rbm_from_cone(data: &ConeData) -> Result<RbmWitness> {
    let h = data.cone.homology(-1)?;
    let rbm = h.is_zero()?;
    let betti = if rbm { Vec::new() } else { h.betti(1)? };
    Ok(RbmWitness { rbm, h_minus_one: h, betti })
}

/// Exactness of `0 → A → B → C → 0` and of its dual `0 → C* → B* → A* → 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PerfectCheck {
    pub exact: bool,
    pub dual_exact: bool,
    pub perfect: bool,
}

fn short_exact(inj: &ModMap, surj: &ModMap) -> Result<bool> {
    Ok(inj.is_injective()? && homology_at(inj, surj)?.is_zero()? && surj.is_surjective()?)
}

/// Decides whether `0 → A --inj--> B --surj--> C → 0` is perfectly exact.
pub fn is_perfect_exact(inj: &ModMap, surj: &ModMap) -> Result<PerfectCheck> {
    if inj.target.gens() != surj.source.gens() || inj.target.matrix() != surj.source.matrix() {
        return Err(Error::ShapeMismatch("maps are not composable".into()));
    }
    if !surj.compose(inj)?.is_zero()? {
        return Err(Error::NotAComplex);
    }
    let exact = short_exact(inj, surj)?;
    let da = DualModule::of(&inj.source)?;
    let db = DualModule::of(&inj.target)?;
    let dc = DualModule::of(&surj.target)?;
    let surj_dual = surj.dual_between(&db, &dc)?;
    let inj_dual = inj.dual_between(&da, &db)?;
    let dual_exact = short_exact(&surj_dual, &inj_dual)?;
    Ok(PerfectCheck { exact, dual_exact, perfect: exact && dual_exact })
}

/// Same check after moving every module to a minimal presentation; used to
/// cross-validate [`is_perfect_exact`].
pub fn is_perfect_exact_minimized(inj: &ModMap, surj: &ModMap) -> Result<PerfectCheck> {
    let ctx = inj.ctx();
    let ma = inj.source.minimize()?;
    let mb = inj.target.minimize()?;
    let mc = surj.target.minimize()?;
    let inj_m = ModMap::new(ma.pres.clone(), mb.pres.clone(), ctx.mat_mul(&ctx.mat_mul(&mb.to_new, &inj.gen_matrix), &ma.to_old))?;
    let surj_m = ModMap::new(mb.pres, mc.pres, ctx.mat_mul(&ctx.mat_mul(&mc.to_new, &surj.gen_matrix), &mb.to_old))?;
    is_perfect_exact(&inj_m, &surj_m)
}

/// `θ_f : 0 → A → B ⊕ F_A^1 → Cok_f → 0` for an rbm map.
#[derive(Clone, Debug)]
pub struct ThetaSequence {
    pub a: Presentation,
    pub middle: Presentation,
    pub c: Presentation,
    pub inj: ModMap,
    pub surj: ModMap,
    pub check: PerfectCheck,
}

pub fn theta(f: &ModMap) -> Result<ThetaSequence> {
    let data = cone_of(f)?;
    let w = rbm_from_cone(&data)?;
    if !w.rbm {
        return Err(Error::NotRbm { betti: w.betti });
    }
    theta_from_cone(&data)
}

/// Builds `θ_f` from a cone; the caller must know the map is rbm.
pub fn theta_from_cone(data: &ConeData) -> Result<ThetaSequence> {
    let ctx = data.map.ctx().clone();
    let a = data.map.source.clone();
    let b = &data.map.target;
    let a1 = data.fa.complex.twists(1)?.to_vec();
    let (nb, na1) = (b.num_gens(), a1.len());

    let mut gens = b.gens().to_vec();
    gens.extend_from_slice(&a1);
    let rel = Matrix::vstack(ctx.ring(), b.num_rels(), &[b.matrix(), &ctx.zeros(na1, b.num_rels())]);
    let mut middle = Presentation::from_parts(&ctx, gens, b.rels().to_vec(), rel);
    middle.minimal = true;

    let eps = data.fa.complex.diff(0)?;
    let inj_m = Matrix::vstack(ctx.ring(), a.num_gens(), &[&data.map.gen_matrix, &eps]);
    let inj = ModMap::new(a.clone(), middle.clone(), inj_m)?;

    // Cone degree 0 is A^1 ⊕ B^0; the middle lists B first.
    let raw = raw_pseudo(data)?;
    let swap = Matrix::vstack(
        ctx.ring(),
        nb + na1,
        &[
            &Matrix::hstack(ctx.ring(), na1, &[&ctx.zeros(na1, nb), &ctx.identity(na1).neg()]),
            &Matrix::hstack(ctx.ring(), nb, &[&ctx.identity(nb), &ctx.zeros(nb, na1)]),
        ],
    );
    let coker_min = raw.coker.minimize()?;
    let surj = ModMap::new(middle.clone(), coker_min.pres.clone(), ctx.mat_mul(&coker_min.to_new, &swap))?;
    let check = is_perfect_exact(&inj, &surj)?;
    Ok(ThetaSequence { a, middle, c: coker_min.pres, inj, surj, check })
}

/// The equivalent conditions on a morphism, evaluated independently.
#[derive(Clone, Debug)]
pub struct StableReport {
    pub rbm: bool,
    pub ker_torsionless: bool,
    pub pseudo_ker_torsionless: bool,
    pub h_minus_one_vanishes: bool,
    /// Stable Betti tables and Hilbert functions of `Ω¹ Cok_f` and `Ker_f` agree.
    pub syzygy_match: bool,
    pub gorenstein_fractions: bool,
    pub pseudo: PseudoKernelResult,
    pub h_minus_one_betti: BettiTable,
    pub theta: Option<ThetaSequence>,
}

impl StableReport {
    /// The equivalence the conditions satisfy over rings whose total ring of
    /// fractions is Gorenstein.
    pub fn all_agree(&self) -> bool {
        let v = [self.ker_torsionless, self.pseudo_ker_torsionless, self.h_minus_one_vanishes, self.syzygy_match];
        v.iter().all(|&b| b == self.rbm)
    }
}

pub fn rbm_report(f: &ModMap) -> Result<StableReport> {
    report_from_cone(&cone_of(f)?)
}

pub fn report_from_cone(data: &ConeData) -> Result<StableReport> {
    let w = rbm_from_cone(data)?;
    let pseudo = pseudo_from_cone(data)?;
    let ker = data.map.kernel()?.source;
    let ker_torsionless = crate::stable::torsionless(&ker)?;
    let pseudo_ker_torsionless = crate::stable::torsionless(&pseudo.pseudo_ker)?;
    let omega = crate::fmod::syzygy(&pseudo.pseudo_coker, 1)?;
    let syzygy_match = crate::stable::stably_similar(&omega, &pseudo.pseudo_ker)?;
    let theta = if w.rbm { Some(theta_from_cone(data)?) } else { None };
    Ok(StableReport {
        rbm: w.rbm,
        ker_torsionless,
        pseudo_ker_torsionless,
        h_minus_one_vanishes: w.rbm,
        syzygy_match,
        gorenstein_fractions: data.map.ctx().gorenstein_fractions(),
        pseudo,
        h_minus_one_betti: w.betti,
        theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{gallery, RingCtx};
    use std::sync::Arc;

    fn residue_field(ctx: &Arc<RingCtx>) -> Presentation {
        let vars: Vec<_> = (0..ctx.vars().len()).map(|i| ctx.ring().var(i)).collect();
        Presentation::new(ctx, vec![0], Matrix::from_rows(1, vars.len(), vars)).unwrap()
    }

    fn mat(ctx: &Arc<RingCtx>, rows: usize, cols: usize, entries: &[&str]) -> Matrix {
        Matrix::from_rows(rows, cols, entries.iter().map(|s| ctx.parse(s).unwrap()).collect())
    }

    #[test]
    fn identity_is_rbm_with_trivial_pseudo_objects() {
        let r = gallery::node();
        let k = residue_field(&r);
        let id = ModMap::identity(&k);
        assert!(is_rbm(&id).unwrap().rbm);
        let p = pseudo_kernel_cokernel(&id).unwrap();
        assert!(p.kernel_certified && p.cokernel_certified);
        assert!(p.pseudo_coker.is_zero().unwrap());
        assert!(crate::fmod::free_rank(&p.pseudo_ker).unwrap().values().sum::<usize>() == p.pseudo_ker.num_gens());
    }

    #[test]
    fn socle_inclusion_gives_perfect_theta() {
        let r = gallery::dual_numbers();
        let k = Presentation::new(&r, vec![1], mat(&r, 1, 1, &["x"])).unwrap();
        let f = ModMap::new(k, Presentation::free(&r, vec![0]), mat(&r, 1, 1, &["x"])).unwrap();
        assert!(is_rbm(&f).unwrap().rbm);
        let t = theta(&f).unwrap();
        assert!(t.check.perfect);
    }

    #[test]
    fn zero_map_on_residue_field_is_not_rbm() {
        let r = gallery::node();
        let k = residue_field(&r);
        let z = ModMap::zero(&k, &k);
        let w = is_rbm(&z).unwrap();
        assert!(!w.rbm);
        assert!(!w.betti.is_empty());
        assert!(matches!(theta(&z), Err(Error::NotRbm { .. })));
    }

    #[test]
    fn projection_onto_residue_field() {
        let r = gallery::node();
        let k = residue_field(&r);
        let f = ModMap::new(Presentation::free(&r, vec![0]), k.clone(), mat(&r, 1, 1, &["1"])).unwrap();
        let t = theta(&f).unwrap();
        assert!(t.check.exact && t.check.dual_exact);
        // Cok f = 0, so the pseudo-kernel is stably the kernel (x, y), and the
        // pseudo-cokernel is an extension whose syzygy is a quotient of it.
        let p = pseudo_kernel_cokernel(&f).unwrap();
        let ker = f.kernel().unwrap().source;
        assert!(crate::stable::stably_similar(&p.pseudo_ker, &ker).unwrap());
        assert!(crate::stable::stably_similar(&p.pseudo_coker, &k).unwrap());
    }

    #[test]
    fn split_and_self_injective_sequences_are_perfect() {
        let r = gallery::dual_numbers();
        let one = Presentation::free(&r, vec![0]);
        let two = Presentation::free(&r, vec![0, 0]);
        let inj = ModMap::new(one.clone(), two.clone(), mat(&r, 2, 1, &["1", "0"])).unwrap();
        let surj = ModMap::new(two, one, mat(&r, 1, 2, &["0", "1"])).unwrap();
        assert!(is_perfect_exact(&inj, &surj).unwrap().perfect);

        let k1 = Presentation::new(&r, vec![1], mat(&r, 1, 1, &["x"])).unwrap();
        let k0 = residue_field(&r);
        let free = Presentation::free(&r, vec![0]);
        let inj = ModMap::new(k1, free.clone(), mat(&r, 1, 1, &["x"])).unwrap();
        let surj = ModMap::new(free, k0, mat(&r, 1, 1, &["1"])).unwrap();
        let check = is_perfect_exact(&inj, &surj).unwrap();
        assert!(check.perfect);
        assert_eq!(check, is_perfect_exact_minimized(&inj, &surj).unwrap());
    }

    #[test]
    fn non_complex_is_rejected() {
        let r = gallery::dual_numbers();
        let one = Presentation::free(&r, vec![0]);
        let id = ModMap::identity(&one);
        assert_eq!(is_perfect_exact(&id, &id).unwrap_err(), Error::NotAComplex);
    }
}
