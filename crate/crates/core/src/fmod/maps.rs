use crate::error::{Error, Result};
use crate::fmod::{ModMap, Presentation};
use crate::matrix::Matrix;

/// Lifts `gen_matrix · rel_A` through `rel_B`, returning the certificate.
pub(crate) fn validate(source: &Presentation, target: &Presentation, gen_matrix: &Matrix) -> Result<Matrix> {
    let ctx = source.ctx();
    let image = ctx.mat_mul(gen_matrix, source.matrix());
    let mut cols = Vec::with_capacity(image.cols());
    for j in 0..image.cols() {
        match ctx.lift(target.matrix(), target.gens(), target.rels(), &image.column(j))? {
            Some(c) => cols.push(c),
            None => return Err(Error::IllDefinedMap { relation: j }),
        }
    }
    Ok(Matrix::from_columns(ctx.ring(), target.num_rels(), &cols))
}

/// Minimal generators, inside the free cover of `target`, of the preimage
/// of `im(rel_target)` under `phi : F(src) → F(target.gens)`.
fn preimage_generators(target: &Presentation, phi: &Matrix, src: &[i32]) -> Result<(Matrix, Vec<i32>)> {
    let ctx = target.ctx();
    let n = phi.cols();
    let combined = Matrix::hstack(ctx.ring(), target.num_gens(), &[phi, target.matrix()]);
    let mut col_twists = src.to_vec();
    col_twists.extend_from_slice(target.rels());
    let (s, _) = ctx.syzygies(&combined, target.gens(), &col_twists)?;
    let top = s.select_rows(&(0..n).collect::<Vec<_>>());
    ctx.minimal_columns(&top, src)
}

/// `coker` of `[k | extra]` restricted to the `k` block: presents
/// `(im k + im extra)/im extra` on the generators `k`.
fn quotient_by(
    ambient: &Presentation,
    k: &Matrix,
    kdeg: &[i32],
    extra: &Matrix,
    extra_deg: &[i32],
) -> Result<Presentation> {
    let ctx = ambient.ctx();
    let combined = Matrix::hstack(ctx.ring(), ambient.num_gens(), &[k, extra]);
    let mut col_twists = kdeg.to_vec();
    col_twists.extend_from_slice(extra_deg);
    let (s, sdeg) = ctx.syzygies(&combined, ambient.gens(), &col_twists)?;
    let top = s.select_rows(&(0..k.cols()).collect::<Vec<_>>());
    Ok(Presentation::from_parts(ctx, kdeg.to_vec(), sdeg, top))
}

impl ModMap {
    /// The inclusion `Ker f → source`, with a minimal presentation of the kernel.
    pub fn kernel(&self) -> Result<ModMap> {
        let ctx = self.ctx();
        if self.source.num_gens() == 0 {
            return Ok(ModMap::zero(&Presentation::zero(ctx), &self.source));
        }
        let (k, kdeg) = preimage_generators(&self.target, &self.gen_matrix, self.source.gens())?;
        if k.cols() == 0 {
            return Ok(ModMap::zero(&Presentation::zero(ctx), &self.source));
        }
        let ker = quotient_by(&self.source, &k, &kdeg, self.source.matrix(), self.source.rels())?;
        let min = ker.minimize()?;
        let incl = ctx.mat_mul(&k, &min.to_old);
        ModMap::new(min.pres, self.source.clone(), incl)
    }

    /// The projection `target → Coker f`, with a minimal presentation of the cokernel.
    pub fn cokernel(&self) -> Result<ModMap> {
        let ctx = self.ctx();
        let b = &self.target;
        let m = Matrix::hstack(ctx.ring(), b.num_gens(), &[b.matrix(), &self.gen_matrix]);
        let mut rels = b.rels().to_vec();
        rels.extend_from_slice(self.source.gens());
        let min = Presentation::from_parts(ctx, b.gens().to_vec(), rels, m).minimize()?;
        ModMap::new(b.clone(), min.pres, min.to_new)
    }

    /// The image of `f` as a minimal presentation, with the inclusion into the target.
    pub fn image(&self) -> Result<ModMap> {
        let ctx = self.ctx();
        let (k, kdeg) = ctx.minimal_columns(&self.gen_matrix, self.target.gens())?;
        if k.cols() == 0 {
            return Ok(ModMap::zero(&Presentation::zero(ctx), &self.target));
        }
        let im = quotient_by(&self.target, &k, &kdeg, self.target.matrix(), self.target.rels())?;
        let min = im.minimize()?;
        let incl = ctx.mat_mul(&k, &min.to_old);
        ModMap::new(min.pres, self.target.clone(), incl)
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.source.num_gens() == 0)
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.cokernel()?.target.num_gens() == 0)
    }

    /// True when every generator is sent into the target relations.
    pub fn is_zero(&self) -> Result<bool> {
        let ctx = self.ctx();
        Ok(ctx
            .lift_matrix(self.target.matrix(), self.target.gens(), self.target.rels(), &self.gen_matrix)?
            .is_some())
    }

    /// Difference `self - other` of parallel maps.
    pub fn sub(&self, other: &ModMap) -> Result<ModMap> {
        if self.gen_matrix.rows() != other.gen_matrix.rows() || self.gen_matrix.cols() != other.gen_matrix.cols() {
            return Err(Error::ShapeMismatch("maps are not parallel".into()));
        }
        let ctx = self.ctx();
        Ok(ModMap {
            source: self.source.clone(),
            target: self.target.clone(),
            gen_matrix: ctx.mat_sub(&self.gen_matrix, &other.gen_matrix),
            cert: ctx.mat_sub(&self.cert, &other.cert),
        })
    }

    /// True when the map factors through a projective module, decided by
    /// lifting through the projective cover of the target: one needs `Y`
    /// with `rel_B·Y·rel_A = -gen_matrix·rel_A`.
    pub fn factors_through_projective(&self) -> Result<bool> {
        let ctx = self.ctx();
        let (a, b) = (&self.source, &self.target);
        let (na, ma) = (a.num_gens(), a.num_rels());
        let (nb, mb) = (b.num_gens(), b.num_rels());
        if na == 0 || nb == 0 || self.is_zero()? {
            return Ok(true);
        }
        let target = ctx.mat_mul(&self.gen_matrix, a.matrix());
        let rows = nb * ma;
        let cols = mb * na;
        let mut big = ctx.zeros(rows, cols);
        let mut row_twists = vec![0; rows];
        let mut col_twists = vec![0; cols];
        let mut rhs = vec![ctx.zero(); rows];
        for i in 0..nb {
            for j in 0..ma {
                let r = i * ma + j;
                row_twists[r] = b.gens()[i] - a.rels()[j];
                rhs[r] = target.get(i, j).clone();
                for p in 0..mb {
                    let bp = b.matrix().get(i, p);
                    if bp.is_zero() {
                        continue;
                    }
                    for q in 0..na {
                        let aq = a.matrix().get(q, j);
                        if !aq.is_zero() {
                            big.set(r, p * na + q, ctx.mul(bp, aq));
                        }
                    }
                }
            }
        }
        for p in 0..mb {
            for q in 0..na {
                col_twists[p * na + q] = b.rels()[p] - a.gens()[q];
            }
        }
        Ok(ctx.lift(&big, &row_twists, &col_twists, &rhs)?.is_some())
    }
}

/// Homology at `B` of `A → B → C`: `ker β / im α`, minimal.
pub fn homology_at(alpha: &ModMap, beta: &ModMap) -> Result<Presentation> {
    let b = &alpha.target;
    let ctx = b.ctx();
    if b.num_gens() == 0 {
        return Ok(Presentation::zero(ctx));
    }
    let (k, kdeg) = preimage_generators(&beta.target, &beta.gen_matrix, b.gens())?;
    if k.cols() == 0 {
        return Ok(Presentation::zero(ctx));
    }
    let extra = Matrix::hstack(ctx.ring(), b.num_gens(), &[&alpha.gen_matrix, b.matrix()]);
    let mut extra_deg = alpha.source.gens().to_vec();
    extra_deg.extend_from_slice(b.rels());
    quotient_by(b, &k, &kdeg, &extra, &extra_deg)?.minimal()
}
