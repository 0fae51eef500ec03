//! Seeded random modules and homomorphisms for the property suites.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::Poly;
use crate::error::Result;
use crate::fmod::{monomials_of_degree, ModMap, Presentation};
use crate::matrix::Matrix;
use crate::ring::RingCtx;

/// Shape limits for sampled modules.
#[derive(Clone, Copy, Debug)]
pub struct SampleShape {
    pub max_gens: usize,
    pub max_rels: usize,
    /// Relations sit between one and `max_rel_gap` degrees above the generators.
    pub max_rel_gap: i32,
}

impl Default for SampleShape {
    fn default() -> Self {
        SampleShape { max_gens: 2, max_rels: 3, max_rel_gap: 2 }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Homogeneous element of degree `d` with small integer coefficients,
/// reduced modulo the ideal.
pub fn random_poly(ctx: &RingCtx, d: i32, rng: &mut ChaCha8Rng) -> Poly {
    let field = ctx.field();
    let mut p = ctx.zero();
    for m in monomials_of_degree(&ctx.order().weights, d) {
        if rng.gen_bool(0.5) {
            let c: i64 = rng.gen_range(-2..=2);
            if c != 0 {
                p = ctx.add(&p, &Poly::term(field, m, field.from_i64(c)));
            }
        }
    }
    ctx.reduce(&p)
}

/// A random finitely presented module; relation columns are never zero.
pub fn random_module(ctx: &Arc<RingCtx>, shape: SampleShape, rng: &mut ChaCha8Rng) -> Result<Presentation> {
    let ngens = rng.gen_range(1..=shape.max_gens);
    let gens: Vec<i32> = (0..ngens).map(|_| rng.gen_range(0..=1)).collect();
    let top = *gens.iter().max().expect("at least one generator");
    let nrels = rng.gen_range(1..=shape.max_rels);
    let mut cols = Vec::new();
    for _ in 0..nrels {
        let deg = top + rng.gen_range(1..=shape.max_rel_gap);
        for _attempt in 0..8 {
            let col: Vec<Poly> = gens.iter().map(|g| random_poly(ctx, deg - g, rng)).collect();
            if col.iter().any(|p| !p.is_zero()) {
                cols.push(col);
                break;
            }
        }
    }
    Presentation::new(ctx, gens, Matrix::from_columns(ctx.ring(), ngens, &cols))
}

/// Generators of `Hom(A, B)` as pairs `(gen_matrix, degree)`, where a
/// generator of degree `s` times a form of degree `-s` is a degree-0 map: solutions of
/// `Φ·rel_A = rel_B·Y`, read off from the syzygies of the linear system.
pub fn hom_generators(a: &Presentation, b: &Presentation) -> Result<Vec<(Matrix, i32)>> {
    let ctx = a.ctx();
    let (na, ma) = (a.num_gens(), a.num_rels());
    let (nb, mb) = (b.num_gens(), b.num_rels());
    if na == 0 || nb == 0 {
        return Ok(Vec::new());
    }
    let rows = nb * ma;
    let phi_cols = nb * na;
    let mut big = ctx.zeros(rows.max(1), phi_cols + mb * ma);
    let mut row_twists = vec![0; rows.max(1)];
    let mut col_twists = vec![0; phi_cols + mb * ma];
    for i in 0..nb {
        for q in 0..na {
            col_twists[i * na + q] = b.gens()[i] - a.gens()[q];
        }
    }
    for p in 0..mb {
        for j in 0..ma {
            col_twists[phi_cols + p * ma + j] = b.rels()[p] - a.rels()[j];
        }
    }
    for i in 0..nb {
        for j in 0..ma {
            let r = i * ma + j;
            row_twists[r] = b.gens()[i] - a.rels()[j];
            for q in 0..na {
                big.set(r, i * na + q, a.matrix().get(q, j).clone());
            }
            for p in 0..mb {
                big.set(r, phi_cols + p * ma + j, b.matrix().get(i, p).neg());
            }
        }
    }
    if rows == 0 {
        // No source relations: every matrix of degree-0 entries is a map.
        row_twists[0] = 0;
    }
    let (syz, sdeg) = ctx.syzygies(&big, &row_twists, &col_twists)?;
    let mut out = Vec::new();
    for g in 0..syz.cols() {
        let phi = Matrix::from_rows(nb, na, (0..phi_cols).map(|c| syz.get(c, g).clone()).collect());
        if !ctx.is_zero_matrix(&phi) {
            out.push((phi, sdeg[g]));
        }
    }
    Ok(out)
}

/// A random degree-0 homomorphism `A → B` combining the Hom generators.
pub fn random_map(a: &Presentation, b: &Presentation, rng: &mut ChaCha8Rng) -> Result<ModMap> {
    let ctx = a.ctx();
    let mut phi = ctx.zeros(b.num_gens(), a.num_gens());
    for (g, deg) in hom_generators(a, b)? {
        if deg > 0 {
            continue;
        }
        let c = random_poly(ctx, -deg, rng);
        if !c.is_zero() {
            phi = ctx.mat_add(&phi, &g.map(|e| ctx.mul(e, &c)));
        }
    }
    ModMap::new(a.clone(), b.clone(), phi)
}

/// A random map between two random modules.
pub fn random_morphism(ctx: &Arc<RingCtx>, shape: SampleShape, rng: &mut ChaCha8Rng) -> Result<ModMap> {
    let a = random_module(ctx, shape, rng)?;
    let b = random_module(ctx, shape, rng)?;
    random_map(&a, &b, rng)
}

/// A random epimorphism `F ⊕ A → B`, with `F` the free cover of `B`.
pub fn random_epimorphism(ctx: &Arc<RingCtx>, shape: SampleShape, rng: &mut ChaCha8Rng) -> Result<ModMap> {
    let b = random_module(ctx, shape, rng)?.minimal()?;
    let a = random_module(ctx, shape, rng)?;
    let g = random_map(&a, &b, rng)?;
    let cover = Presentation::free(ctx, b.gens().to_vec());
    let source = Presentation::direct_sum(ctx, &[&cover, &a]);
    let phi = Matrix::hstack(ctx.ring(), b.num_gens(), &[&ctx.identity(b.num_gens()), &g.gen_matrix]);
    ModMap::new(source, b, phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::gallery;

    #[test]
    fn sampling_is_deterministic() {
        let r = gallery::node();
        let a = random_module(&r, SampleShape::default(), &mut rng(7)).unwrap();
        let b = random_module(&r, SampleShape::default(), &mut rng(7)).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        assert_eq!(a.gens(), b.gens());
    }

    #[test]
    fn hom_generators_of_residue_field() {
        let r = gallery::dual_numbers();
        let x = r.parse("x").unwrap();
        let k = Presentation::new(&r, vec![0], Matrix::from_rows(1, 1, vec![x.clone()])).unwrap();
        let free = Presentation::free(&r, vec![0]);
        // Hom(k, R) is generated by 1 ↦ x, which raises degrees by one.
        let gens = hom_generators(&k, &free).unwrap();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].1, 1);
        // Hom(R, k) is generated by the projection.
        let gens = hom_generators(&free, &k).unwrap();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].1, 0);
    }

    #[test]
    fn random_maps_are_well_defined() {
        let mut g = rng(11);
        for (_, r) in gallery::suite() {
            for _ in 0..5 {
                let f = random_morphism(&r, SampleShape::default(), &mut g).unwrap();
                assert_eq!(f.gen_matrix.rows(), f.target.num_gens());
                let e = random_epimorphism(&r, SampleShape::default(), &mut g).unwrap();
                assert!(e.is_surjective().unwrap());
            }
        }
    }
}
