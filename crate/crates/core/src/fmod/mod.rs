//! Graded free modules, presented modules and their homomorphisms, with the
//! functors used throughout: minimal presentations, resolutions, duals,
//! transpose, syzygies and Ext.

mod dual;
mod maps;
mod minimize;
mod resolve;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::Poly;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::RingCtx;

pub use dual::{free_rank, hilbert_function, stable_betti, DualModule};
pub use maps::homology_at;
pub use minimize::Minimized;
pub use resolve::{ext, homology_of_frees, resolve, syzygy, transpose};
pub(crate) use dual::monomials_of_degree;
pub(crate) use resolve::resolution_steps;

/// One entry of a Betti table: `rank` generators of internal degree
/// `internal_deg` in homological degree `hom_deg`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BettiEntry {
    pub hom_deg: usize,
    pub internal_deg: i32,
    pub rank: usize,
}

pub type BettiTable = Vec<BettiEntry>;

/// Collapses a list of degrees into Betti entries for one homological degree.
pub(crate) fn betti_row(hom_deg: usize, twists: &[i32]) -> Vec<BettiEntry> {
    let mut degs = twists.to_vec();
    degs.sort_unstable();
    let mut out: Vec<BettiEntry> = Vec::new();
    for d in degs {
        match out.last_mut() {
            Some(e) if e.internal_deg == d => e.rank += 1,
            _ => out.push(BettiEntry { hom_deg, internal_deg: d, rank: 1 }),
        }
    }
    out
}

/// A graded free module `⊕ R(-t_i)`; generator `i` has degree `twists[i]`.
#[derive(Clone, Debug)]
pub struct FreeModule {
    pub ctx: Arc<RingCtx>,
    pub twists: Vec<i32>,
}

impl FreeModule {
    pub fn new(ctx: &Arc<RingCtx>, twists: Vec<i32>) -> FreeModule {
        FreeModule { ctx: ctx.clone(), twists }
    }

    pub fn zero(ctx: &Arc<RingCtx>) -> FreeModule {
        FreeModule::new(ctx, Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn dual(&self) -> FreeModule {
        FreeModule::new(&self.ctx, self.twists.iter().map(|t| -t).collect())
    }
}

/// Checks that entry `(i, j)` is homogeneous of degree `src[j] - tgt[i]`.
pub(crate) fn check_homogeneous(ctx: &RingCtx, m: &Matrix, tgt: &[i32], src: &[i32]) -> Result<()> {
    if m.rows() != tgt.len() || m.cols() != src.len() {
        return Err(Error::ShapeMismatch(format!(
            "matrix is {}x{} but the free modules have ranks {} and {}",
            m.rows(),
            m.cols(),
            tgt.len(),
            src.len()
        )));
    }
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            match m.get(i, j).homogeneous_degree(ctx.order()) {
                Ok(None) => {}
                Ok(Some(d)) if d == src[j] - tgt[i] => {}
                _ => return Err(Error::InhomogeneousEntry { row: i, col: j }),
            }
        }
    }
    Ok(())
}

/// A degree-0 map of free modules, `matrix` is `target.rank × source.rank`.
#[derive(Clone, Debug)]
pub struct FreeMap {
    pub source: FreeModule,
    pub target: FreeModule,
    pub matrix: Matrix,
}

impl FreeMap {
    pub fn new(source: FreeModule, target: FreeModule, matrix: Matrix) -> Result<FreeMap> {
        check_homogeneous(&source.ctx, &matrix, &target.twists, &source.twists)?;
        let matrix = source.ctx.reduce_matrix(&matrix);
        Ok(FreeMap { source, target, matrix })
    }

    pub(crate) fn new_unchecked(source: FreeModule, target: FreeModule, matrix: Matrix) -> FreeMap {
        debug_assert!(check_homogeneous(&source.ctx, &matrix, &target.twists, &source.twists).is_ok());
        FreeMap { source, target, matrix }
    }

    pub fn zero(source: FreeModule, target: FreeModule) -> FreeMap {
        let matrix = source.ctx.zeros(target.rank(), source.rank());
        FreeMap { source, target, matrix }
    }

    pub fn identity(f: &FreeModule) -> FreeMap {
        FreeMap { source: f.clone(), target: f.clone(), matrix: f.ctx.identity(f.rank()) }
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.source.ctx
    }

    /// `Hom(-, R)` of the map: transpose with negated twists.
    pub fn dual(&self) -> FreeMap {
        FreeMap {
            source: self.target.dual(),
            target: self.source.dual(),
            matrix: self.matrix.transpose(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FreeMap) -> Result<FreeMap> {
        if other.target.twists != self.source.twists {
            return Err(Error::ShapeMismatch("composable free maps need matching twists".into()));
        }
        Ok(FreeMap {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: self.ctx().mat_mul(&self.matrix, &other.matrix),
        })
    }

    /// No entry has a nonzero constant term.
    pub fn is_minimal(&self) -> bool {
        self.matrix.entries().iter().all(|p| p.constant_coeff().is_zero())
    }
}

/// A finitely presented module `coker(pres)`: generators are the target
/// basis, relations the source basis.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub pres: FreeMap,
    pub minimal: bool,
}

impl Presentation {
    /// Presentation with generator degrees `gens`; relation degrees are
    /// inferred from the columns (zero columns get degree 0).
    pub fn new(ctx: &Arc<RingCtx>, gens: Vec<i32>, relations: Matrix) -> Result<Presentation> {
        if relations.rows() != gens.len() {
            return Err(Error::ShapeMismatch(format!(
                "relation matrix has {} rows for {} generators",
                relations.rows(),
                gens.len()
            )));
        }
        let mut rels = Vec::with_capacity(relations.cols());
        for j in 0..relations.cols() {
            let col = relations.column(j);
            let deg = ctx.vector_degree(&col, &gens).unwrap_or(0);
            rels.push(deg);
        }
        let pres = FreeMap::new(FreeModule::new(ctx, rels), FreeModule::new(ctx, gens), relations)?;
        Ok(Presentation { pres, minimal: false })
    }

    pub fn from_map(pres: FreeMap) -> Presentation {
        Presentation { pres, minimal: false }
    }

    /// Cokernel of a matrix with known twists; the caller guarantees homogeneity.
    pub(crate) fn from_parts(ctx: &Arc<RingCtx>, gens: Vec<i32>, rels: Vec<i32>, matrix: Matrix) -> Presentation {
        let pres = FreeMap::new_unchecked(FreeModule::new(ctx, rels), FreeModule::new(ctx, gens), matrix);
        Presentation { pres, minimal: false }
    }

    pub fn free(ctx: &Arc<RingCtx>, gens: Vec<i32>) -> Presentation {
        let n = gens.len();
        Presentation::from_parts(ctx, gens, Vec::new(), ctx.zeros(n, 0))
    }

    pub fn zero(ctx: &Arc<RingCtx>) -> Presentation {
        Presentation { minimal: true, ..Presentation::free(ctx, Vec::new()) }
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.pres.source.ctx
    }

    pub fn gens(&self) -> &[i32] {
        &self.pres.target.twists
    }

    pub fn rels(&self) -> &[i32] {
        &self.pres.source.twists
    }

    pub fn num_gens(&self) -> usize {
        self.gens().len()
    }

    pub fn num_rels(&self) -> usize {
        self.rels().len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.pres.matrix
    }

    /// True when the presented module is zero.
    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.minimize()?.pres.num_gens() == 0)
    }

    /// Direct sum of presentations (block-diagonal relations).
    pub fn direct_sum(ctx: &Arc<RingCtx>, parts: &[&Presentation]) -> Presentation {
        let gens = parts.iter().flat_map(|p| p.gens().iter().copied()).collect();
        let rels = parts.iter().flat_map(|p| p.rels().iter().copied()).collect();
        let blocks: Vec<&Matrix> = parts.iter().map(|p| p.matrix()).collect();
        let m = Matrix::block_diag(ctx.ring(), &blocks);
        Presentation::from_parts(ctx, gens, rels, m)
    }

    /// Betti table of a minimal resolution of length `len`.
    pub fn betti(&self, len: usize) -> Result<BettiTable> {
        Ok(resolve(self, len)?.betti())
    }
}

/// A degree-0 homomorphism `coker(rel_A) → coker(rel_B)` given on
/// generators. `cert` witnesses well-definedness: `gen_matrix·rel_A = rel_B·cert`.
#[derive(Clone, Debug)]
pub struct ModMap {
    pub source: Presentation,
    pub target: Presentation,
    pub gen_matrix: Matrix,
    pub cert: Matrix,
}

impl ModMap {
    /// Validates and builds the map; fails with `IllDefinedMap` naming the
    /// first source relation that is not sent into the target relations.
    pub fn new(source: Presentation, target: Presentation, gen_matrix: Matrix) -> Result<ModMap> {
        let ctx = source.ctx().clone();
        check_homogeneous(&ctx, &gen_matrix, target.gens(), source.gens())?;
        let gen_matrix = ctx.reduce_matrix(&gen_matrix);
        let cert = maps::validate(&source, &target, &gen_matrix)?;
        Ok(ModMap { source, target, gen_matrix, cert })
    }

    pub fn identity(m: &Presentation) -> ModMap {
        let ctx = m.ctx();
        ModMap {
            source: m.clone(),
            target: m.clone(),
            gen_matrix: ctx.identity(m.num_gens()),
            cert: ctx.identity(m.num_rels()),
        }
    }

    pub fn zero(source: &Presentation, target: &Presentation) -> ModMap {
        let ctx = source.ctx();
        ModMap {
            source: source.clone(),
            target: target.clone(),
            gen_matrix: ctx.zeros(target.num_gens(), source.num_gens()),
            cert: ctx.zeros(target.num_rels(), source.num_rels()),
        }
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        self.source.ctx()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModMap) -> Result<ModMap> {
        if other.target.gens() != self.source.gens() || other.target.matrix() != self.source.matrix() {
            return Err(Error::ShapeMismatch("maps are not composable".into()));
        }
        let ctx = self.ctx();
        Ok(ModMap {
            source: other.source.clone(),
            target: self.target.clone(),
            gen_matrix: ctx.mat_mul(&self.gen_matrix, &other.gen_matrix),
            cert: ctx.mat_mul(&self.cert, &other.cert),
        })
    }

    /// Scalar multiple by a homogeneous ring element of degree `d`, viewed as
    /// a map `M(-d) → M`.
    pub fn times(m: &Presentation, p: &Poly, d: i32) -> Result<ModMap> {
        let ctx = m.ctx();
        let shifted = Presentation::from_parts(
            ctx,
            m.gens().iter().map(|t| t + d).collect(),
            m.rels().iter().map(|t| t + d).collect(),
            m.matrix().clone(),
        );
        let g = ctx.identity(m.num_gens()).map(|e| if e.is_zero() { e.clone() } else { p.clone() });
        ModMap::new(shifted, m.clone(), g)
    }
}
