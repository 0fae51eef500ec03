//! Bounded windows of cochain complexes of graded free modules, chain maps,
//! truncation, duals, mapping cones and homology.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fmod::{betti_row, check_homogeneous, homology_of_frees, BettiTable, FreeMap, FreeModule, Presentation};
use crate::matrix::Matrix;
use crate::ring::RingCtx;

/// Terms `C^n` for `n` in `[lo, hi]` with differentials `d^n : C^n → C^{n+1}`.
///
/// Outside the window a complex is unknown unless flagged: `zero_below`
/// and `zero_above` declare that all terms beyond the window vanish.
#[derive(Clone, Debug)]
pub struct Complex {
    ctx: Arc<RingCtx>,
    lo: i32,
    terms: Vec<Vec<i32>>,
    diffs: Vec<Matrix>,
    pub zero_below: bool,
    pub zero_above: bool,
}

impl Complex {
    /// Checked constructor; `diffs[k]` is `d^{lo+k}`.
    pub fn new(ctx: &Arc<RingCtx>, lo: i32, terms: Vec<Vec<i32>>, diffs: Vec<Matrix>) -> Result<Complex> {
        if terms.is_empty() || diffs.len() + 1 != terms.len() {
            return Err(Error::ShapeMismatch("a window of n terms needs n - 1 differentials".into()));
        }
        for (k, d) in diffs.iter().enumerate() {
            check_homogeneous(ctx, d, &terms[k + 1], &terms[k])?;
        }
        let diffs = diffs.iter().map(|d| ctx.reduce_matrix(d)).collect();
        let c = Complex::from_parts(ctx, lo, terms, diffs);
        if !c.is_complex() {
            return Err(Error::NotAComplex);
        }
        Ok(c)
    }

    pub(crate) fn from_parts(ctx: &Arc<RingCtx>, lo: i32, terms: Vec<Vec<i32>>, diffs: Vec<Matrix>) -> Complex {
        debug_assert_eq!(diffs.len() + 1, terms.len());
        Complex { ctx: ctx.clone(), lo, terms, diffs, zero_below: false, zero_above: false }
    }

    /// The single free module `f` placed in degree `n`, zero elsewhere.
    pub fn concentrated(ctx: &Arc<RingCtx>, n: i32, twists: Vec<i32>) -> Complex {
        let mut c = Complex::from_parts(ctx, n, vec![twists], Vec::new());
        c.zero_below = true;
        c.zero_above = true;
        c
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.ctx
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }

    fn too_small(&self, degree: i32) -> Error {
        Error::WindowTooSmall { degree, lo: self.lo, hi: self.hi() }
    }

    fn known_zero(&self, n: i32) -> bool {
        (n < self.lo && self.zero_below) || (n > self.hi() && self.zero_above)
    }

    /// Twists of `C^n`.
    pub fn twists(&self, n: i32) -> Result<&[i32]> {
        if (self.lo..=self.hi()).contains(&n) {
            Ok(&self.terms[(n - self.lo) as usize])
        } else if self.known_zero(n) {
            Ok(&[])
        } else {
            Err(self.too_small(n))
        }
    }

    pub fn rank(&self, n: i32) -> Result<usize> {
        Ok(self.twists(n)?.len())
    }

    pub fn term(&self, n: i32) -> Result<FreeModule> {
        Ok(FreeModule::new(&self.ctx, self.twists(n)?.to_vec()))
    }

    /// Matrix of `d^n : C^n → C^{n+1}`.
    pub fn diff(&self, n: i32) -> Result<Matrix> {
        if n >= self.lo && n < self.hi() {
            return Ok(self.diffs[(n - self.lo) as usize].clone());
        }
        let src = self.rank(n)?;
        let tgt = self.rank(n + 1)?;
        if src == 0 || tgt == 0 {
            Ok(self.ctx.zeros(tgt, src))
        } else {
            Err(self.too_small(n))
        }
    }

    pub fn diff_map(&self, n: i32) -> Result<FreeMap> {
        Ok(FreeMap::new_unchecked(self.term(n)?, self.term(n + 1)?, self.diff(n)?))
    }

    /// Every consecutive composite vanishes in `R`.
    pub fn is_complex(&self) -> bool {
        self.diffs
            .windows(2)
            .all(|w| self.ctx.is_zero_matrix(&self.ctx.mat_mul(&w[1], &w[0])))
    }

    /// `ker d^n / im d^{n-1}`, minimized.
    pub fn homology(&self, n: i32) -> Result<Presentation> {
        let mid = self.twists(n)?.to_vec();
        let in_src = self.twists(n - 1)?.to_vec();
        let out_tgt = self.twists(n + 1)?.to_vec();
        let d_in = self.diff(n - 1)?;
        let d_out = self.diff(n)?;
        homology_of_frees(&self.ctx, &mid, Some((&d_in, &in_src)), Some((&d_out, &out_tgt)))
    }

    /// True iff `H^n = 0` for every `n` in `lo..=hi`.
    pub fn is_exact_everywhere(&self, lo: i32, hi: i32) -> Result<bool> {
        for n in lo..=hi {
            if !self.homology(n)?.is_zero()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Brutal truncation `τ_{≤n}`: terms above `n` replaced by zero.
    pub fn truncate_le(&self, n: i32) -> Complex {
        if n < self.lo {
            return Complex::concentrated(&self.ctx, n, Vec::new());
        }
        let keep = ((n.min(self.hi()) - self.lo) + 1) as usize;
        let mut c = Complex::from_parts(&self.ctx, self.lo, self.terms[..keep].to_vec(), self.diffs[..keep - 1].to_vec());
        c.zero_below = self.zero_below;
        c.zero_above = n < self.hi() || self.zero_above;
        c
    }

    /// Brutal truncation `τ_{≥n}`: terms below `n` replaced by zero.
    pub fn truncate_ge(&self, n: i32) -> Complex {
        if n > self.hi() {
            return Complex::concentrated(&self.ctx, n, Vec::new());
        }
        let skip = (n.max(self.lo) - self.lo) as usize;
        let mut c = Complex::from_parts(&self.ctx, self.lo + skip as i32, self.terms[skip..].to_vec(), self.diffs[skip..].to_vec());
        c.zero_above = self.zero_above;
        c.zero_below = n > self.lo || self.zero_below;
        c
    }

    /// Restriction to a sub-window without changing the zero flags' meaning:
    /// the result is flagged zero only where the original was.
    pub fn window(&self, lo: i32, hi: i32) -> Result<Complex> {
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        for n in lo..=hi {
            terms.push(self.twists(n)?.to_vec());
            if n < hi {
                diffs.push(self.diff(n)?);
            }
        }
        let mut c = Complex::from_parts(&self.ctx, lo, terms, diffs);
        c.zero_below = lo <= self.lo && self.zero_below;
        c.zero_above = hi >= self.hi() && self.zero_above;
        Ok(c)
    }

    /// `C[k]^n = C^{n+k}` with differentials multiplied by `(-1)^k`.
    pub fn shift(&self, k: i32) -> Complex {
        let diffs = if k % 2 == 0 { self.diffs.clone() } else { self.diffs.iter().map(Matrix::neg).collect() };
        let mut c = Complex::from_parts(&self.ctx, self.lo - k, self.terms.clone(), diffs);
        c.zero_below = self.zero_below;
        c.zero_above = self.zero_above;
        c
    }

    /// `G^m = (C^{-m})*` with `d_G^m = (d_C^{-m-1})ᵀ`.
    pub fn dual(&self) -> Complex {
        let terms: Vec<Vec<i32>> = self.terms.iter().rev().map(|t| t.iter().map(|x| -x).collect()).collect();
        let diffs: Vec<Matrix> = self.diffs.iter().rev().map(Matrix::transpose).collect();
        let mut c = Complex::from_parts(&self.ctx, -self.hi(), terms, diffs);
        c.zero_below = self.zero_above;
        c.zero_above = self.zero_below;
        c
    }

    /// Betti data indexed downward from the top of the window.
    pub fn betti(&self) -> BettiTable {
        let hi = self.hi();
        (self.lo..=hi)
            .rev()
            .flat_map(|n| betti_row((hi - n) as usize, &self.terms[(n - self.lo) as usize]))
            .collect()
    }

    /// Direct sum of two complexes on a common window.
    pub fn direct_sum(&self, other: &Complex) -> Result<Complex> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi().min(other.hi());
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        for n in lo..=hi {
            let mut t = self.twists(n)?.to_vec();
            t.extend_from_slice(other.twists(n)?);
            terms.push(t);
            if n < hi {
                diffs.push(Matrix::block_diag(self.ctx.ring(), &[&self.diff(n)?, &other.diff(n)?]));
            }
        }
        let mut c = Complex::from_parts(&self.ctx, lo, terms, diffs);
        c.zero_below = lo == self.lo && lo == other.lo && self.zero_below && other.zero_below;
        c.zero_above = hi == self.hi() && hi == other.hi() && self.zero_above && other.zero_above;
        Ok(c)
    }
}

/// Components `f^n : S^n → T^n` for `n` in `[lo, hi]`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: Complex,
    pub target: Complex,
    lo: i32,
    comps: Vec<Matrix>,
}

impl ChainMap {
    /// Checked constructor; the commuting squares are verified.
    pub fn new(source: Complex, target: Complex, lo: i32, comps: Vec<Matrix>) -> Result<ChainMap> {
        let ctx = source.ctx.clone();
        for (k, m) in comps.iter().enumerate() {
            let n = lo + k as i32;
            check_homogeneous(&ctx, m, target.twists(n)?, source.twists(n)?)?;
        }
        let comps = comps.iter().map(|m| ctx.reduce_matrix(m)).collect();
        let f = ChainMap::from_parts(source, target, lo, comps);
        if !f.verify()? {
            return Err(Error::Invalid("chain map squares do not commute".into()));
        }
        Ok(f)
    }

    pub(crate) fn from_parts(source: Complex, target: Complex, lo: i32, comps: Vec<Matrix>) -> ChainMap {
        ChainMap { source, target, lo, comps }
    }

    pub fn identity(c: &Complex) -> ChainMap {
        let comps = (c.lo..=c.hi()).map(|n| c.ctx.identity(c.rank(n).unwrap())).collect();
        ChainMap::from_parts(c.clone(), c.clone(), c.lo, comps)
    }

    pub fn zero(source: &Complex, target: &Complex) -> Result<ChainMap> {
        let lo = source.lo.max(target.lo);
        let hi = source.hi().min(target.hi());
        let mut comps = Vec::new();
        for n in lo..=hi {
            comps.push(source.ctx.zeros(target.rank(n)?, source.rank(n)?));
        }
        Ok(ChainMap::from_parts(source.clone(), target.clone(), lo, comps))
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.comps.len() as i32 - 1
    }

    pub fn comp(&self, n: i32) -> Result<Matrix> {
        if (self.lo..=self.hi()).contains(&n) {
            return Ok(self.comps[(n - self.lo) as usize].clone());
        }
        let s = self.source.rank(n)?;
        let t = self.target.rank(n)?;
        if s == 0 || t == 0 {
            Ok(self.source.ctx.zeros(t, s))
        } else {
            Err(Error::WindowTooSmall { degree: n, lo: self.lo, hi: self.hi() })
        }
    }

    /// `d_T^n f^n = f^{n+1} d_S^n` wherever both sides are available.
    pub fn verify(&self) -> Result<bool> {
        let ctx = &self.source.ctx;
        for n in self.lo..self.hi() {
            let (Ok(ds), Ok(dt)) = (self.source.diff(n), self.target.diff(n)) else {
                continue;
            };
            let left = ctx.mat_mul(&dt, &self.comp(n)?);
            let right = ctx.mat_mul(&self.comp(n + 1)?, &ds);
            if left != right {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Mapping cone `C^n = S^{n+1} ⊕ T^n`, `d = [[-d_S^{n+1}, 0], [f^{n+1}, d_T^n]]`,
    /// on the largest window the data supports.
    pub fn cone(&self) -> Result<Complex> {
        let (s, t) = (&self.source, &self.target);
        let mut lo = (s.lo - 1).min(t.lo);
        let mut hi = s.hi().max(t.hi());
        while lo <= hi && self.cone_window(lo, lo).is_err() {
            lo += 1;
        }
        while lo < hi && self.cone_window(lo, hi).is_err() {
            hi -= 1;
        }
        self.cone_window(lo, hi)
    }

    /// Mapping cone restricted to the window `[lo, hi]`.
    pub fn cone_window(&self, lo: i32, hi: i32) -> Result<Complex> {
        let ctx = &self.source.ctx;
        let (s, t) = (&self.source, &self.target);
        if hi < lo {
            return Err(Error::WindowTooSmall { degree: lo, lo: hi, hi });
        }
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        for n in lo..=hi {
            let mut tw = s.twists(n + 1)?.to_vec();
            tw.extend_from_slice(t.twists(n)?);
            terms.push(tw);
            if n < hi {
                let ds = s.diff(n + 1)?.neg();
                let f = self.comp(n + 1)?;
                let dt = t.diff(n)?;
                let top = Matrix::hstack(ctx.ring(), ds.rows(), &[&ds, &ctx.zeros(ds.rows(), dt.cols())]);
                let bottom = Matrix::hstack(ctx.ring(), dt.rows(), &[&f, &dt]);
                diffs.push(Matrix::vstack(ctx.ring(), ds.cols() + dt.cols(), &[&top, &bottom]));
            }
        }
        let mut c = Complex::from_parts(ctx, lo, terms, diffs);
        c.zero_below = lo < s.lo && lo <= t.lo && s.zero_below && t.zero_below;
        c.zero_above = hi >= s.hi() - 1 && hi >= t.hi() && s.zero_above && t.zero_above;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fmod::resolve;
    use crate::ring::{gallery, make_ring, RingSpec};

    fn koszul(ctx: &Arc<RingCtx>) -> Complex {
        // R(-2) --(y;-x)--> R(-1)^2 --(x y)--> R on [-2, 0]
        let p = |s: &str| ctx.parse(s).unwrap();
        let d1 = Matrix::from_rows(1, 2, vec![p("x"), p("y")]);
        let d2 = Matrix::from_rows(2, 1, vec![p("y"), p("-x")]);
        let mut c = Complex::new(ctx, -2, vec![vec![2], vec![1, 1], vec![0]], vec![d2, d1]).unwrap();
        c.zero_below = true;
        c.zero_above = true;
        c
    }

    #[test]
    fn koszul_complex_homology() {
        let r = make_ring(RingSpec::new(&["x", "y"], &[])).unwrap();
        let c = koszul(&r);
        assert!(c.is_exact_everywhere(-2, -1).unwrap());
        assert_eq!(c.homology(0).unwrap().num_gens(), 1);
        let d = c.dual();
        assert_eq!((d.lo(), d.hi()), (0, 2));
        assert!(d.is_complex());
        assert!(d.is_exact_everywhere(0, 1).unwrap());
        assert!(!d.homology(2).unwrap().is_zero().unwrap());
        let dd = d.dual();
        assert_eq!(dd.diff(-2).unwrap(), c.diff(-2).unwrap());
    }

    #[test]
    fn koszul_over_node_is_not_exact() {
        let r = gallery::node();
        let c = koszul(&r);
        assert!(!c.homology(-1).unwrap().is_zero().unwrap());
    }

    #[test]
    fn truncations() {
        let r = make_ring(RingSpec::new(&["x", "y"], &[])).unwrap();
        let c = koszul(&r);
        let le = c.truncate_le(-1);
        assert_eq!((le.lo(), le.hi()), (-2, -1));
        assert_eq!(le.rank(0).unwrap(), 0);
        let single = c.truncate_le(-1).truncate_ge(-1);
        assert_eq!((single.lo(), single.hi()), (-1, -1));
        let same = c.truncate_le(0);
        assert_eq!(same.betti(), c.betti());
    }

    #[test]
    fn cone_of_identity_is_exact() {
        let r = gallery::dual_numbers();
        let k = crate::fmod::Presentation::new(&r, vec![0], Matrix::from_rows(1, 1, vec![r.parse("x").unwrap()])).unwrap();
        let res = resolve(&k, 4).unwrap();
        let cone = ChainMap::identity(&res).cone().unwrap();
        assert!(cone.is_complex());
        assert!(cone.is_exact_everywhere(cone.lo() + 1, cone.hi() - 1).unwrap());
        assert!(cone.homology(cone.hi()).unwrap().is_zero().unwrap());
    }

    #[test]
    fn cone_of_zero_map_keeps_homology() {
        let r = gallery::dual_numbers();
        let k = crate::fmod::Presentation::new(&r, vec![0], Matrix::from_rows(1, 1, vec![r.parse("x").unwrap()])).unwrap();
        let res = resolve(&k, 4).unwrap();
        let cone = ChainMap::zero(&res, &res).unwrap().cone().unwrap();
        // H^{-1} of the cone contains H^0 of the shifted source, which is k.
        assert!(!cone.homology(-1).unwrap().is_zero().unwrap());
        assert!(!cone.homology(0).unwrap().is_zero().unwrap());
    }

    #[test]
    fn window_errors() {
        let r = make_ring(RingSpec::new(&["x", "y"], &[])).unwrap();
        let c = Complex::from_parts(&r, 0, vec![vec![0], vec![1, 1]], vec![Matrix::from_rows(2, 1, vec![r.parse("x").unwrap(), r.parse("y").unwrap()])]);
        assert!(matches!(c.homology(0), Err(Error::WindowTooSmall { degree: -1, .. })));
    }
}
