//! Syzygies, lifting and minimal generators by position-over-term
//! elimination: the columns `A_j` are paired with unit vectors `e_j` in an
//! auxiliary block, so that basis elements supported in that block record
//! relations and reductions record lifts.

use crate::algebra::{Poly, PolyRing};
use crate::error::Result;
use crate::gb::buchberger::IncrementalGb;
use crate::gb::mvec::MVec;
use crate::gb::reduce_poly;
use crate::matrix::Matrix;

/// A polynomial ring together with a Gröbner basis of the defining ideal.
#[derive(Clone, Copy)]
pub struct QuotientCtx<'a> {
    pub ring: &'a PolyRing,
    pub ideal: &'a [Poly],
    pub limit: Option<i32>,
}

impl QuotientCtx<'_> {
    pub fn reduce(&self, p: &Poly) -> Poly {
        reduce_poly(p, self.ideal, &self.ring.order)
    }

    pub fn reduce_all(&self, v: &[Poly]) -> Vec<Poly> {
        v.iter().map(|p| self.reduce(p)).collect()
    }

    /// Adds `g·e_i` for every ideal generator `g` and component `i < rank`.
    fn add_ideal_multiples(&self, gb: &mut IncrementalGb, rank: usize) {
        for i in 0..rank {
            for g in self.ideal {
                gb.add_generator(MVec::single(i, g));
            }
        }
    }
}

/// Degree of a homogeneous vector with respect to component twists.
pub fn vector_degree(ring: &PolyRing, v: &[Poly], twists: &[i32]) -> Option<i32> {
    v.iter()
        .zip(twists)
        .find_map(|(p, t)| p.leading().map(|(m, _)| ring.order.degree(m) + t))
}

/// Gröbner basis of the graph of a matrix, used for lifting through it and
/// for reading off its syzygies.
pub struct LiftSystem {
    gb: IncrementalGb,
    rows: usize,
    cols: usize,
}

impl LiftSystem {
    pub fn new(q: QuotientCtx<'_>, a: &Matrix, row_twists: &[i32], col_twists: &[i32]) -> Result<LiftSystem> {
        let rows = a.rows();
        let cols = a.cols();
        debug_assert_eq!(row_twists.len(), rows);
        debug_assert_eq!(col_twists.len(), cols);
        let mut twists = row_twists.to_vec();
        twists.extend_from_slice(col_twists);
        let mut gb = IncrementalGb::new(q.ring, twists, q.limit);
        q.add_ideal_multiples(&mut gb, rows);
        for j in 0..cols {
            let mut v = a.column(j);
            let mut unit = vec![q.ring.zero(); cols];
            unit[j] = q.ring.one();
            v.extend(unit);
            gb.add_generator(MVec::from_polys(&v, 0));
        }
        gb.complete()?;
        Ok(LiftSystem { gb, rows, cols })
    }

    /// Returns `c` with `A·c ≡ v (mod I)`, or `None` when `v ∉ im A + I·F`.
    pub fn lift(&self, q: QuotientCtx<'_>, v: &[Poly]) -> Option<Vec<Poly>> {
        let mut padded = v.to_vec();
        padded.extend(std::iter::repeat_n(q.ring.zero(), self.cols));
        let r = self.gb.top_reduce(MVec::from_polys(&padded, 0), self.rows);
        if r.lead_comp().is_some_and(|c| c < self.rows) {
            return None;
        }
        let bottom = r.to_polys(q.ring.field, q.ring.nvars(), self.rows, self.rows + self.cols);
        Some(bottom.iter().map(|p| q.reduce(&p.neg())).collect())
    }

    /// Generators (not yet minimal) of the relation module among the columns.
    pub fn syzygy_candidates(&self, q: QuotientCtx<'_>) -> Vec<Vec<Poly>> {
        self.gb
            .elements()
            .iter()
            .filter(|v| v.lead_comp().is_some_and(|c| c >= self.rows))
            .map(|v| q.reduce_all(&v.to_polys(q.ring.field, q.ring.nvars(), self.rows, self.rows + self.cols)))
            .filter(|v| v.iter().any(|p| !p.is_zero()))
            .collect()
    }
}

/// Indices of a minimal generating subset of the submodule of `F/I·F`
/// spanned by `vectors` (homogeneous, in the free module with `twists`).
/// Zero vectors are never selected.
pub fn minimal_generators(q: QuotientCtx<'_>, twists: &[i32], vectors: &[Vec<Poly>]) -> Result<Vec<usize>> {
    let mut order: Vec<(i32, usize)> = vectors
        .iter()
        .enumerate()
        .filter_map(|(k, v)| vector_degree(q.ring, v, twists).map(|d| (d, k)))
        .collect();
    order.sort();
    let mut gb = IncrementalGb::new(q.ring, twists.to_vec(), q.limit);
    q.add_ideal_multiples(&mut gb, twists.len());
    let mut chosen = Vec::new();
    for (d, k) in order {
        gb.complete_to(d)?;
        let v = MVec::from_polys(&vectors[k], 0);
        if !gb.top_reduce(v.clone(), usize::MAX).is_zero() {
            chosen.push(k);
            gb.add_generator(v);
        }
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Minimal generators of `{c : A·c ≡ 0 mod I}` as columns of a matrix, with
/// their degrees.
pub fn syzygies(q: QuotientCtx<'_>, a: &Matrix, row_twists: &[i32], col_twists: &[i32]) -> Result<(Matrix, Vec<i32>)> {
    let sys = LiftSystem::new(q, a, row_twists, col_twists)?;
    syzygies_from(q, &sys, col_twists)
}

pub(crate) fn syzygies_from(q: QuotientCtx<'_>, sys: &LiftSystem, col_twists: &[i32]) -> Result<(Matrix, Vec<i32>)> {
    let cands = sys.syzygy_candidates(q);
    let keep = minimal_generators(q, col_twists, &cands)?;
    let cols: Vec<Vec<Poly>> = keep.iter().map(|&k| cands[k].clone()).collect();
    let mut with_deg: Vec<(i32, Vec<Poly>)> = cols
        .into_iter()
        .map(|c| (vector_degree(q.ring, &c, col_twists).expect("nonzero syzygy"), c))
        .collect();
    with_deg.sort_by_key(|(d, _)| *d);
    let degrees = with_deg.iter().map(|(d, _)| *d).collect();
    let cols: Vec<Vec<Poly>> = with_deg.into_iter().map(|(_, c)| c).collect();
    Ok((Matrix::from_columns(q.ring, col_twists.len(), &cols), degrees))
}

/// One-shot lift of `v` through `A` modulo `I`.
pub fn lift_through(
    q: QuotientCtx<'_>,
    a: &Matrix,
    row_twists: &[i32],
    col_twists: &[i32],
    v: &[Poly],
) -> Result<Option<Vec<Poly>>> {
    Ok(LiftSystem::new(q, a, row_twists, col_twists)?.lift(q, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, MonomialOrder};
    use crate::gb::ideal_gb;

    fn ring(vars: &[&str]) -> PolyRing {
        PolyRing::new(
            Field::Rationals,
            vars.iter().map(|s| s.to_string()).collect(),
            MonomialOrder::degrevlex(vars.len()),
        )
    }

    fn row(r: &PolyRing, text: &[&str]) -> Matrix {
        Matrix::from_rows(1, text.len(), text.iter().map(|t| r.parse(t).unwrap()).collect())
    }

    fn check_syz(q: QuotientCtx<'_>, a: &Matrix, s: &Matrix) {
        let prod = a.mul(s, q.ring);
        assert!(prod.entries().iter().all(|p| q.reduce(p).is_zero()));
    }

    #[test]
    fn koszul_relation_over_polynomial_ring() {
        let r = ring(&["x", "y"]);
        let q = QuotientCtx { ring: &r, ideal: &[], limit: None };
        let a = row(&r, &["x", "y"]);
        let (s, deg) = syzygies(q, &a, &[0], &[1, 1]).unwrap();
        assert_eq!(s.cols(), 1);
        assert_eq!(deg, vec![2]);
        check_syz(q, &a, &s);
        let shown: Vec<String> = s.column(0).iter().map(|p| r.fmt_poly(p)).collect();
        assert!(shown == ["y", "-x"] || shown == ["-y", "x"]);
    }

    #[test]
    fn relations_modulo_xy() {
        let r = ring(&["x", "y"]);
        let ideal = ideal_gb(&r, &[r.parse("x*y").unwrap()], None).unwrap();
        let q = QuotientCtx { ring: &r, ideal: &ideal, limit: None };
        let a = row(&r, &["x", "y"]);
        let (s, deg) = syzygies(q, &a, &[0], &[1, 1]).unwrap();
        check_syz(q, &a, &s);
        assert_eq!(deg, vec![2, 2]);
        let mut cols: Vec<Vec<String>> = s.columns().iter().map(|c| c.iter().map(|p| r.fmt_poly(p)).collect()).collect();
        cols.sort();
        assert_eq!(cols, vec![vec!["0".to_string(), "x".to_string()], vec!["y".to_string(), "0".to_string()]]);
    }

    #[test]
    fn identity_has_no_relations() {
        let r = ring(&["x"]);
        let q = QuotientCtx { ring: &r, ideal: &[], limit: None };
        let id = Matrix::identity(&r, 2);
        let (s, _) = syzygies(q, &id, &[0, 0], &[0, 0]).unwrap();
        assert_eq!(s.cols(), 0);
    }

    #[test]
    fn lifting_examples() {
        let r = ring(&["x", "y"]);
        let q = QuotientCtx { ring: &r, ideal: &[], limit: None };
        let c = lift_through(q, &row(&r, &["x"]), &[0], &[1], &[r.parse("x^2").unwrap()]).unwrap();
        assert_eq!(c, Some(vec![r.parse("x").unwrap()]));
        let none = lift_through(q, &row(&r, &["x", "y"]), &[0], &[1, 1], &[r.one()]).unwrap();
        assert_eq!(none, None);

        let r3 = ring(&["x", "y", "z"]);
        let ideal = ideal_gb(&r3, &[r3.parse("x^2 - y*z").unwrap()], None).unwrap();
        let q3 = QuotientCtx { ring: &r3, ideal: &ideal, limit: None };
        let c = lift_through(q3, &row(&r3, &["x^2"]), &[0], &[2], &[r3.parse("y*z").unwrap()]).unwrap();
        let c = c.unwrap();
        assert_eq!(q3.reduce(&r3.mul(&c[0], &r3.parse("x^2").unwrap())), q3.reduce(&r3.parse("y*z").unwrap()));
    }

    #[test]
    fn minimal_generators_drop_redundancy() {
        let r = ring(&["x", "y"]);
        let q = QuotientCtx { ring: &r, ideal: &[], limit: None };
        let p = |t: &str| r.parse(t).unwrap();
        // (x*y, -x^2) = y*(x,0) - x*(0,x)
        let vecs = vec![
            vec![p("x"), p("0")],
            vec![p("0"), p("x")],
            vec![p("y"), p("-x")],
            vec![p("x*y"), p("-x^2")],
            vec![p("0"), p("0")],
        ];
        let keep = minimal_generators(q, &[0, 0], &vecs).unwrap();
        assert_eq!(keep, vec![0, 1, 2]);
    }
}
