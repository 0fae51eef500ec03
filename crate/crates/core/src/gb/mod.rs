//! Gröbner bases, normal forms, syzygies and lifting over `P/I`.
//!
//! Module computations over the quotient ring are carried out in the
//! polynomial ring `P` by adjoining `I·e_i` for every component.

pub mod buchberger;
pub mod mvec;
pub mod syzygy;

pub use buchberger::IncrementalGb;
pub use mvec::MVec;
pub use syzygy::{lift_through, minimal_generators, syzygies, LiftSystem, QuotientCtx};

use crate::algebra::{MonomialOrder, Poly, PolyRing};
use crate::error::Result;

/// Reduced Gröbner basis of a polynomial ideal, sorted by increasing leading monomial.
pub fn ideal_gb(ring: &PolyRing, gens: &[Poly], limit: Option<i32>) -> Result<Vec<Poly>> {
    let mut gb = IncrementalGb::new(ring, vec![0], limit);
    for g in gens {
        if !g.is_zero() {
            gb.add_generator(MVec::single(0, g));
        }
    }
    gb.complete()?;
    Ok(gb
        .reduced_basis()
        .into_iter()
        .map(|v| v.to_polys(ring.field, ring.nvars(), 0, 1).pop().expect("one component"))
        .collect())
}

/// Reduced Gröbner basis of the submodule generated by `gens` inside the
/// free module with the given twists.
pub fn buchberger(ring: &PolyRing, twists: Vec<i32>, gens: &[MVec], limit: Option<i32>) -> Result<Vec<MVec>> {
    let mut gb = IncrementalGb::new(ring, twists, limit);
    for g in gens {
        if !g.is_zero() {
            gb.add_generator(g.clone());
        }
    }
    gb.complete()?;
    Ok(gb.reduced_basis())
}

/// Normal form of a polynomial against a Gröbner basis of an ideal.
pub fn reduce_poly(p: &Poly, gb: &[Poly], ord: &MonomialOrder) -> Poly {
    if gb.is_empty() || p.is_zero() {
        return p.clone();
    }
    let masks: Vec<u64> = gb.iter().map(|g| g.leading().unwrap().0.support_mask()).collect();
    let mut rest = p.clone();
    let mut done = Vec::new();
    while let Some((m, c)) = rest.leading().cloned() {
        let mask = m.support_mask();
        let hit = gb.iter().zip(&masks).position(|(g, gm)| {
            gm & !mask == 0 && g.leading().unwrap().0.divides(&m)
        });
        match hit {
            Some(k) => {
                let (lm, lc) = gb[k].leading().unwrap();
                let q = lm.quotient_of(&m);
                let f = c.mul(&lc.inv().expect("nonzero")).neg();
                rest = rest.add_scaled(&gb[k], Some((&q, &f)), ord);
            }
            None => {
                let mut terms = rest.into_terms();
                done.push(terms.remove(0));
                rest = Poly::from_sorted(p.field(), p.nvars(), terms);
            }
        }
    }
    Poly::from_sorted(p.field(), p.nvars(), done)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, MonomialOrder};

    fn ring3() -> PolyRing {
        PolyRing::new(Field::Rationals, vec!["x".into(), "y".into(), "z".into()], MonomialOrder::degrevlex(3))
    }

    fn polys(r: &PolyRing, text: &[&str]) -> Vec<Poly> {
        text.iter().map(|t| r.parse(t).unwrap()).collect()
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let r = ring3();
        let gb = ideal_gb(&r, &polys(&r, &["x*y", "x^2"]), None).unwrap();
        let shown: Vec<String> = gb.iter().map(|p| r.fmt_poly(p)).collect();
        assert_eq!(shown, ["x*y", "x^2"]);
    }

    #[test]
    fn principal_ideal_basis() {
        let r = ring3();
        let gb = ideal_gb(&r, &polys(&r, &["x^2 - y*z"]), None).unwrap();
        assert_eq!(gb, polys(&r, &["x^2 - y*z"]));
    }

    #[test]
    fn normal_forms() {
        let r = ring3();
        let gb = ideal_gb(&r, &polys(&r, &["x*y", "x^2"]), None).unwrap();
        let nf = reduce_poly(&r.parse("x^2*y + x").unwrap(), &gb, &r.order);
        assert_eq!(r.fmt_poly(&nf), "x");
        assert!(reduce_poly(&r.zero(), &gb, &r.order).is_zero());
        let gb2 = ideal_gb(&r, &polys(&r, &["x^2 - y*z"]), None).unwrap();
        assert_eq!(r.fmt_poly(&reduce_poly(&r.parse("x^2").unwrap(), &gb2, &r.order)), "y*z");
    }

    #[test]
    fn nontrivial_basis_is_reduced() {
        // Cyclic-3 style system: the reduced basis must be interreduced and
        // every generator must reduce to zero.
        let r = ring3();
        let gens = polys(&r, &["x + y + z", "x*y + y*z + z*x", "x*y*z"]);
        let gb = ideal_gb(&r, &gens, None).unwrap();
        for g in &gens {
            assert!(reduce_poly(g, &gb, &r.order).is_zero());
        }
        for (i, g) in gb.iter().enumerate() {
            assert!(g.leading().unwrap().1.is_one());
            let others: Vec<Poly> = gb.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
            assert_eq!(&reduce_poly(g, &others, &r.order), g);
        }
    }

    #[test]
    fn degree_limit_is_enforced() {
        let r = ring3();
        let gens = polys(&r, &["x^2 - y*z", "x*y - z^2"]);
        assert!(matches!(ideal_gb(&r, &gens, Some(2)), Err(crate::error::Error::ResourceLimit { limit: 2 })));
        assert!(ideal_gb(&r, &gens, None).is_ok());
    }
}
