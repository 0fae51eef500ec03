use crate::error::Result;
use crate::fmod::{ModMap, Presentation};
use crate::matrix::Matrix;

/// A minimal presentation together with the change of generators relating
/// it to the original one.
#[derive(Clone, Debug)]
pub struct Minimized {
    pub pres: Presentation,
    /// Old generators expressed in the new ones (`new × old`).
    pub to_new: Matrix,
    /// New generators expressed in the old ones (`old × new`).
    pub to_old: Matrix,
}

impl Minimized {
    /// The isomorphism `original → minimal`.
    pub fn forward(&self, original: &Presentation) -> Result<ModMap> {
        ModMap::new(original.clone(), self.pres.clone(), self.to_new.clone())
    }

    /// The isomorphism `minimal → original`.
    pub fn backward(&self, original: &Presentation) -> Result<ModMap> {
        ModMap::new(self.pres.clone(), original.clone(), self.to_old.clone())
    }
}

fn find_unit(m: &Matrix) -> Option<(usize, usize)> {
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            let p = m.get(i, j);
            if !p.is_zero() && p.is_constant() {
                return Some((i, j));
            }
        }
    }
    None
}

impl Presentation {
    /// Eliminates unit entries, drops redundant relations and returns an
    /// isomorphic minimal presentation with the generator transport maps.
    pub fn minimize(&self) -> Result<Minimized> {
        let ctx = self.ctx().clone();
        let ord = ctx.order();
        let n = self.num_gens();
        let mut a = ctx.reduce_matrix(self.matrix());
        let mut gens = self.gens().to_vec();
        let mut rels = self.rels().to_vec();
        let mut to_new = ctx.identity(n);
        let mut to_old = ctx.identity(n);

        while let Some((pi, pj)) = find_unit(&a) {
            let c_inv = a.get(pi, pj).constant_coeff().inv().expect("unit entry");
            let keep_r: Vec<usize> = (0..a.rows()).filter(|&i| i != pi).collect();
            let keep_c: Vec<usize> = (0..a.cols()).filter(|&j| j != pj).collect();
            let mut next = a.submatrix(&keep_r, &keep_c);
            let mut next_new = to_new.select_rows(&keep_r);
            for (ni, &i) in keep_r.iter().enumerate() {
                let factor = a.get(i, pj).scale(&c_inv);
                if factor.is_zero() {
                    continue;
                }
                for (nj, &j) in keep_c.iter().enumerate() {
                    let t = ctx.mul(&factor, a.get(pi, j));
                    next.set(ni, nj, next.get(ni, nj).sub(&t, ord));
                }
                for k in 0..n {
                    let t = ctx.mul(&factor, to_new.get(pi, k));
                    next_new.set(ni, k, next_new.get(ni, k).sub(&t, ord));
                }
            }
            a = next;
            to_new = next_new;
            to_old = to_old.select_cols(&keep_r);
            gens = keep_r.iter().map(|&i| gens[i]).collect();
            rels = keep_c.iter().map(|&j| rels[j]).collect();
        }

        let nonzero: Vec<usize> = (0..a.cols()).filter(|&j| !a.column_is_zero(j)).collect();
        let a = a.select_cols(&nonzero);
        let rels: Vec<i32> = nonzero.iter().map(|&j| rels[j]).collect();
        let (a, rels) = if a.cols() > 0 && !gens.is_empty() {
            let keep = crate::gb::minimal_generators(ctx.q(), &gens, &a.columns())?;
            (a.select_cols(&keep), keep.iter().map(|&j| rels[j]).collect())
        } else {
            (ctx.zeros(gens.len(), 0), Vec::new())
        };
        let mut pres = Presentation::from_parts(&ctx, gens, rels, a);
        pres.minimal = true;
        Ok(Minimized { pres, to_new, to_old })
    }

    /// Minimal presentation without the transport data.
    pub fn minimal(&self) -> Result<Presentation> {
        if self.minimal {
            return Ok(self.clone());
        }
        Ok(self.minimize()?.pres)
    }
}

impl ModMap {
    /// The same map between minimal presentations of source and target.
    pub fn minimized(&self) -> Result<ModMap> {
        let ms = self.source.minimize()?;
        let mt = self.target.minimize()?;
        let ctx = self.ctx();
        let g = ctx.mat_mul(&ctx.mat_mul(&mt.to_new, &self.gen_matrix), &ms.to_old);
        ModMap::new(ms.pres, mt.pres, g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{gallery, make_ring, RingSpec};

    #[test]
    fn identity_relation_gives_zero_module() {
        let r = make_ring(RingSpec::new(&["x", "y"], &[])).unwrap();
        let m = Presentation::new(&r, vec![0], Matrix::from_rows(1, 1, vec![r.one()])).unwrap();
        let min = m.minimize().unwrap();
        assert_eq!(min.pres.num_gens(), 0);
        assert!(m.is_zero().unwrap());
    }

    #[test]
    fn unit_row_is_eliminated() {
        let r = make_ring(RingSpec::new(&["x", "y"], &[])).unwrap();
        // coker [[x],[1]] on generators of degree 0 and 1
        let m = Presentation::new(&r, vec![0, 1], Matrix::from_rows(2, 1, vec![r.parse("x").unwrap(), r.one()])).unwrap();
        let min = m.minimize().unwrap();
        assert_eq!(min.pres.gens(), &[0]);
        assert_eq!(min.pres.num_rels(), 0);
        assert_eq!(r.fmt(min.to_new.get(0, 1)), "-x");
        min.forward(&m).unwrap();
        min.backward(&m).unwrap();
    }

    #[test]
    fn minimal_input_is_unchanged() {
        let r = gallery::node();
        let m = Presentation::new(
            &r,
            vec![0],
            Matrix::from_rows(1, 2, vec![r.parse("x").unwrap(), r.parse("y").unwrap()]),
        )
        .unwrap();
        let min = m.minimize().unwrap();
        assert_eq!(min.pres.matrix(), m.matrix());
        assert_eq!(min.to_new, r.identity(1));
        let again = min.pres.minimize().unwrap();
        assert_eq!(again.pres.matrix(), min.pres.matrix());
    }
}
