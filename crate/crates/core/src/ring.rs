//! Graded quotient rings `k[x_1..x_n]/I` with cached Gröbner data.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::algebra::{Field, MonomialOrder, OrderKind, Poly, PolyRing};
use crate::error::{Error, Result};
use crate::gb::syzygy::syzygies_from;
use crate::gb::{ideal_gb, minimal_generators, LiftSystem, QuotientCtx};
use crate::matrix::Matrix;

/// Declarative description of a ring, as produced by the session language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    pub field: Field,
    pub vars: Vec<String>,
    pub order: OrderKind,
    pub weights: Option<Vec<u32>>,
    /// Ideal generators in polynomial text syntax.
    pub ideal: Vec<String>,
    pub gorenstein_fractions: bool,
    pub max_degree: Option<i32>,
}

impl RingSpec {
    pub fn new(vars: &[&str], ideal: &[&str]) -> RingSpec {
        RingSpec {
            field: Field::Rationals,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            order: OrderKind::DegRevLex,
            weights: None,
            ideal: ideal.iter().map(|s| s.to_string()).collect(),
            gorenstein_fractions: false,
            max_degree: None,
        }
    }

    pub fn gorenstein(mut self, flag: bool) -> RingSpec {
        self.gorenstein_fractions = flag;
        self
    }

    pub fn over(mut self, field: Field) -> RingSpec {
        self.field = field;
        self
    }
}

type MatrixKey = (Matrix, Vec<i32>, Vec<i32>);
type ResolutionData = Arc<Vec<(Matrix, Vec<i32>)>>;

const CACHE_CAP: usize = 4096;

/// The ambient ring `R = P/I` with `I` homogeneous.
pub struct RingCtx {
    spec: RingSpec,
    poly: PolyRing,
    ideal: Vec<Poly>,
    gb: Vec<Poly>,
    lift_cache: RwLock<HashMap<MatrixKey, Arc<LiftSystem>>>,
    resolution_cache: RwLock<HashMap<MatrixKey, ResolutionData>>,
}

impl std::fmt::Debug for RingCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RingCtx({})", self.describe())
    }
}

/// Validates a ring description and caches the reduced Gröbner basis of its ideal.
pub fn make_ring(spec: RingSpec) -> Result<Arc<RingCtx>> {
    if let Field::Prime(p) = spec.field {
        Field::prime(p)?;
    }
    let n = spec.vars.len();
    let mut order = MonomialOrder::new(spec.order, n);
    if let Some(w) = &spec.weights {
        if w.len() != n || w.contains(&0) {
            return Err(Error::Invalid("variable degrees must be positive, one per variable".into()));
        }
        order = order.with_weights(w.clone());
    }
    let poly = PolyRing::new(spec.field, spec.vars.clone(), order);
    let mut ideal = Vec::new();
    for (index, text) in spec.ideal.iter().enumerate() {
        let p = poly.parse(text)?;
        if !p.is_homogeneous(&poly.order) {
            return Err(Error::InhomogeneousIdeal { index, poly: poly.fmt_poly(&p) });
        }
        ideal.push(p);
    }
    let gb = ideal_gb(&poly, &ideal, spec.max_degree)?;
    Ok(Arc::new(RingCtx {
        spec,
        poly,
        ideal,
        gb,
        lift_cache: RwLock::new(HashMap::new()),
        resolution_cache: RwLock::new(HashMap::new()),
    }))
}

impl RingCtx {
    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn ring(&self) -> &PolyRing {
        &self.poly
    }

    pub fn field(&self) -> Field {
        self.poly.field
    }

    pub fn vars(&self) -> &[String] {
        &self.poly.vars
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.poly.order
    }

    pub fn ideal(&self) -> &[Poly] {
        &self.ideal
    }

    /// Reduced Gröbner basis of the defining ideal.
    pub fn ideal_gb(&self) -> &[Poly] {
        &self.gb
    }

    pub fn gorenstein_fractions(&self) -> bool {
        self.spec.gorenstein_fractions
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.spec.max_degree
    }

    pub fn q(&self) -> QuotientCtx<'_> {
        QuotientCtx { ring: &self.poly, ideal: &self.gb, limit: self.spec.max_degree }
    }

    /// `QQ[x,y]/(x*y)` style description.
    pub fn describe(&self) -> String {
        let base = format!("{}[{}]", self.field(), self.vars().join(","));
        if self.ideal.is_empty() {
            base
        } else {
            let gens: Vec<String> = self.ideal.iter().map(|p| self.poly.fmt_poly(p)).collect();
            format!("{}/({})", base, gens.join(", "))
        }
    }

    pub fn parse(&self, text: &str) -> Result<Poly> {
        Ok(self.reduce(&self.poly.parse(text)?))
    }

    pub fn fmt(&self, p: &Poly) -> String {
        self.poly.fmt_poly(p)
    }

    /// Canonical representative of `p + I`.
    pub fn reduce(&self, p: &Poly) -> Poly {
        self.q().reduce(p)
    }

    pub fn reduce_matrix(&self, m: &Matrix) -> Matrix {
        m.map(|p| self.reduce(p))
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&self.poly.mul(a, b))
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.poly.add(a, b)
    }

    pub fn zero(&self) -> Poly {
        self.poly.zero()
    }

    pub fn one(&self) -> Poly {
        self.poly.one()
    }

    /// Matrix product reduced modulo `I`.
    pub fn mat_mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        self.reduce_matrix(&a.mul(b, &self.poly))
    }

    pub fn mat_add(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a.add(b, &self.poly)
    }

    pub fn mat_sub(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a.sub(b, &self.poly)
    }

    pub fn zeros(&self, rows: usize, cols: usize) -> Matrix {
        Matrix::zeros(&self.poly, rows, cols)
    }

    pub fn identity(&self, n: usize) -> Matrix {
        Matrix::identity(&self.poly, n)
    }

    /// True when every entry of `m` vanishes in `R`.
    pub fn is_zero_matrix(&self, m: &Matrix) -> bool {
        m.entries().iter().all(|p| self.reduce(p).is_zero())
    }

    fn lift_system(&self, a: &Matrix, row_twists: &[i32], col_twists: &[i32]) -> Result<Arc<LiftSystem>> {
        let key = (a.clone(), row_twists.to_vec(), col_twists.to_vec());
        if let Some(sys) = self.lift_cache.read().expect("lift cache").get(&key) {
            return Ok(sys.clone());
        }
        let sys = Arc::new(LiftSystem::new(self.q(), a, row_twists, col_twists)?);
        let mut cache = self.lift_cache.write().expect("lift cache");
        if cache.len() >= CACHE_CAP {
            cache.clear();
        }
        cache.insert(key, sys.clone());
        Ok(sys)
    }

    /// `c` with `A·c = v` in `R`, or `None` when `v` is not in the image.
    pub fn lift(&self, a: &Matrix, row_twists: &[i32], col_twists: &[i32], v: &[Poly]) -> Result<Option<Vec<Poly>>> {
        if v.iter().all(Poly::is_zero) {
            return Ok(Some(vec![self.zero(); a.cols()]));
        }
        if a.cols() == 0 {
            return Ok(None);
        }
        Ok(self.lift_system(a, row_twists, col_twists)?.lift(self.q(), v))
    }

    /// Column-wise lift: `X` with `A·X = B` in `R`, if it exists.
    pub fn lift_matrix(&self, a: &Matrix, row_twists: &[i32], col_twists: &[i32], b: &Matrix) -> Result<Option<Matrix>> {
        let mut cols = Vec::with_capacity(b.cols());
        for j in 0..b.cols() {
            match self.lift(a, row_twists, col_twists, &b.column(j))? {
                Some(c) => cols.push(c),
                None => return Ok(None),
            }
        }
        Ok(Some(Matrix::from_columns(&self.poly, a.cols(), &cols)))
    }

    /// Minimal generators of `{c : A·c = 0 in R}` and their degrees.
    pub fn syzygies(&self, a: &Matrix, row_twists: &[i32], col_twists: &[i32]) -> Result<(Matrix, Vec<i32>)> {
        if a.cols() == 0 {
            return Ok((self.zeros(0, 0), Vec::new()));
        }
        if a.rows() == 0 {
            let (m, d) = self.minimal_columns(&self.identity(a.cols()), col_twists)?;
            return Ok((m, d));
        }
        let sys = self.lift_system(a, row_twists, col_twists)?;
        syzygies_from(self.q(), &sys, col_twists)
    }

    /// A minimal generating subset of the columns of `m`, modulo `I`, sorted
    /// by degree, with the degrees.
    pub fn minimal_columns(&self, m: &Matrix, twists: &[i32]) -> Result<(Matrix, Vec<i32>)> {
        let cols: Vec<Vec<Poly>> = m.columns().iter().map(|c| self.q().reduce_all(c)).collect();
        let keep = minimal_generators(self.q(), twists, &cols)?;
        let mut with_deg: Vec<(i32, usize)> = keep
            .into_iter()
            .map(|k| (crate::gb::syzygy::vector_degree(&self.poly, &cols[k], twists).expect("nonzero"), k))
            .collect();
        with_deg.sort();
        let chosen: Vec<Vec<Poly>> = with_deg.iter().map(|&(_, k)| cols[k].clone()).collect();
        Ok((Matrix::from_columns(&self.poly, m.rows(), &chosen), with_deg.iter().map(|p| p.0).collect()))
    }

    /// Degree of a homogeneous vector in a free module with the given twists.
    pub fn vector_degree(&self, v: &[Poly], twists: &[i32]) -> Option<i32> {
        crate::gb::syzygy::vector_degree(&self.poly, v, twists)
    }

    pub(crate) fn cached_resolution(&self, key: &(Matrix, Vec<i32>, Vec<i32>)) -> Option<ResolutionData> {
        self.resolution_cache.read().expect("resolution cache").get(key).cloned()
    }

    pub(crate) fn store_resolution(&self, key: (Matrix, Vec<i32>, Vec<i32>), data: ResolutionData) {
        let mut cache = self.resolution_cache.write().expect("resolution cache");
        if cache.len() >= CACHE_CAP {
            cache.clear();
        }
        cache.insert(key, data);
    }

    /// Same ring over a different coefficient field.
    pub fn with_field(&self, field: Field) -> Result<Arc<RingCtx>> {
        make_ring(self.spec.clone().over(field))
    }
}

/// The rings used throughout the test suites, with their trusted
/// `gorenstein_fractions` flags.
pub mod gallery {
    use super::*;

    pub fn dual_numbers() -> Arc<RingCtx> {
        make_ring(RingSpec::new(&["x"], &["x^2"]).gorenstein(true)).expect("gallery ring")
    }

    pub fn truncated_cubic() -> Arc<RingCtx> {
        make_ring(RingSpec::new(&["x"], &["x^3"]).gorenstein(true)).expect("gallery ring")
    }

    pub fn node() -> Arc<RingCtx> {
        make_ring(RingSpec::new(&["x", "y"], &["x*y"]).gorenstein(true)).expect("gallery ring")
    }

    pub fn squares() -> Arc<RingCtx> {
        make_ring(RingSpec::new(&["x", "y"], &["x^2", "y^2"]).gorenstein(true)).expect("gallery ring")
    }

    pub fn quadric_cone() -> Arc<RingCtx> {
        make_ring(RingSpec::new(&["x", "y", "z"], &["x^2 - y*z"]).gorenstein(true)).expect("gallery ring")
    }

    pub fn polynomial3() -> Arc<RingCtx> {
        make_ring(RingSpec::new(&["x", "y", "z"], &[]).gorenstein(true)).expect("gallery ring")
    }

    /// `k[x,y,z]/(xy, x^2)`: its total ring of fractions is not Gorenstein.
    pub fn embedded_line() -> Arc<RingCtx> {
        make_ring(RingSpec::new(&["x", "y", "z"], &["x*y", "x^2"])).expect("gallery ring")
    }

    /// The five rings of the randomized suites.
    pub fn suite() -> Vec<(&'static str, Arc<RingCtx>)> {
        vec![
            ("QQ[x]/(x^2)", dual_numbers()),
            ("QQ[x]/(x^3)", truncated_cubic()),
            ("QQ[x,y]/(x*y)", node()),
            ("QQ[x,y]/(x^2,y^2)", squares()),
            ("QQ[x,y,z]/(x^2-y*z)", quadric_cone()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gallery_rings_are_valid() {
        let r = gallery::node();
        assert_eq!(r.ideal_gb().len(), 1);
        assert_eq!(r.fmt(&r.ideal_gb()[0]), "x*y");
        gallery::quadric_cone();
    }

    #[test]
    fn rejects_bad_input() {
        let err = make_ring(RingSpec::new(&["x", "y"], &["x + 1"])).unwrap_err();
        assert!(matches!(err, Error::InhomogeneousIdeal { index: 0, .. }));
        let err = make_ring(RingSpec::new(&["x"], &[]).over(Field::Prime(32004))).unwrap_err();
        assert!(matches!(err, Error::NonPrimeModulus(32004)));
    }

    #[test]
    fn reduction_examples() {
        let r = gallery::embedded_line();
        assert_eq!(r.fmt(&r.parse("x^2*y + x").unwrap()), "x");
        let c = gallery::quadric_cone();
        assert_eq!(c.fmt(&c.parse("x^2").unwrap()), "y*z");
        assert!(c.reduce(&c.zero()).is_zero());
    }

    #[test]
    fn weighted_grading_accepts_weighted_homogeneous_ideal() {
        let mut spec = RingSpec::new(&["x", "y"], &["x^3 - y^2"]);
        spec.weights = Some(vec![2, 3]);
        assert!(make_ring(spec).is_ok());
        assert!(make_ring(RingSpec::new(&["x", "y"], &["x^3 - y^2"])).is_err());
    }
}
