//! Dense matrices of polynomials, stored row-major.

use crate::algebra::{Poly, PolyRing, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl Matrix {
    pub fn zeros(ring: &PolyRing, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, entries: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &PolyRing, n: usize) -> Matrix {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Poly>) -> Matrix {
        assert_eq!(entries.len(), rows * cols, "matrix entry count");
        Matrix { rows, cols, entries }
    }

    /// Builds a matrix from column vectors of length `rows`.
    pub fn from_columns(ring: &PolyRing, rows: usize, columns: &[Vec<Poly>]) -> Matrix {
        let mut m = Matrix::zeros(ring, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, p) in col.iter().enumerate() {
                m.set(i, j, p.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Poly> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn columns(&self) -> Vec<Vec<Poly>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn column_is_zero(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self.get(i, j).is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn neg(&self) -> Matrix {
        self.map(Poly::neg)
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        self.map(|p| p.scale(c))
    }

    pub fn try_add(&self, other: &Matrix, ring: &PolyRing) -> Result<Matrix> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| ring.add(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Matrix, ring: &PolyRing) -> Matrix {
        self.try_add(other, ring).expect("matrix shapes")
    }

    pub fn sub(&self, other: &Matrix, ring: &PolyRing) -> Matrix {
        self.add(&other.neg(), ring)
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Product in the polynomial ring (no reduction modulo an ideal).
    pub fn try_mul(&self, other: &Matrix, ring: &PolyRing) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = ring.mul(a, b);
                    let idx = i * out.cols + j;
                    out.entries[idx] = ring.add(&out.entries[idx], &prod);
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix, ring: &PolyRing) -> Matrix {
        self.try_mul(other, ring).expect("matrix shapes")
    }

    /// Horizontal concatenation; all blocks must have `rows` rows.
    pub fn hstack(ring: &PolyRing, rows: usize, blocks: &[&Matrix]) -> Matrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(ring, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row count");
            for i in 0..rows {
                for j in 0..b.cols {
                    out.set(i, off + j, b.get(i, j).clone());
                }
            }
            off += b.cols;
        }
        out
    }

    /// Vertical concatenation; all blocks must have `cols` columns.
    pub fn vstack(ring: &PolyRing, cols: usize, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Matrix::zeros(ring, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column count");
            for i in 0..b.rows {
                for j in 0..cols {
                    out.set(off + i, j, b.get(i, j).clone());
                }
            }
            off += b.rows;
        }
        out
    }

    pub fn block_diag(ring: &PolyRing, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(ring, rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(ro + i, co + j, b.get(i, j).clone());
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.rows, cols: cols.len(), entries }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            entries.extend_from_slice(&self.entries[i * self.cols..(i + 1) * self.cols]);
        }
        Matrix { rows: rows.len(), cols: self.cols, entries }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        self.select_rows(rows).select_cols(cols)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kronecker(&self, other: &Matrix, ring: &PolyRing) -> Matrix {
        let mut out = Matrix::zeros(ring, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, ring.mul(a, b));
                        }
                    }
                }
            }
        }
        out
    }

    /// Row-per-line rendering used by the text report.
    pub fn render(&self, ring: &PolyRing) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| ring.fmt_poly(self.get(i, j))).collect())
            .collect()
    }
}
