//! Complex matrices (dense or coordinate-sparse) and tagged state vectors.
//!
//! Sparse storage is a coordinate list, compressed on finalize (sorted,
//! duplicates summed, explicit zeros dropped). Small matrices are kept dense:
//! below [`DENSE_THRESHOLD`] the coordinate form buys nothing.

use super::{C64, HERMITICITY_RTOL};

/// Matrices with max(rows, cols) below this are stored dense on finalize.
pub const DENSE_THRESHOLD: usize = 64;

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    /// Row-major dense entries, length rows * cols.
    Dense(Vec<C64>),
    /// Sorted by (row, col), no duplicates, no explicit zeros.
    Coo(Vec<(u32, u32, C64)>),
}

/// A complex matrix on an indexed basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    storage: Storage,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        ComplexMatrix {
            rows,
            cols,
            storage: Storage::Dense(vec![C64::new(0.0, 0.0); rows * cols]),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix {
            rows,
            cols,
            storage: Storage::Dense(data),
        }
    }

    /// Dense constructor from row-major data.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        ComplexMatrix {
            rows,
            cols,
            storage: Storage::Dense(data),
        }
    }

    /// Real-valued convenience constructor, row-major.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Self::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Coo(_))
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        assert!(i < self.rows && j < self.cols);
        match &self.storage {
            Storage::Dense(d) => d[i * self.cols + j],
            Storage::Coo(entries) => {
                let key = (i as u32, j as u32);
                match entries.binary_search_by(|&(r, c, _)| (r, c).cmp(&key)) {
                    Ok(k) => entries[k].2,
                    Err(_) => C64::new(0.0, 0.0),
                }
            }
        }
    }

    /// Set an entry. Dense storage only; build sparse matrices with [`CooBuilder`].
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        assert!(i < self.rows && j < self.cols);
        match &mut self.storage {
            Storage::Dense(d) => d[i * self.cols + j] = v,
            Storage::Coo(_) => panic!("set() on sparse storage; use CooBuilder"),
        }
    }

    /// Row-major dense data, converting if needed.
    pub fn to_dense(&self) -> ComplexMatrix {
        match &self.storage {
            Storage::Dense(_) => self.clone(),
            Storage::Coo(entries) => {
                let mut m = ComplexMatrix::zeros(self.rows, self.cols);
                for &(i, j, v) in entries {
                    m.set(i as usize, j as usize, v);
                }
                m
            }
        }
    }

    /// Borrow the dense data; panics on sparse storage.
    pub fn dense_data(&self) -> &[C64] {
        match &self.storage {
            Storage::Dense(d) => d,
            Storage::Coo(_) => panic!("dense_data() on sparse storage"),
        }
    }

    /// Iterate structurally nonzero entries as (row, col, value).
    pub fn nonzeros(&self) -> Vec<(usize, usize, C64)> {
        match &self.storage {
            Storage::Dense(d) => {
                let mut out = Vec::new();
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        let v = d[i * self.cols + j];
                        if v != C64::new(0.0, 0.0) {
                            out.push((i, j, v));
                        }
                    }
                }
                out
            }
            Storage::Coo(e) => e
                .iter()
                .map(|&(i, j, v)| (i as usize, j as usize, v))
                .collect(),
        }
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        let mut y = vec![C64::new(0.0, 0.0); self.rows];
        match &self.storage {
            Storage::Dense(d) => {
                for i in 0..self.rows {
                    let row = &d[i * self.cols..(i + 1) * self.cols];
                    let mut acc = C64::new(0.0, 0.0);
                    for (a, b) in row.iter().zip(x.iter()) {
                        acc += a * b;
                    }
                    y[i] = acc;
                }
            }
            Storage::Coo(entries) => {
                for &(i, j, v) in entries {
                    y[i as usize] += v * x[j as usize];
                }
            }
        }
        y
    }

    /// Dense matrix product self * other.
    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let a = self.to_dense();
        let b = other.to_dense();
        let (ad, bd) = (a.dense_data(), b.dense_data());
        let mut out = vec![C64::new(0.0, 0.0); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = ad[i * self.cols + k];
                if aik == C64::new(0.0, 0.0) {
                    continue;
                }
                let brow = &bd[k * other.cols..(k + 1) * other.cols];
                let orow = &mut out[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow.iter()) {
                    *o += aik * b;
                }
            }
        }
        ComplexMatrix::from_row_major(self.rows, other.cols, out)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        match &self.storage {
            Storage::Dense(d) => ComplexMatrix::from_fn(self.cols, self.rows, |i, j| {
                d[j * self.cols + i].conj()
            }),
            Storage::Coo(entries) => {
                let mut b = CooBuilder::new(self.cols, self.rows);
                for &(i, j, v) in entries {
                    b.add(j as usize, i as usize, v.conj());
                }
                b.finalize()
            }
        }
    }

    pub fn scale(&self, c: C64) -> ComplexMatrix {
        match &self.storage {
            Storage::Dense(d) => ComplexMatrix {
                rows: self.rows,
                cols: self.cols,
                storage: Storage::Dense(d.iter().map(|v| v * c).collect()),
            },
            Storage::Coo(e) => ComplexMatrix {
                rows: self.rows,
                cols: self.cols,
                storage: Storage::Coo(e.iter().map(|&(i, j, v)| (i, j, v * c)).collect()),
            },
        }
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let a = self.to_dense();
        let b = other.to_dense();
        let data = a
            .dense_data()
            .iter()
            .zip(b.dense_data().iter())
            .map(|(x, y)| x + y)
            .collect();
        ComplexMatrix::from_row_major(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn trace(&self) -> C64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        match &self.storage {
            Storage::Dense(d) => d.iter().map(|v| v.norm()).fold(0.0, f64::max),
            Storage::Coo(e) => e.iter().map(|(_, _, v)| v.norm()).fold(0.0, f64::max),
        }
    }

    /// max |A - A†|, the Hermiticity defect.
    pub fn hermiticity_defect(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        self.sub(&self.dagger()).max_abs()
    }

    /// A matrix passes the `hermitian` flag when
    /// max|A - A†| < 1e-12 * max|A|.
    pub fn is_hermitian(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let scale = self.max_abs();
        if scale == 0.0 {
            return true;
        }
        self.hermiticity_defect() < HERMITICITY_RTOL * scale
    }
}

/// Coordinate-list builder; `finalize` compresses (sorts, sums duplicates,
/// drops explicit zeros) and picks the storage form.
pub struct CooBuilder {
    rows: usize,
    cols: usize,
    entries: Vec<(u32, u32, C64)>,
}

impl CooBuilder {
    pub fn new(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        assert!(rows <= u32::MAX as usize && cols <= u32::MAX as usize);
        CooBuilder {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn add(&mut self, i: usize, j: usize, v: C64) {
        assert!(i < self.rows && j < self.cols);
        self.entries.push((i as u32, j as u32, v));
    }

    pub fn finalize(mut self) -> ComplexMatrix {
        self.entries.sort_by_key(|&(i, j, _)| (i, j));
        let mut compressed: Vec<(u32, u32, C64)> = Vec::with_capacity(self.entries.len());
        for (i, j, v) in self.entries {
            match compressed.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => compressed.push((i, j, v)),
            }
        }
        compressed.retain(|&(_, _, v)| v != C64::new(0.0, 0.0));
        let m = ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            storage: Storage::Coo(compressed),
        };
        if self.rows.max(self.cols) < DENSE_THRESHOLD {
            m.to_dense()
        } else {
            m
        }
    }
}

/// Kronecker product: entry a[i,j]*b[k,l] lands at ((i,k),(j,l)) in
/// row-major composite indexing (first factor most significant).
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    let mut builder = CooBuilder::new(rows, cols);
    let bnz = b.nonzeros();
    for (i, j, av) in a.nonzeros() {
        for &(k, l, bv) in &bnz {
            builder.add(i * b.rows() + k, j * b.cols() + l, av * bv);
        }
    }
    builder.finalize()
}

/// A complex state vector tagged with the basis it is expressed in.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub amplitudes: Vec<C64>,
    pub basis_tag: String,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>, basis_tag: impl Into<String>) -> Self {
        let v = StateVector {
            amplitudes,
            basis_tag: basis_tag.into(),
        };
        assert!(v.dim() > 0, "state vector must have positive dimension");
        v
    }

    /// Basis state |k> in a `dim`-dimensional space.
    pub fn basis_state(dim: usize, k: usize, basis_tag: impl Into<String>) -> Self {
        assert!(k < dim);
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[k] = C64::new(1.0, 0.0);
        StateVector::new(amplitudes, basis_tag)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// A vector passes the `normalized` flag when | ||v|| - 1 | < 1e-10.
    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() < 1e-10
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        for a in &mut self.amplitudes {
            *a /= n;
        }
        self
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        assert_eq!(self.dim(), other.dim());
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    #[test]
    fn kron_identity_case() {
        let i2 = ComplexMatrix::identity(2);
        let k = kron(&i2, &i2);
        assert_eq!(k, ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_diagonal_case() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]);
        let b = ComplexMatrix::from_real_rows(&[&[3.0, 0.0], &[0.0, 4.0]]);
        let k = kron(&a, &b);
        let expect = [3.0, 4.0, 6.0, 8.0];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(k.get(i, i), C64::new(*e, 0.0));
        }
    }

    #[test]
    fn kron_pauli_row() {
        // Hand expansion of the 4x4 product sigma_x (x) sigma_z, row 0.
        let k = kron(&pauli_x(), &pauli_z());
        let row0: Vec<f64> = (0..4).map(|j| k.get(0, j).re).collect();
        assert_eq!(row0, vec![0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn coo_compression_drops_zeros_and_sums_duplicates() {
        let mut b = CooBuilder::new(100, 100);
        b.add(3, 7, C64::new(1.0, 0.0));
        b.add(3, 7, C64::new(2.0, 0.0));
        b.add(5, 5, C64::new(1.0, 0.0));
        b.add(5, 5, C64::new(-1.0, 0.0));
        let m = b.finalize();
        assert!(m.is_sparse());
        assert_eq!(m.get(3, 7), C64::new(3.0, 0.0));
        assert_eq!(m.nonzeros().len(), 1);
    }

    #[test]
    fn hermitian_flag() {
        let h = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => C64::new(0.0, 1.0),
            (1, 0) => C64::new(0.0, -1.0),
            _ => C64::new(1.0, 0.0),
        });
        assert!(h.is_hermitian());
        let mut g = h.clone();
        g.set(0, 1, C64::new(0.0, 1.0 + 1e-6));
        assert!(!g.is_hermitian());
    }

    #[test]
    fn matvec_sparse_matches_dense() {
        let mut b = CooBuilder::new(80, 80);
        b.add(0, 1, C64::new(1.0, 2.0));
        b.add(79, 0, C64::new(-3.0, 0.5));
        b.add(40, 40, C64::new(2.0, 0.0));
        let m = b.finalize();
        let x: Vec<C64> = (0..80).map(|k| C64::new(k as f64, -(k as f64))).collect();
        let y_sparse = m.matvec(&x);
        let y_dense = m.to_dense().matvec(&x);
        for (a, b) in y_sparse.iter().zip(y_dense.iter()) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}
