//! Exact dense linear algebra over GF(p) for small p and dimension <= 24.
//!
//! GF(2) rows are stored as machine-word bitsets; general p uses byte arrays.
//! The canonical order on vectors and matrices is lexicographic on row-major
//! entries, which is what every deterministic enumeration in this crate sorts
//! by.

use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

/// Hard ceiling on vector/matrix dimension so GF(2) rows fit one `u32`.
pub const MAX_DIM: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GfError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u8, u8),
    #[error("matrix is singular")]
    Singular,
    #[error("{0} is not a prime modulus")]
    NotPrime(u8),
    #[error("dimension {0} out of range 1..={MAX_DIM}")]
    DimOutOfRange(usize),
    #[error("entry {0} not reduced mod {1}")]
    BadEntry(u8, u8),
    #[error("parse error: {0}")]
    Parse(String),
}

pub(crate) fn is_prime(p: u8) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u16;
    let p = p as u16;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_modulus(p: u8) -> Result<(), GfError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(GfError::NotPrime(p))
    }
}

fn check_dim(n: usize) -> Result<(), GfError> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(GfError::DimOutOfRange(n))
    }
}

// ---------------------------------------------------------------------------
// Vectors
// ---------------------------------------------------------------------------

/// Column vector over GF(p); every entry reduced mod p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GFVector {
    p: u8,
    entries: Vec<u8>,
}

impl GFVector {
    pub fn new(p: u8, entries: Vec<u8>) -> Result<Self, GfError> {
        check_modulus(p)?;
        check_dim(entries.len())?;
        for &e in &entries {
            if e >= p {
                return Err(GfError::BadEntry(e, p));
            }
        }
        Ok(GFVector { p, entries })
    }

    pub fn zero(p: u8, dim: usize) -> Self {
        GFVector::new(p, vec![0; dim]).expect("zero vector dims")
    }

    /// Standard basis vector e_i.
    pub fn basis(p: u8, dim: usize, i: usize) -> Self {
        let mut entries = vec![0; dim];
        entries[i] = 1;
        GFVector::new(p, entries).expect("basis vector dims")
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> u8 {
        self.entries[i]
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn add(&self, rhs: &GFVector) -> Result<GFVector, GfError> {
        if self.p != rhs.p {
            return Err(GfError::ModulusMismatch(self.p, rhs.p));
        }
        if self.dim() != rhs.dim() {
            return Err(GfError::DimensionMismatch(format!(
                "vector add {} vs {}",
                self.dim(),
                rhs.dim()
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(&a, &b)| ((a as u16 + b as u16) % self.p as u16) as u8)
            .collect();
        Ok(GFVector { p: self.p, entries })
    }

    pub fn neg(&self) -> GFVector {
        let entries = self
            .entries
            .iter()
            .map(|&a| if a == 0 { 0 } else { self.p - a })
            .collect();
        GFVector { p: self.p, entries }
    }

    pub fn scale(&self, c: u8) -> GFVector {
        let entries = self
            .entries
            .iter()
            .map(|&a| ((a as u16 * c as u16) % self.p as u16) as u8)
            .collect();
        GFVector { p: self.p, entries }
    }

    /// Canonical point index: first entry most significant, so index order
    /// equals lexicographic order and 0_V maps to index 0.
    pub fn point_index(&self) -> usize {
        let mut idx = 0usize;
        for &e in &self.entries {
            idx = idx * self.p as usize + e as usize;
        }
        idx
    }

    pub fn from_point_index(p: u8, dim: usize, mut idx: usize) -> Self {
        let mut entries = vec![0u8; dim];
        for i in (0..dim).rev() {
            entries[i] = (idx % p as usize) as u8;
            idx /= p as usize;
        }
        GFVector { p, entries }
    }

    /// GF(2) rows packed as bits, column j in bit j.
    pub(crate) fn bits(&self) -> u32 {
        debug_assert_eq!(self.p, 2);
        let mut b = 0u32;
        for (j, &e) in self.entries.iter().enumerate() {
            b |= (e as u32) << j;
        }
        b
    }
}

impl PartialOrd for GFVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GFVector {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p, &self.entries).cmp(&(other.p, &other.entries))
    }
}

impl fmt::Debug for GFVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{:?}", self.entries)
    }
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Hash)]
enum MatrixData {
    /// p = 2: one u32 per row, column j in bit j.
    Bits(Vec<u32>),
    /// general p: row-major bytes.
    Bytes(Vec<u8>),
}

/// Dense matrix over GF(p). For p = 2 the rows are bit-packed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GFMatrix {
    p: u8,
    rows: usize,
    cols: usize,
    data: MatrixData,
}

impl GFMatrix {
    pub fn from_entries(p: u8, rows: usize, cols: usize, entries: &[u8]) -> Result<Self, GfError> {
        check_modulus(p)?;
        check_dim(rows)?;
        check_dim(cols)?;
        if entries.len() != rows * cols {
            return Err(GfError::DimensionMismatch(format!(
                "expected {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        for &e in entries {
            if e >= p {
                return Err(GfError::BadEntry(e, p));
            }
        }
        let data = if p == 2 {
            let mut packed = vec![0u32; rows];
            for i in 0..rows {
                for j in 0..cols {
                    packed[i] |= (entries[i * cols + j] as u32) << j;
                }
            }
            MatrixData::Bits(packed)
        } else {
            MatrixData::Bytes(entries.to_vec())
        };
        Ok(GFMatrix {
            p,
            rows,
            cols,
            data,
        })
    }

    pub fn zero(p: u8, rows: usize, cols: usize) -> Self {
        GFMatrix::from_entries(p, rows, cols, &vec![0; rows * cols]).expect("zero matrix dims")
    }

    pub fn identity(p: u8, n: usize) -> Self {
        let mut m = GFMatrix::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        match &self.data {
            MatrixData::Bits(r) => ((r[i] >> j) & 1) as u8,
            MatrixData::Bytes(d) => d[i * self.cols + j],
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        debug_assert!(v < self.p);
        match &mut self.data {
            MatrixData::Bits(r) => {
                r[i] = (r[i] & !(1 << j)) | ((v as u32) << j);
            }
            MatrixData::Bytes(d) => d[i * self.cols + j] = v,
        }
    }

    pub fn row(&self, i: usize) -> GFVector {
        let entries = (0..self.cols).map(|j| self.get(i, j)).collect();
        GFVector { p: self.p, entries }
    }

    pub fn col(&self, j: usize) -> GFVector {
        let entries = (0..self.rows).map(|i| self.get(i, j)).collect();
        GFVector { p: self.p, entries }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == GFMatrix::identity(self.p, self.rows)
    }

    pub fn mat_mul(&self, rhs: &GFMatrix) -> Result<GFMatrix, GfError> {
        if self.p != rhs.p {
            return Err(GfError::ModulusMismatch(self.p, rhs.p));
        }
        if self.cols != rhs.rows {
            return Err(GfError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        match (&self.data, &rhs.data) {
            (MatrixData::Bits(a), MatrixData::Bits(b)) => {
                // Row i of the product is the XOR of the rows of rhs selected
                // by the bits of row i of self.
                let mut out = vec![0u32; self.rows];
                for i in 0..self.rows {
                    let mut acc = 0u32;
                    let mut mask = a[i];
                    while mask != 0 {
                        let j = mask.trailing_zeros() as usize;
                        acc ^= b[j];
                        mask &= mask - 1;
                    }
                    out[i] = acc;
                }
                Ok(GFMatrix {
                    p: 2,
                    rows: self.rows,
                    cols: rhs.cols,
                    data: MatrixData::Bits(out),
                })
            }
            _ => {
                let mut out = vec![0u8; self.rows * rhs.cols];
                for i in 0..self.rows {
                    for k in 0..self.cols {
                        let a = self.get(i, k) as u32;
                        if a == 0 {
                            continue;
                        }
                        for j in 0..rhs.cols {
                            let cur = out[i * rhs.cols + j] as u32;
                            out[i * rhs.cols + j] =
                                ((cur + a * rhs.get(k, j) as u32) % self.p as u32) as u8;
                        }
                    }
                }
                GFMatrix::from_entries(self.p, self.rows, rhs.cols, &out)
            }
        }
    }

    /// Naive entrywise product; test oracle for the bit-packed path.
    pub fn mat_mul_naive(&self, rhs: &GFMatrix) -> Result<GFMatrix, GfError> {
        if self.p != rhs.p {
            return Err(GfError::ModulusMismatch(self.p, rhs.p));
        }
        if self.cols != rhs.rows {
            return Err(GfError::DimensionMismatch("naive mul".into()));
        }
        let mut out = GFMatrix::zero(self.p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = 0u32;
                for k in 0..self.cols {
                    acc += self.get(i, k) as u32 * rhs.get(k, j) as u32;
                }
                out.set(i, j, (acc % self.p as u32) as u8);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &GFVector) -> Result<GFVector, GfError> {
        if self.p != v.p {
            return Err(GfError::ModulusMismatch(self.p, v.p));
        }
        if self.cols != v.dim() {
            return Err(GfError::DimensionMismatch(format!(
                "{}x{} * vec{}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        match &self.data {
            MatrixData::Bits(rows) => {
                let vb = v.bits();
                let entries = rows
                    .iter()
                    .map(|&r| ((r & vb).count_ones() & 1) as u8)
                    .collect();
                Ok(GFVector { p: 2, entries })
            }
            MatrixData::Bytes(_) => {
                let entries = (0..self.rows)
                    .map(|i| {
                        let mut acc = 0u32;
                        for k in 0..self.cols {
                            acc += self.get(i, k) as u32 * v.get(k) as u32;
                        }
                        (acc % self.p as u32) as u8
                    })
                    .collect();
                Ok(GFVector { p: self.p, entries })
            }
        }
    }

    pub fn add(&self, rhs: &GFMatrix) -> Result<GFMatrix, GfError> {
        if self.p != rhs.p {
            return Err(GfError::ModulusMismatch(self.p, rhs.p));
        }
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(GfError::DimensionMismatch("matrix add".into()));
        }
        let mut out = GFMatrix::zero(self.p, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(
                    i,
                    j,
                    ((self.get(i, j) as u16 + rhs.get(i, j) as u16) % self.p as u16) as u8,
                );
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &GFMatrix) -> Result<GFMatrix, GfError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> GFMatrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                out.set(i, j, if e == 0 { 0 } else { self.p - e });
            }
        }
        out
    }

    pub fn transpose(&self) -> GFMatrix {
        let mut out = GFMatrix::zero(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Result<GFMatrix, GfError> {
        if self.rows != self.cols {
            return Err(GfError::DimensionMismatch("pow of non-square".into()));
        }
        let mut acc = GFMatrix::identity(self.p, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mat_mul(&base)?;
            }
            base = base.mat_mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Gauss-Jordan inverse.
    pub fn mat_inverse(&self) -> Result<GFMatrix, GfError> {
        if self.rows != self.cols {
            return Err(GfError::DimensionMismatch("inverse of non-square".into()));
        }
        let n = self.rows;
        let p = self.p as u16;
        // Work in bytes regardless of storage; n <= 24 keeps this cheap.
        let mut a: Vec<u8> = (0..n * n).map(|k| self.get(k / n, k % n)).collect();
        let mut inv: Vec<u8> = {
            let mut v = vec![0u8; n * n];
            for i in 0..n {
                v[i * n + i] = 1;
            }
            v
        };
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a[r * n + col] != 0)
                .ok_or(GfError::Singular)?;
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                    inv.swap(col * n + j, pivot * n + j);
                }
            }
            let inv_pivot = mod_inverse(a[col * n + col], self.p);
            for j in 0..n {
                a[col * n + j] = ((a[col * n + j] as u16 * inv_pivot as u16) % p) as u8;
                inv[col * n + j] = ((inv[col * n + j] as u16 * inv_pivot as u16) % p) as u8;
            }
            for r in 0..n {
                if r != col && a[r * n + col] != 0 {
                    let f = a[r * n + col] as u16;
                    for j in 0..n {
                        let sub = (f * a[col * n + j] as u16) % p;
                        a[r * n + j] = ((a[r * n + j] as u16 + p - sub) % p) as u8;
                        let sub = (f * inv[col * n + j] as u16) % p;
                        inv[r * n + j] = ((inv[r * n + j] as u16 + p - sub) % p) as u8;
                    }
                }
            }
        }
        GFMatrix::from_entries(self.p, n, n, &inv)
    }

    /// Determinant by Gaussian elimination; independent check for rank-style
    /// claims.
    pub fn det(&self) -> Result<u8, GfError> {
        if self.rows != self.cols {
            return Err(GfError::DimensionMismatch("det of non-square".into()));
        }
        let n = self.rows;
        let p = self.p as u16;
        let mut a: Vec<u8> = (0..n * n).map(|k| self.get(k / n, k % n)).collect();
        let mut det = 1u16;
        for col in 0..n {
            let pivot = match (col..n).find(|&r| a[r * n + col] != 0) {
                Some(r) => r,
                None => return Ok(0),
            };
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = (det * (p - 1)) % p;
            }
            det = (det * a[col * n + col] as u16) % p;
            let inv_pivot = mod_inverse(a[col * n + col], self.p) as u16;
            for r in col + 1..n {
                if a[r * n + col] != 0 {
                    let f = (a[r * n + col] as u16 * inv_pivot) % p;
                    for j in col..n {
                        let sub = (f * a[col * n + j] as u16) % p;
                        a[r * n + j] = ((a[r * n + j] as u16 + p - sub) % p) as u8;
                    }
                }
            }
        }
        Ok(det as u8)
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<GFVector> = (0..self.rows).map(|i| self.row(i)).collect();
        echelonize_rows(self.p, self.cols, &rows).len()
    }

    /// Basis of the right null space {x : Mx = 0}.
    pub fn null_space(&self) -> Subspace {
        let n = self.cols;
        let rows: Vec<GFVector> = (0..self.rows).map(|i| self.row(i)).collect();
        let rref = echelonize_rows(self.p, n, &rows);
        let mut pivots = Vec::new();
        for r in &rref {
            let j = (0..n).find(|&j| r.get(j) != 0).unwrap();
            pivots.push(j);
        }
        let mut basis = Vec::new();
        for free in 0..n {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![0u8; n];
            v[free] = 1;
            for (r, &pj) in rref.iter().zip(&pivots) {
                // pivot entry is 1 in rref, so x[pj] = -r[free]
                let c = r.get(free);
                v[pj] = if c == 0 { 0 } else { self.p - c };
            }
            basis.push(GFVector {
                p: self.p,
                entries: v,
            });
        }
        Subspace::from_basis_unchecked(self.p, n, echelonize_rows(self.p, n, &basis))
    }

    /// Kronecker product, used for tensor-module actions.
    pub fn kron(&self, rhs: &GFMatrix) -> Result<GFMatrix, GfError> {
        if self.p != rhs.p {
            return Err(GfError::ModulusMismatch(self.p, rhs.p));
        }
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        check_dim(rows)?;
        check_dim(cols)?;
        let mut out = GFMatrix::zero(self.p, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j) as u16;
                if a == 0 {
                    continue;
                }
                for r in 0..rhs.rows {
                    for c in 0..rhs.cols {
                        let v = (a * rhs.get(r, c) as u16) % self.p as u16;
                        out.set(i * rhs.rows + r, j * rhs.cols + c, v as u8);
                    }
                }
            }
        }
        Ok(out)
    }
}

impl PartialOrd for GFMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GFMatrix {
    /// Lexicographic on row-major entries (the canonical enumeration order).
    fn cmp(&self, other: &Self) -> Ordering {
        let key = (self.p, self.rows, self.cols);
        let okey = (other.p, other.rows, other.cols);
        key.cmp(&okey)
            .then_with(|| match (&self.data, &other.data) {
                (MatrixData::Bits(a), MatrixData::Bits(b)) => {
                    for (&ra, &rb) in a.iter().zip(b) {
                        // first differing column decides; column j sits in bit j
                        let x = ra ^ rb;
                        if x != 0 {
                            let j = x.trailing_zeros();
                            return ((ra >> j) & 1).cmp(&((rb >> j) & 1));
                        }
                    }
                    Ordering::Equal
                }
                _ => {
                    for i in 0..self.rows {
                        for j in 0..self.cols {
                            let c = self.get(i, j).cmp(&other.get(i, j));
                            if c != Ordering::Equal {
                                return c;
                            }
                        }
                    }
                    Ordering::Equal
                }
            })
    }
}

impl fmt::Debug for GFMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GFMatrix(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(
                f,
                "  {:?}",
                (0..self.cols).map(|j| self.get(i, j)).collect::<Vec<_>>()
            )?;
        }
        Ok(())
    }
}

pub(crate) fn mod_inverse(a: u8, p: u8) -> u8 {
    // p is prime and a != 0, so Fermat works; p <= 251 keeps this u32-safe.
    let mut acc = 1u32;
    let mut base = a as u32 % p as u32;
    let mut e = p as u32 - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u32;
        }
        base = base * base % p as u32;
        e >>= 1;
    }
    acc as u8
}

// ---------------------------------------------------------------------------
// Subspaces and echelon forms
// ---------------------------------------------------------------------------

/// Subspace of F_p^n held as a reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    p: u8,
    ambient_dim: usize,
    basis: Vec<GFVector>,
}

fn echelonize_rows(p: u8, dim: usize, vectors: &[GFVector]) -> Vec<GFVector> {
    let mut rows: Vec<Vec<u8>> = vectors.iter().map(|v| v.entries.clone()).collect();
    let mut basis: Vec<Vec<u8>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for row in rows.drain(..) {
        let mut row = row;
        // reduce against existing pivots
        for (b, &pj) in basis.iter().zip(&pivots) {
            let c = row[pj];
            if c != 0 {
                for (rj, &bj) in row.iter_mut().zip(b.iter()) {
                    let sub = (c as u16 * bj as u16) % p as u16;
                    *rj = ((*rj as u16 + p as u16 - sub) % p as u16) as u8;
                }
            }
        }
        if let Some(pj) = (0..dim).find(|&j| row[j] != 0) {
            let inv = mod_inverse(row[pj], p);
            for rj in row.iter_mut() {
                *rj = ((*rj as u16 * inv as u16) % p as u16) as u8;
            }
            // back-substitute into earlier rows
            for (b, _) in basis.iter_mut().zip(&pivots) {
                let c = b[pj];
                if c != 0 {
                    for j in 0..dim {
                        let sub = (c as u16 * row[j] as u16) % p as u16;
                        b[j] = ((b[j] as u16 + p as u16 - sub) % p as u16) as u8;
                    }
                }
            }
            let pos = pivots.iter().position(|&q| q > pj).unwrap_or(pivots.len());
            pivots.insert(pos, pj);
            basis.insert(pos, row);
        }
    }
    basis
        .into_iter()
        .map(|entries| GFVector { p, entries })
        .collect()
}

/// Reduced row-echelon basis of the span of `vectors`.
pub fn echelonize(p: u8, ambient_dim: usize, vectors: &[GFVector]) -> Result<Subspace, GfError> {
    check_modulus(p)?;
    check_dim(ambient_dim)?;
    for v in vectors {
        if v.p != p {
            return Err(GfError::ModulusMismatch(p, v.p));
        }
        if v.dim() != ambient_dim {
            return Err(GfError::DimensionMismatch(format!(
                "echelonize: vector dim {} in ambient {}",
                v.dim(),
                ambient_dim
            )));
        }
    }
    Ok(Subspace {
        p,
        ambient_dim,
        basis: echelonize_rows(p, ambient_dim, vectors),
    })
}

impl Subspace {
    pub(crate) fn from_basis_unchecked(p: u8, ambient_dim: usize, basis: Vec<GFVector>) -> Self {
        Subspace {
            p,
            ambient_dim,
            basis,
        }
    }

    pub fn zero(p: u8, ambient_dim: usize) -> Self {
        Subspace {
            p,
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(p: u8, ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| GFVector::basis(p, ambient_dim, i))
            .collect();
        Subspace {
            p,
            ambient_dim,
            basis,
        }
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[GFVector] {
        &self.basis
    }

    pub fn contains(&self, v: &GFVector) -> bool {
        if v.dim() != self.ambient_dim || v.p != self.p {
            return false;
        }
        let mut row = v.entries.clone();
        for b in &self.basis {
            let pj = (0..self.ambient_dim).find(|&j| b.get(j) != 0).unwrap();
            let c = row[pj];
            if c != 0 {
                for (j, rj) in row.iter_mut().enumerate() {
                    let sub = (c as u16 * b.get(j) as u16) % self.p as u16;
                    *rj = ((*rj as u16 + self.p as u16 - sub) % self.p as u16) as u8;
                }
            }
        }
        row.iter().all(|&e| e == 0)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    /// All p^dim vectors of the subspace, in canonical point-index order.
    pub fn enumerate(&self) -> Vec<GFVector> {
        let k = self.basis.len();
        let mut out = Vec::with_capacity((self.p as usize).pow(k as u32));
        let total = (self.p as usize).pow(k as u32);
        for mut t in 0..total {
            let mut v = GFVector::zero(self.p, self.ambient_dim);
            for b in self.basis.iter().rev() {
                let c = (t % self.p as usize) as u8;
                t /= self.p as usize;
                if c != 0 {
                    v = v.add(&b.scale(c)).unwrap();
                }
            }
            out.push(v);
        }
        out.sort();
        out
    }

    pub fn point_indices(&self) -> Vec<usize> {
        self.enumerate().iter().map(|v| v.point_index()).collect()
    }
}

/// The common fixed space {u : Mu = u for all M}, i.e. the intersection of the
/// kernels of M - I.
pub fn fixed_space(mats: &[GFMatrix]) -> Result<Subspace, GfError> {
    let first = mats
        .first()
        .ok_or_else(|| GfError::DimensionMismatch("fixed_space of empty matrix list".into()))?;
    let (p, n) = (first.p, first.rows);
    let mut stacked_rows: Vec<GFVector> = Vec::new();
    for m in mats {
        if m.rows != m.cols {
            return Err(GfError::DimensionMismatch("fixed_space non-square".into()));
        }
        if m.rows != n || m.p != p {
            return Err(GfError::DimensionMismatch(
                "fixed_space mixed dimensions".into(),
            ));
        }
        let diff = m.sub(&GFMatrix::identity(p, n))?;
        for i in 0..n {
            stacked_rows.push(diff.row(i));
        }
    }
    // kernel of the stacked (M - I) block matrix
    let rref = echelonize_rows(p, n, &stacked_rows);
    let mut m = GFMatrix::zero(p, rref.len().max(1), n);
    for (i, r) in rref.iter().enumerate() {
        for j in 0..n {
            m.set(i, j, r.get(j));
        }
    }
    Ok(m.null_space())
}

/// Every subspace of F_p^n, found by breadth-first span extension. Intended
/// for n <= 6 at p = 2.
pub fn all_subspaces(p: u8, n: usize) -> Vec<Subspace> {
    let zero = Subspace::zero(p, n);
    let mut seen = std::collections::HashSet::new();
    let mut out = vec![zero.clone()];
    seen.insert(zero.basis.clone());
    let mut frontier = vec![zero];
    let points: Vec<GFVector> = (1..(p as usize).pow(n as u32))
        .map(|i| GFVector::from_point_index(p, n, i))
        .collect();
    while let Some(s) = frontier.pop() {
        for v in &points {
            if s.contains(v) {
                continue;
            }
            let mut vecs = s.basis.clone();
            vecs.push(v.clone());
            let bigger = echelonize(p, n, &vecs).unwrap();
            if seen.insert(bigger.basis.clone()) {
                out.push(bigger.clone());
                frontier.push(bigger);
            }
        }
    }
    out.sort_by_key(|s| (s.dim(), s.basis().to_vec()));
    out
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

/// Matrix text format: header "p rows cols", then one row per line with
/// entries as digits separated by single spaces. Bit-exact round trip.
pub fn write_matrix(m: &GFMatrix) -> String {
    let mut s = format!("{} {} {}\n", m.p, m.rows, m.cols);
    for i in 0..m.rows {
        let row: Vec<String> = (0..m.cols).map(|j| m.get(i, j).to_string()).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

pub fn parse_matrix(text: &str) -> Result<GFMatrix, GfError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| GfError::Parse("empty matrix text".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(GfError::Parse(format!("bad header {header:?}")));
    }
    let p: u8 = parts[0]
        .parse()
        .map_err(|_| GfError::Parse("bad modulus".into()))?;
    let rows: usize = parts[1]
        .parse()
        .map_err(|_| GfError::Parse("bad row count".into()))?;
    let cols: usize = parts[2]
        .parse()
        .map_err(|_| GfError::Parse("bad col count".into()))?;
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| GfError::Parse("missing matrix row".into()))?;
        for tok in line.split_whitespace() {
            entries.push(
                tok.parse::<u8>()
                    .map_err(|_| GfError::Parse(format!("bad entry {tok:?}")))?,
            );
        }
    }
    GFMatrix::from_entries(p, rows, cols, &entries)
}
