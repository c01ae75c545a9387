//! Affine transformations of V = F_p^n, the elements of Aff(V) = Hol(V).
//!
//! An element is a pair (A, v) acting as x -> v + Ax, equivalently the block
//! matrix [A v; 0 1]. Composition matches the block-matrix product:
//! (v, A)(w, B) = (v + Aw, AB).

use crate::gf::{GFMatrix, GFVector, GfError};
use crate::group::{GroupElement, PointAction};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineElement {
    lin: GFMatrix,
    trans: GFVector,
}

impl AffineElement {
    pub fn new(lin: GFMatrix, trans: GFVector) -> Result<Self, GfError> {
        if lin.rows() != lin.cols() {
            return Err(GfError::DimensionMismatch("linear part not square".into()));
        }
        if lin.p() != trans.p() || lin.rows() != trans.dim() {
            return Err(GfError::DimensionMismatch(
                "linear and translation parts disagree".into(),
            ));
        }
        // invertibility of the linear part is an invariant of Aff(V)
        lin.mat_inverse()?;
        Ok(AffineElement { lin, trans })
    }

    pub fn identity(p: u8, n: usize) -> Self {
        AffineElement {
            lin: GFMatrix::identity(p, n),
            trans: GFVector::zero(p, n),
        }
    }

    pub fn translation(v: GFVector) -> Self {
        AffineElement {
            lin: GFMatrix::identity(v.p(), v.dim()),
            trans: v,
        }
    }

    pub fn linear(m: GFMatrix) -> Result<Self, GfError> {
        let v = GFVector::zero(m.p(), m.rows());
        AffineElement::new(m, v)
    }

    pub fn lin(&self) -> &GFMatrix {
        &self.lin
    }

    pub fn trans(&self) -> &GFVector {
        &self.trans
    }

    pub fn p(&self) -> u8 {
        self.lin.p()
    }

    pub fn dim(&self) -> usize {
        self.lin.rows()
    }

    pub fn is_translation(&self) -> bool {
        self.lin.is_identity()
    }

    /// The affine action: v + A x.
    pub fn act(&self, x: &GFVector) -> Result<GFVector, GfError> {
        self.lin.mul_vec(x)?.add(&self.trans)
    }

    /// The (n+1) x (n+1) block matrix [A v; 0 1].
    pub fn block_matrix(&self) -> GFMatrix {
        let n = self.dim();
        let mut m = GFMatrix::zero(self.p(), n + 1, n + 1);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.lin.get(i, j));
            }
            m.set(i, n, self.trans.get(i));
        }
        m.set(n, n, 1);
        m
    }

    pub fn from_block_matrix(m: &GFMatrix) -> Result<Self, GfError> {
        let n = m.rows() - 1;
        if m.rows() != m.cols() || n == 0 {
            return Err(GfError::DimensionMismatch("bad block matrix shape".into()));
        }
        for j in 0..n {
            if m.get(n, j) != 0 {
                return Err(GfError::DimensionMismatch(
                    "bottom row must be 0..0 1".into(),
                ));
            }
        }
        if m.get(n, n) != 1 {
            return Err(GfError::DimensionMismatch(
                "bottom row must be 0..0 1".into(),
            ));
        }
        let mut lin = GFMatrix::zero(m.p(), n, n);
        let mut trans = vec![0u8; n];
        for (i, t) in trans.iter_mut().enumerate() {
            for j in 0..n {
                lin.set(i, j, m.get(i, j));
            }
            *t = m.get(i, n);
        }
        AffineElement::new(lin, GFVector::new(m.p(), trans)?)
    }
}

impl GroupElement for AffineElement {
    fn identity_like(&self) -> Self {
        AffineElement::identity(self.p(), self.dim())
    }

    fn op(&self, rhs: &Self) -> Self {
        let lin = self.lin.mat_mul(&rhs.lin).expect("compatible affine dims");
        let trans = self
            .lin
            .mul_vec(&rhs.trans)
            .and_then(|v| v.add(&self.trans))
            .expect("compatible affine dims");
        AffineElement { lin, trans }
    }

    fn inverse(&self) -> Self {
        let inv = self.lin.mat_inverse().expect("linear part invertible");
        let trans = inv.mul_vec(&self.trans).expect("dims").neg();
        AffineElement { lin: inv, trans }
    }
}

impl PointAction for AffineElement {
    fn degree(&self) -> usize {
        (self.p() as usize).pow(self.dim() as u32)
    }

    fn image_of(&self, point: usize) -> usize {
        let x = GFVector::from_point_index(self.p(), self.dim(), point);
        self.act(&x).expect("dims").point_index()
    }
}

impl PartialOrd for AffineElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AffineElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.lin, &self.trans).cmp(&(&other.lin, &other.trans))
    }
}

impl fmt::Debug for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Affine(v={:?}, A={:?})", self.trans, self.lin)
    }
}

/// One generator per line: the n*n linear entries row-major, then the n
/// translation entries, space separated.
pub fn write_affine_line(e: &AffineElement) -> String {
    let n = e.dim();
    let mut parts = Vec::with_capacity(n * n + n);
    for i in 0..n {
        for j in 0..n {
            parts.push(e.lin().get(i, j).to_string());
        }
    }
    for i in 0..n {
        parts.push(e.trans().get(i).to_string());
    }
    parts.join(" ")
}

pub fn parse_affine_line(p: u8, n: usize, line: &str) -> Result<AffineElement, GfError> {
    let nums: Result<Vec<u8>, _> = line.split_whitespace().map(|t| t.parse::<u8>()).collect();
    let nums = nums.map_err(|_| GfError::Parse(format!("bad affine line {line:?}")))?;
    if nums.len() != n * n + n {
        return Err(GfError::Parse(format!(
            "affine line needs {} entries, got {}",
            n * n + n,
            nums.len()
        )));
    }
    let lin = GFMatrix::from_entries(p, n, n, &nums[..n * n])?;
    let trans = GFVector::new(p, nums[n * n..].to_vec())?;
    AffineElement::new(lin, trans)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aff(p: u8, lin_entries: &[u8], trans: &[u8]) -> AffineElement {
        let n = trans.len();
        AffineElement::new(
            GFMatrix::from_entries(p, n, n, lin_entries).unwrap(),
            GFVector::new(p, trans.to_vec()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn composition_matches_block_matrix_product() {
        let a = aff(2, &[0, 1, 1, 0], &[1, 0]);
        let b = aff(2, &[1, 1, 0, 1], &[0, 1]);
        let prod = a.op(&b);
        let block = a.block_matrix().mat_mul(&b.block_matrix()).unwrap();
        assert_eq!(prod.block_matrix(), block);
        assert_eq!(AffineElement::from_block_matrix(&block).unwrap(), prod);
    }

    #[test]
    fn action_is_a_homomorphism() {
        let a = aff(2, &[0, 1, 1, 0], &[1, 0]);
        let b = aff(2, &[1, 1, 0, 1], &[0, 1]);
        for idx in 0..4 {
            let x = GFVector::from_point_index(2, 2, idx);
            let lhs = a.op(&b).act(&x).unwrap();
            let rhs = a.act(&b.act(&x).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn inverse_composes_to_identity() {
        let a = aff(3, &[1, 2, 0, 1], &[2, 1]);
        assert_eq!(a.op(&a.inverse()), AffineElement::identity(3, 2));
        assert_eq!(a.inverse().op(&a), AffineElement::identity(3, 2));
    }

    #[test]
    fn identity_acts_trivially() {
        let e = AffineElement::identity(2, 3);
        for idx in 0..8 {
            assert_eq!(e.image_of(idx), idx);
        }
    }

    #[test]
    fn singular_linear_part_rejected() {
        let lin = GFMatrix::from_entries(2, 2, 2, &[1, 1, 1, 1]).unwrap();
        let v = GFVector::zero(2, 2);
        assert!(AffineElement::new(lin, v).is_err());
    }

    #[test]
    fn affine_line_round_trip() {
        let a = aff(2, &[0, 1, 1, 1], &[1, 0]);
        let line = write_affine_line(&a);
        assert_eq!(line, "0 1 1 1 1 0");
        assert_eq!(parse_affine_line(2, 2, &line).unwrap(), a);
    }
}
