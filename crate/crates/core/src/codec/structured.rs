//! Block-level systematic encoding for quasi-cyclic codes whose parity part
//! (the last `rows` block columns) has a recognised shape.
//!
//! Two shapes are supported:
//!
//! * the 802.16e dual-diagonal form: the first parity block column holds
//!   `P^x` in the top and bottom block rows and `P^0` in one middle block row,
//!   and every other parity block column is a pair of identities on the
//!   diagonal and the diagonal above it;
//! * block lower-triangular with a circulant on every diagonal block, solved
//!   by forward substitution.

use crate::matrix::BaseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityForm {
    DualDiagonal { middle_row: usize },
    LowerTriangular,
}

/// Recognises the shape of the parity part of `base`, if any.
pub fn parity_form(base: &BaseMatrix) -> Option<ParityForm> {
    let m = base.rows();
    if base.cols() <= m {
        return None;
    }
    let off = base.cols() - m;
    dual_diagonal(base, off)
        .map(|middle_row| ParityForm::DualDiagonal { middle_row })
        .or_else(|| lower_triangular(base, off).then_some(ParityForm::LowerTriangular))
}

fn dual_diagonal(base: &BaseMatrix, off: usize) -> Option<usize> {
    let m = base.rows();
    if m < 3 {
        return None;
    }
    let top = base.get(0, off)?;
    if base.get(m - 1, off) != Some(top) {
        return None;
    }
    let inner: Vec<(usize, usize)> = (1..m - 1)
        .filter_map(|r| base.get(r, off).map(|s| (r, s)))
        .collect();
    let middle_row = match inner.as_slice() {
        [(r, 0)] => *r,
        _ => return None,
    };
    for j in 1..m {
        for r in 0..m {
            let expected = if r + 1 == j || r == j { Some(0) } else { None };
            if base.get(r, off + j) != expected {
                return None;
            }
        }
    }
    Some(middle_row)
}

fn lower_triangular(base: &BaseMatrix, off: usize) -> bool {
    let m = base.rows();
    (0..m).all(|r| {
        base.get(r, off + r).is_some() && (r + 1..m).all(|c| base.get(r, off + c).is_none())
    })
}

/// `out ^= P^s v` where `(P^s v)[r] = v[(r + s) mod z]`.
fn xor_shifted(out: &mut [u8], v: &[u8], s: usize) {
    let z = v.len();
    for r in 0..z {
        out[r] ^= v[(r + s) % z];
    }
}

/// Solves `P^s x = v`.
fn unshift(v: &[u8], s: usize) -> Vec<u8> {
    let z = v.len();
    let mut x = vec![0u8; z];
    for r in 0..z {
        x[(r + s) % z] = v[r];
    }
    x
}

/// Systematic encoder for a base matrix with a recognised parity form.
#[derive(Debug, Clone)]
pub struct StructuredEncoder {
    base: BaseMatrix,
    form: ParityForm,
}

impl StructuredEncoder {
    pub fn new(base: &BaseMatrix) -> Option<Self> {
        parity_form(base).map(|form| StructuredEncoder {
            base: base.clone(),
            form,
        })
    }

    pub fn form(&self) -> ParityForm {
        self.form
    }

    pub fn info_len(&self) -> usize {
        (self.base.cols() - self.base.rows()) * self.base.z()
    }

    pub fn n(&self) -> usize {
        self.base.cols() * self.base.z()
    }

    /// Returns `[info | parity]`. Panics if `info` has the wrong length.
    pub fn encode(&self, info: &[u8]) -> Vec<u8> {
        assert_eq!(info.len(), self.info_len(), "information length");
        let z = self.base.z();
        let m = self.base.rows();
        let kb = self.base.cols() - m;

        // lambda_i = sum_j A_ij s_j
        let mut lambda = vec![vec![0u8; z]; m];
        for (r, c, s) in self.base.iter_nonnull() {
            if c < kb {
                xor_shifted(&mut lambda[r], &info[c * z..(c + 1) * z], s);
            }
        }

        let mut parity: Vec<Vec<u8>> = vec![vec![0u8; z]; m];
        match self.form {
            ParityForm::DualDiagonal { middle_row } => {
                let top = self.base.get(0, kb).expect("dual-diagonal top block");
                let mut p0 = vec![0u8; z];
                for l in &lambda {
                    for (a, b) in p0.iter_mut().zip(l) {
                        *a ^= b;
                    }
                }
                // row 0: lambda_0 + P^x p0 + p1 = 0
                let mut p1 = lambda[0].clone();
                xor_shifted(&mut p1, &p0, top);
                parity[0] = p0;
                if m > 1 {
                    parity[1] = p1;
                }
                // row i: lambda_i + [i == middle] p0 + p_i + p_{i+1} = 0
                for i in 1..m - 1 {
                    let mut next = lambda[i].clone();
                    for (a, b) in next.iter_mut().zip(&parity[i]) {
                        *a ^= b;
                    }
                    if i == middle_row {
                        for (a, b) in next.iter_mut().zip(&parity[0]) {
                            *a ^= b;
                        }
                    }
                    parity[i + 1] = next;
                }
            }
            ParityForm::LowerTriangular => {
                for i in 0..m {
                    let mut acc = lambda[i].clone();
                    for j in 0..i {
                        if let Some(s) = self.base.get(i, kb + j) {
                            xor_shifted(&mut acc, &parity[j], s);
                        }
                    }
                    let diag = self.base.get(i, kb + i).expect("diagonal block");
                    parity[i] = unshift(&acc, diag);
                }
            }
        }

        let mut word = Vec::with_capacity(self.n());
        word.extend_from_slice(info);
        for p in parity {
            word.extend(p);
        }
        word
    }
}
