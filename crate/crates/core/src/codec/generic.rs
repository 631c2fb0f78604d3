//! Systematic encoding of an arbitrary full-rank parity check matrix by
//! Gaussian elimination over GF(2).

use super::CodecError;
use crate::matrix::ParityCheckMatrix;

fn words(bits: usize) -> usize {
    bits.div_ceil(64)
}

fn get(row: &[u64], i: usize) -> bool {
    row[i / 64] >> (i % 64) & 1 == 1
}

fn set(row: &mut [u64], i: usize) {
    row[i / 64] |= 1 << (i % 64);
}

/// Encoder derived once per matrix.
///
/// Pivot columns are chosen scanning from the last column towards the first,
/// so when the trailing `m` columns of `H` are invertible the code is
/// systematic on the leading `n - m` positions and agrees with any other
/// systematic encoder for that layout.
#[derive(Debug, Clone)]
pub struct GenericEncoder {
    n: usize,
    info_positions: Vec<usize>,
    parity_positions: Vec<usize>,
    /// Row `i`: which information bits feed parity position `parity_positions[i]`.
    parity_masks: Vec<Vec<u64>>,
}

impl GenericEncoder {
    pub fn new(h: &ParityCheckMatrix) -> Result<Self, CodecError> {
        let (m, n) = (h.m(), h.n());
        if m > n {
            return Err(CodecError::Overdetermined { m, n });
        }
        let w = words(n);
        let mut rows: Vec<Vec<u64>> = (0..m)
            .map(|r| {
                let mut v = vec![0u64; w];
                for &c in h.row(r) {
                    set(&mut v, c);
                }
                v
            })
            .collect();
        let mut origin: Vec<usize> = (0..m).collect();

        let mut pivots: Vec<usize> = Vec::with_capacity(m);
        let mut rank = 0;
        for col in (0..n).rev() {
            if rank == m {
                break;
            }
            let Some(p) = (rank..m).find(|&r| get(&rows[r], col)) else {
                continue;
            };
            rows.swap(rank, p);
            origin.swap(rank, p);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && get(row, col) {
                    for (a, b) in row.iter_mut().zip(&pivot_row) {
                        *a ^= b;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        if rank < m {
            let mut dependent: Vec<usize> = origin[rank..].to_vec();
            dependent.sort_unstable();
            return Err(CodecError::RankDeficient {
                rank,
                dependent_rows: dependent,
            });
        }

        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let info_positions: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let k = info_positions.len();
        let parity_masks = rows
            .iter()
            .map(|row| {
                let mut mask = vec![0u64; words(k)];
                for (j, &c) in info_positions.iter().enumerate() {
                    if get(row, c) {
                        set(&mut mask, j);
                    }
                }
                mask
            })
            .collect();
        Ok(GenericEncoder {
            n,
            info_positions,
            parity_positions: pivots,
            parity_masks,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn info_len(&self) -> usize {
        self.info_positions.len()
    }

    /// Codeword coordinates carrying the information bits, in order.
    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>, CodecError> {
        if info.len() != self.info_len() {
            return Err(CodecError::InfoLength {
                expected: self.info_len(),
                got: info.len(),
            });
        }
        let mut packed = vec![0u64; words(info.len())];
        for (j, &b) in info.iter().enumerate() {
            if b & 1 == 1 {
                set(&mut packed, j);
            }
        }
        let mut word = vec![0u8; self.n];
        for (&pos, &b) in self.info_positions.iter().zip(info) {
            word[pos] = b & 1;
        }
        for (&pos, mask) in self.parity_positions.iter().zip(&self.parity_masks) {
            let ones: u32 = mask
                .iter()
                .zip(&packed)
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            word[pos] = (ones & 1) as u8;
        }
        Ok(word)
    }
}

/// One-shot generic encoding.
pub fn encode_generic(h: &ParityCheckMatrix, info: &[u8]) -> Result<Vec<u8>, CodecError> {
    GenericEncoder::new(h)?.encode(info)
}
