//! Parity-check extension of a high-rate mother code.
//!
//! The mother code `[A | B]` (`m1` block rows, `n1` block columns, `k1 = n1 -
//! m1` information block columns) is extended with `m2 = 2 m1` block rows and
//! as many new parity block columns:
//!
//! ```text
//!            k1 cols   m1 cols   m2 cols
//!          +---------+---------+---------+
//!  m1 rows |    A    |    B    |  C = 0  |
//!          +---------+---------+---------+
//!  m1 rows |         |    D    |         |
//!          |    E    +---------+  G = I  |
//!  m1 rows |         |    F    |         |
//!          +---------+---------+---------+
//! ```
//!
//! `D` is the identity, `F` a block permutation with random shifts, `G` the
//! identity and `E` a random grid of circulants with five or six blocks per
//! block row. The `D`/`F` order is configurable. Because `G` is the identity,
//! any prefix of `k` extension rows together with the first `n1 z + k`
//! columns is itself a valid code, which is what [`select_rate`] returns.

use crate::codec::structured::parity_form;
use crate::matrix::{expand_base, BaseMatrix, MatrixError, ParityCheckMatrix};
use crate::rng::Stream;
use std::fmt;
use thiserror::Error;

/// Maximum number of redraws of one `E` block row before giving up.
pub const MAX_REDRAWS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("mother code parity part is not dual-diagonal (or block lower-triangular)")]
    NotDualDiagonal,
    #[error("could not draw block row {row} of E without a 4-cycle after {MAX_REDRAWS} redraws")]
    CycleRedrawExhausted { row: usize },
    #[error("extension row count {k} outside [0, {max}]")]
    RateOutOfRange { k: usize, max: usize },
    #[error("extended base is {rows}x{cols}, incompatible with {m1} mother block rows")]
    Shape { rows: usize, cols: usize, m1: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Vertical order of the `D` and `F` bands under `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BandOrder {
    #[default]
    DAboveF,
    FAboveD,
}

impl BandOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            BandOrder::DAboveF => "d-above-f",
            BandOrder::FAboveD => "f-above-d",
        }
    }
}

impl std::str::FromStr for BandOrder {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "d-above-f" => Ok(BandOrder::DAboveF),
            "f-above-d" => Ok(BandOrder::FAboveD),
            other => Err(format!("unknown band order `{other}` (d-above-f | f-above-d)")),
        }
    }
}

/// Mother code plus its extension.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedCode {
    mother: BaseMatrix,
    order: BandOrder,
    seed: u64,
    e_weights: (usize, usize),
    base: BaseMatrix,
    assembled: ParityCheckMatrix,
}

impl ExtendedCode {
    pub fn mother(&self) -> &BaseMatrix {
        &self.mother
    }

    pub fn order(&self) -> BandOrder {
        self.order
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Allowed number of non-null blocks per block row of `E`.
    pub fn e_weight_range(&self) -> (usize, usize) {
        self.e_weights
    }

    /// Full extended base matrix, `(m1 + m2) x (n1 + m2)` blocks.
    pub fn base(&self) -> &BaseMatrix {
        &self.base
    }

    /// Expanded matrix of the fully extended code.
    pub fn assembled(&self) -> &ParityCheckMatrix {
        &self.assembled
    }

    pub fn z(&self) -> usize {
        self.mother.z()
    }

    /// Mother block rows.
    pub fn m1(&self) -> usize {
        self.mother.rows()
    }

    /// Mother block columns.
    pub fn n1(&self) -> usize {
        self.mother.cols()
    }

    /// Information block columns.
    pub fn k1(&self) -> usize {
        self.n1() - self.m1()
    }

    /// Extension block rows.
    pub fn m2(&self) -> usize {
        2 * self.m1()
    }

    /// Number of expanded extension rows (the largest valid `k`).
    pub fn max_extension(&self) -> usize {
        self.m2() * self.z()
    }

    pub fn mother_len(&self) -> usize {
        self.n1() * self.z()
    }

    pub fn mother_checks(&self) -> usize {
        self.m1() * self.z()
    }

    pub fn info_len(&self) -> usize {
        self.k1() * self.z()
    }

    /// Expanded row range occupied by the `D` band.
    pub fn d_rows(&self) -> std::ops::Range<usize> {
        let mz = self.mother_checks();
        match self.order {
            BandOrder::DAboveF => mz..2 * mz,
            BandOrder::FAboveD => 2 * mz..3 * mz,
        }
    }

    /// Expanded row range occupied by the `F` band.
    pub fn f_rows(&self) -> std::ops::Range<usize> {
        let mz = self.mother_checks();
        match self.order {
            BandOrder::DAboveF => 2 * mz..3 * mz,
            BandOrder::FAboveD => mz..2 * mz,
        }
    }

    /// Replaces the assembled matrix, keeping the metadata. Used to check the
    /// validator against hand-made defects.
    pub fn with_assembled(&self, assembled: ParityCheckMatrix) -> Self {
        ExtendedCode {
            assembled,
            ..self.clone()
        }
    }

    /// Code rate of the prefix with `k` extension rows, assuming full rank.
    pub fn rate(&self, k: usize) -> f64 {
        self.info_len() as f64 / (self.mother_len() + k) as f64
    }

    /// Rebuilds an extended code from its serialized base matrix.
    pub fn from_extended_base(
        base: BaseMatrix,
        mother_rows: usize,
        order: BandOrder,
        seed: u64,
    ) -> Result<Self, ExtensionError> {
        let m1 = mother_rows;
        let shape_err = ExtensionError::Shape {
            rows: base.rows(),
            cols: base.cols(),
            m1,
        };
        if m1 == 0 || base.rows() != 3 * m1 || base.cols() <= 3 * m1 {
            return Err(shape_err);
        }
        let n1 = base.cols() - 2 * m1;
        let mut mother = BaseMatrix::new(m1, n1, base.z(), vec![None; m1 * n1])?;
        for r in 0..m1 {
            for c in 0..n1 {
                mother.set(r, c, base.get(r, c));
            }
        }
        let assembled = expand_base(&base);
        Ok(ExtendedCode {
            mother,
            order,
            seed,
            e_weights: default_weight_range(n1 - m1),
            base,
            assembled,
        })
    }

    /// Comment lines recorded ahead of the serialized base matrix.
    pub fn header_comments(&self, mother_name: &str) -> Vec<String> {
        vec![
            "extended parity check base matrix".to_string(),
            format!("mother: {mother_name}"),
            format!("mother-block-rows: {}", self.m1()),
            format!("seed: {}", self.seed),
            format!("band-order: {}", self.order.as_str()),
            format!(
                "e-row-weight: {}-{}",
                self.e_weights.0, self.e_weights.1
            ),
        ]
    }
}

/// Row weights of `E` allowed for `k1` information block columns: five or six,
/// clipped to what fits.
fn default_weight_range(k1: usize) -> (usize, usize) {
    (5.min(k1), 6.min(k1))
}

/// True if block rows `a` and `b` of `rows` (each a list of `(col, shift)`)
/// close a cycle of length four after expansion with factor `z`.
fn has_four_cycle(a: &[(usize, usize)], b: &[(usize, usize)], z: usize) -> bool {
    let shared: Vec<(usize, usize)> = a
        .iter()
        .filter_map(|&(c, sa)| b.iter().find(|&&(cb, _)| cb == c).map(|&(_, sb)| (sa, sb)))
        .collect();
    for i in 0..shared.len() {
        for j in i + 1..shared.len() {
            let (a1, b1) = shared[i];
            let (a2, b2) = shared[j];
            if (a1 + z - a2 + b2 + z - b1) % z == 0 {
                return true;
            }
        }
    }
    false
}

/// Builds the extension of `mother` with the default `D`-above-`F` order.
pub fn build_extension(mother: &BaseMatrix, seed: u64) -> Result<ExtendedCode, ExtensionError> {
    build_extension_with(mother, seed, BandOrder::DAboveF)
}

/// Builds the extension of `mother`.
///
/// Random draws, in order, from `Stream::new(seed)`:
/// 1. `F`: a Fisher-Yates permutation of the `m1` block columns under `B`
///    (block row `i` of `F` uses column `perm[i]`), then one shift per block
///    row;
/// 2. for each extension block row of `E`, top to bottom: the weight (5 or 6,
///    one draw of `below(2)`), the block columns (partial Fisher-Yates over
///    `k1`), then one shift per chosen column in draw order. A row that closes
///    a 4-cycle with an earlier extension block row is redrawn.
pub fn build_extension_with(
    mother: &BaseMatrix,
    seed: u64,
    order: BandOrder,
) -> Result<ExtendedCode, ExtensionError> {
    if parity_form(mother).is_none() {
        return Err(ExtensionError::NotDualDiagonal);
    }
    let (m1, n1, z) = (mother.rows(), mother.cols(), mother.z());
    let k1 = n1 - m1;
    let m2 = 2 * m1;
    let mut rng = Stream::new(seed);

    let perm = rng.sample_distinct(m1, m1);
    let f_shifts: Vec<usize> = (0..m1).map(|_| rng.below(z as u64) as usize).collect();

    // B-band block for extension block row `e` (0-based within the extension)
    let band_block = |e: usize| -> (usize, usize) {
        let (d_first, i) = match order {
            BandOrder::DAboveF => (e < m1, e % m1),
            BandOrder::FAboveD => (e >= m1, e % m1),
        };
        if d_first {
            (k1 + i, 0)
        } else {
            (k1 + perm[i], f_shifts[i])
        }
    };

    let weights = default_weight_range(k1);
    let mut ext_rows: Vec<Vec<(usize, usize)>> = Vec::with_capacity(m2);
    for e in 0..m2 {
        let mut accepted = None;
        for _ in 0..MAX_REDRAWS {
            let w = if weights.0 == weights.1 {
                // keep the draw count fixed so streams stay aligned
                rng.below(2);
                weights.0
            } else {
                weights.0 + rng.below(2) as usize
            };
            let cols = rng.sample_distinct(k1, w);
            let mut row: Vec<(usize, usize)> = cols
                .into_iter()
                .map(|c| (c, rng.below(z as u64) as usize))
                .collect();
            row.push(band_block(e));
            if ext_rows.iter().all(|prev| !has_four_cycle(&row, prev, z)) {
                accepted = Some(row);
                break;
            }
        }
        let mut row = accepted.ok_or(ExtensionError::CycleRedrawExhausted { row: e })?;
        row.sort_unstable();
        ext_rows.push(row);
    }

    let rows = m1 + m2;
    let cols = n1 + m2;
    let mut base = BaseMatrix::new(rows, cols, z, vec![None; rows * cols])?;
    for (r, c, s) in mother.iter_nonnull() {
        base.set(r, c, Some(s));
    }
    for (e, row) in ext_rows.iter().enumerate() {
        for &(c, s) in row {
            base.set(m1 + e, c, Some(s));
        }
        base.set(m1 + e, n1 + e, Some(0));
    }
    let assembled = expand_base(&base);
    Ok(ExtendedCode {
        mother: mother.clone(),
        order,
        seed,
        e_weights: weights,
        base,
        assembled,
    })
}

/// Outcome of one structural check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// First offending `(row, col)` of the assembled matrix, when located.
    pub first_offender: Option<(usize, usize)>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub order: BandOrder,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "band-order: {}", self.order.as_str())?;
        writeln!(f, "seed: {}", self.seed)?;
        for c in &self.checks {
            write!(f, "{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name)?;
            if let Some((r, col)) = c.first_offender {
                write!(f, " at ({r}, {col})")?;
            }
            if !c.detail.is_empty() {
                write!(f, ": {}", c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub const CHECK_SHAPE: &str = "dimensions";
pub const CHECK_MOTHER: &str = "mother rows embed the mother matrix";
pub const CHECK_C: &str = "C zero";
pub const CHECK_D: &str = "D identity";
pub const CHECK_F: &str = "F permutation";
pub const CHECK_G: &str = "G identity";
pub const CHECK_E: &str = "E row weight";

fn result(name: &'static str, offender: Option<(usize, usize)>, detail: String) -> CheckResult {
    CheckResult {
        name,
        passed: offender.is_none() && detail.is_empty(),
        first_offender: offender,
        detail,
    }
}

/// First position where the incidences of `rows` restricted to `cols` differ
/// from `expected(row)` (a sorted column list).
fn first_mismatch(
    h: &ParityCheckMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
    expected: impl Fn(usize) -> Vec<usize>,
) -> Option<(usize, usize)> {
    for r in rows {
        let got: Vec<usize> = h.row(r).iter().copied().filter(|c| cols.contains(c)).collect();
        let want = expected(r);
        if got != want {
            let c = got
                .iter()
                .zip(&want)
                .find(|(a, b)| a != b)
                .map(|(a, b)| *a.min(b))
                .or_else(|| got.get(want.len()).or(want.get(got.len())).copied())
                .unwrap_or(cols.start);
            return Some((r, c));
        }
    }
    None
}

/// Checks every structural constraint of the extension on the assembled
/// matrix. Failures are reported, not raised.
pub fn validate_structure(code: &ExtendedCode) -> ValidationReport {
    let h = &code.assembled;
    let (mz, nz, kz, ext) = (
        code.mother_checks(),
        code.mother_len(),
        code.info_len(),
        code.max_extension(),
    );
    let mut checks = Vec::new();

    let shape_ok = h.m() == mz + ext && h.n() == nz + ext;
    checks.push(result(
        CHECK_SHAPE,
        None,
        if shape_ok {
            String::new()
        } else {
            format!("got {}x{}, expected {}x{}", h.m(), h.n(), mz + ext, nz + ext)
        },
    ));
    if !shape_ok {
        return ValidationReport {
            order: code.order,
            seed: code.seed,
            checks,
        };
    }

    let mother = expand_base(&code.mother);
    checks.push(result(
        CHECK_MOTHER,
        first_mismatch(h, 0..mz, 0..nz, |r| mother.row(r).to_vec()),
        String::new(),
    ));

    let c_offender = (0..mz).find_map(|r| h.row(r).iter().find(|&&c| c >= nz).map(|&c| (r, c)));
    checks.push(result(CHECK_C, c_offender, String::new()));

    let d = code.d_rows();
    let d_start = d.start;
    checks.push(result(
        CHECK_D,
        first_mismatch(h, d, kz..nz, |r| vec![kz + (r - d_start)]),
        String::new(),
    ));

    let f = code.f_rows();
    let mut col_hits = vec![0usize; nz - kz];
    let mut f_offender = None;
    for r in f.clone() {
        let cols: Vec<usize> = h.row(r).iter().copied().filter(|c| (kz..nz).contains(c)).collect();
        if cols.len() != 1 && f_offender.is_none() {
            f_offender = Some((r, cols.get(1).copied().unwrap_or(kz)));
        }
        for c in cols {
            col_hits[c - kz] += 1;
        }
    }
    if f_offender.is_none() {
        if let Some(i) = col_hits.iter().position(|&n| n != 1) {
            let c = kz + i;
            let r = f.clone().find(|&r| h.contains(r, c)).unwrap_or(f.start);
            f_offender = Some((r, c));
        }
    }
    checks.push(result(CHECK_F, f_offender, String::new()));

    checks.push(result(
        CHECK_G,
        first_mismatch(h, mz..mz + ext, nz..nz + ext, |r| vec![nz + (r - mz)]),
        String::new(),
    ));

    let (lo, hi) = code.e_weights;
    let e_offender = (mz..mz + ext).find_map(|r| {
        let row: Vec<usize> = h.row(r).iter().copied().filter(|&c| c < kz).collect();
        (!(lo..=hi).contains(&row.len())).then(|| (r, row.last().copied().unwrap_or(0)))
    });
    checks.push(result(
        CHECK_E,
        e_offender,
        e_offender
            .map(|(r, _)| {
                let w = h.row(r).iter().filter(|&&c| c < kz).count();
                format!("row weight {w} outside {{{lo}..={hi}}}")
            })
            .unwrap_or_default(),
    ));

    ValidationReport {
        order: code.order,
        seed: code.seed,
        checks,
    }
}

/// Parity check matrix of the code using the first `k` extension rows.
pub fn select_rate(code: &ExtendedCode, k: usize) -> Result<ParityCheckMatrix, ExtensionError> {
    let max = code.max_extension();
    if k > max {
        return Err(ExtensionError::RateOutOfRange { k, max });
    }
    Ok(code
        .assembled
        .leading_submatrix(code.mother_checks() + k, code.mother_len() + k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{degree_profile, parse_base_matrix};

    fn toy_mother() -> BaseMatrix {
        // m1 = 1, n1 = 4, z = 4; parity part is a single circulant
        parse_base_matrix("1 4 4\n1 0 3 0\n").unwrap()
    }

    #[test]
    fn toy_extension_validates() {
        let code = build_extension(&toy_mother(), 9).unwrap();
        assert_eq!((code.base().rows(), code.base().cols()), (3, 6));
        let report = validate_structure(&code);
        assert!(report.all_passed(), "{report}");
        assert_eq!(code.e_weight_range(), (3, 3));
    }

    #[test]
    fn deterministic_in_seed() {
        let a = build_extension(&toy_mother(), 5).unwrap();
        let b = build_extension(&toy_mother(), 5).unwrap();
        assert_eq!(a.assembled(), b.assembled());
        assert_eq!(a.base(), b.base());
    }

    #[test]
    fn rejects_unstructured_mother() {
        let m = parse_base_matrix("2 4 2\n0 0 0 0\n0 -1 0 -1\n").unwrap();
        assert_eq!(build_extension(&m, 0), Err(ExtensionError::NotDualDiagonal));
    }

    #[test]
    fn four_cycle_detector() {
        // shifts (0,0) / (0,0) on two shared columns: a 4-cycle
        assert!(has_four_cycle(&[(0, 0), (1, 0)], &[(0, 0), (1, 0)], 4));
        assert!(!has_four_cycle(&[(0, 0), (1, 1)], &[(0, 0), (1, 0)], 4));
        assert!(!has_four_cycle(&[(0, 0)], &[(0, 0), (1, 0)], 4));
    }

    #[test]
    fn band_order_swaps_rows() {
        let mother = parse_base_matrix(
            "3 10 16\n\
             1 2 3 4 5 6 7 0 -1 -1\n\
             0 1 2 -1 4 5 6 3 0 -1\n\
             2 -1 1 0 1 -1 9 -1 5 0\n",
        )
        .unwrap();
        for order in [BandOrder::DAboveF, BandOrder::FAboveD] {
            let code = build_extension_with(&mother, 3, order).unwrap();
            let report = validate_structure(&code);
            assert!(report.all_passed(), "{report}");
            assert_eq!(report.order, order);
        }
        let d = build_extension_with(&mother, 3, BandOrder::DAboveF).unwrap();
        assert_eq!(d.d_rows(), 48..96);
        let f = build_extension_with(&mother, 3, BandOrder::FAboveD).unwrap();
        assert_eq!(f.d_rows(), 96..144);
    }

    #[test]
    fn select_rate_bounds() {
        let code = build_extension(&toy_mother(), 1).unwrap();
        let h0 = select_rate(&code, 0).unwrap();
        assert_eq!(h0, expand_base(&toy_mother()));
        let full = select_rate(&code, 8).unwrap();
        assert_eq!(&full, code.assembled());
        assert!(matches!(
            select_rate(&code, 9),
            Err(ExtensionError::RateOutOfRange { k: 9, max: 8 })
        ));
        let p = degree_profile(&select_rate(&code, 4).unwrap());
        assert_eq!(p.row_weights.len(), 8);
    }

    #[test]
    fn round_trip_through_base() {
        let code = build_extension(&toy_mother(), 2).unwrap();
        let back =
            ExtendedCode::from_extended_base(code.base().clone(), 1, code.order(), code.seed()).unwrap();
        assert_eq!(back, code);
    }
}
