#![allow(dead_code)]

use cvr_ldpc::extension::{build_extension, ExtendedCode};
use cvr_ldpc::matrix::{expand_base, BaseMatrix, ParityCheckMatrix};
use std::path::PathBuf;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

pub fn mother() -> BaseMatrix {
    BaseMatrix::from_file(data("wimax_r34a_n576.txt")).unwrap()
}

/// The rate-3/4 WiMAX mother extended with seed 42.
pub fn paper_code() -> ExtendedCode {
    build_extension(&mother(), 42).unwrap()
}

pub fn wimax_half_864() -> (BaseMatrix, ParityCheckMatrix) {
    let base = BaseMatrix::from_file(data("wimax_r12_n864.txt")).unwrap();
    let h = expand_base(&base);
    (base, h)
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_cvr-ldpc")
}
