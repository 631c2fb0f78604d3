mod common;

use cvr_ldpc::matrix::{
    degree_profile, expand_base, parse_alist, parse_base_matrix, syndrome, write_alist,
    write_base_matrix, BaseMatrix, ParityCheckMatrix,
};
use proptest::prelude::*;

fn base_strategy() -> impl Strategy<Value = BaseMatrix> {
    (1usize..5, 1usize..7, 1usize..9).prop_flat_map(|(r, c, z)| {
        proptest::collection::vec(prop_oneof![Just(None), (0..z).prop_map(Some)], r * c)
            .prop_map(move |e| BaseMatrix::new(r, c, z, e).unwrap())
    })
}

proptest! {
    #[test]
    fn expansion_counts_and_transpose(base in base_strategy()) {
        let h = expand_base(&base);
        prop_assert_eq!(h.m(), base.rows() * base.z());
        prop_assert_eq!(h.n(), base.cols() * base.z());
        prop_assert_eq!(h.num_edges(), base.nonnull_count() * base.z());
        prop_assert!(h.is_transpose_consistent());
        for (br, bc, s) in base.iter_nonnull() {
            for r in 0..base.z() {
                prop_assert!(h.contains(br * base.z() + r, bc * base.z() + (r + s) % base.z()));
            }
        }
    }

    #[test]
    fn text_round_trip(base in base_strategy()) {
        let mut buf = Vec::new();
        write_base_matrix(&base, &["round trip".to_string()], &mut buf).unwrap();
        let back = parse_base_matrix(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(back, base);
    }

    #[test]
    fn alist_round_trip(base in base_strategy()) {
        let h = expand_base(&base);
        let mut buf = Vec::new();
        write_alist(&h, &mut buf).unwrap();
        let back = parse_alist(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(back, h);
    }

    #[test]
    fn syndrome_is_linear(
        base in base_strategy(),
        seed_a in any::<u64>(),
        seed_b in any::<u64>(),
    ) {
        let h = expand_base(&base);
        let word = |seed: u64| -> Vec<u8> {
            (0..h.n()).map(|i| ((seed.rotate_left(i as u32 % 64) ^ i as u64) & 1) as u8).collect()
        };
        let a = word(seed_a);
        let b = word(seed_b);
        let sum: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let sa = syndrome(&h, &a).unwrap();
        let sb = syndrome(&h, &b).unwrap();
        let ss = syndrome(&h, &sum).unwrap();
        let expected: Vec<u8> = sa.bits().iter().zip(sb.bits()).map(|(x, y)| x ^ y).collect();
        prop_assert_eq!(ss.bits(), expected.as_slice());
    }

    #[test]
    fn leading_submatrix_is_subset(base in base_strategy(), fr in 0.0f64..=1.0, fc in 0.0f64..=1.0) {
        let h = expand_base(&base);
        let rows = (h.m() as f64 * fr) as usize;
        let cols = (h.n() as f64 * fc) as usize;
        let sub = h.leading_submatrix(rows, cols);
        for (r, c) in sub.iter() {
            prop_assert!(h.contains(r, c));
        }
        let expected = h.iter().filter(|&(r, c)| r < rows && c < cols).count();
        prop_assert_eq!(sub.num_edges(), expected);
    }
}

#[test]
fn wimax_tables_have_standard_profiles() {
    let mother = common::mother();
    assert_eq!((mother.rows(), mother.cols(), mother.z()), (6, 24, 24));
    assert_eq!(mother.nonnull_count(), 85);
    let p = degree_profile(&expand_base(&mother));
    // rate-3/4 A: check degrees 14 and 15
    assert!(p.row_weights.iter().all(|&w| w == 14 || w == 15));

    let (half, h) = common::wimax_half_864();
    assert_eq!((h.m(), h.n()), (432, 864));
    assert_eq!(half.nonnull_count(), 76);
    let p = degree_profile(&h);
    // rate-1/2: check degrees 6 and 7
    assert!(p.row_weights.iter().all(|&w| w == 6 || w == 7));
}

#[test]
fn out_of_range_shift_is_reported_with_position() {
    let err = parse_base_matrix("1 2 4\n0 4\n").unwrap_err().to_string();
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("column 2"), "{err}");
}

#[test]
fn syndrome_rejects_wrong_length() {
    let h = ParityCheckMatrix::from_incidences(1, 2, [(0, 0), (0, 1)]).unwrap();
    assert!(syndrome(&h, &[0]).is_err());
    assert_eq!(syndrome(&h, &[1, 0]).unwrap().weight(), 1);
}
