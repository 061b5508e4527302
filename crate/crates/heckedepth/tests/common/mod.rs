#![allow(dead_code)]

//! Shared data for integration tests: the reference depth tables being
//! reproduced, the valuation labels of the shipped record files, and
//! helpers to canonicalize partitions for comparison.

use heckedepth::congruence::PartitionTable;

/// One reference case. `rows_printed` is the table exactly as printed in
/// the source; `rows_corrected` differs only where the printed row is
/// certified wrong by exact arithmetic (see the erratum tests), and is
/// what the computation must actually produce.
pub struct Fixture {
    pub tame: i64,
    pub p: u64,
    pub k: u32,
    pub m: u32,
    pub file: &'static str,
    /// the -C value printed on the table caption (sign flipped: C itself)
    pub caption_c: i64,
    /// vL per form index under the crate's labeling convention
    pub vl: &'static [i64],
    /// matched pairs (form, form, v_p(L_f + L_g)); None for valuation-only
    /// record files
    pub sums: Option<&'static [(usize, usize, i64)]>,
    pub changepoints: &'static [u32],
    pub rows_printed: &'static [(u32, &'static [&'static [i64]])],
    pub rows_corrected: &'static [(u32, &'static [&'static [i64]])],
    /// expected cancellation report [v_sum, v_l], shallowest first
    pub cancellation: Option<&'static [(i64, i64)]>,
}

pub const P3_K44: Fixture = Fixture {
    tame: 1,
    p: 3,
    k: 44,
    m: 16,
    file: "p3_k44.linv",
    caption_c: 8,
    vl: &[0, -11, -6, -8, -11, -8, -6],
    sums: Some(&[(1, 4, -3), (3, 5, -3), (2, 6, -3)]),
    changepoints: &[1, 2, 4, 9, 11, 15],
    rows_printed: P3_K44_ROWS,
    rows_corrected: P3_K44_ROWS,
    cancellation: Some(&[(-3, -6), (-3, -8), (-3, -11)]),
};

const P3_K44_ROWS: &[(u32, &[&[i64]])] = &[
    (1, &[&[0, -6, -6, -8, -8, -11, -11]]),
    (2, &[&[0, -8, -8], &[-6, -6, -11, -11]]),
    (4, &[&[0], &[-6, -6], &[-8, -8], &[-11, -11]]),
    (9, &[&[0], &[-6], &[-6], &[-8, -8], &[-11, -11]]),
    (11, &[&[0], &[-6], &[-6], &[-8], &[-8], &[-11, -11]]),
    (15, &[&[0], &[-6], &[-6], &[-8], &[-8], &[-11], &[-11]]),
];

pub const P3_K48: Fixture = Fixture {
    tame: 1,
    p: 3,
    k: 48,
    m: 16,
    file: "p3_k48.linv",
    caption_c: 8,
    vl: &[-11, -6, -8, 0, -6, -11, -8],
    sums: Some(&[(0, 5, -3), (1, 4, -3), (2, 6, -3)]),
    changepoints: &[1, 2, 4, 9, 11, 15],
    rows_printed: P3_K44_ROWS,
    rows_corrected: P3_K44_ROWS,
    cancellation: Some(&[(-3, -6), (-3, -8), (-3, -11)]),
};

pub const P5_K32: Fixture = Fixture {
    tame: 1,
    p: 5,
    k: 32,
    m: 15,
    file: "p5_k32.linv",
    caption_c: 6,
    vl: &[-10, -2, -5, -6, -1, -11, -6, -5, -11, -2, -10],
    sums: Some(&[(0, 10, -2), (1, 9, 0), (2, 7, -1), (3, 6, -1), (5, 8, -2)]),
    changepoints: &[1, 2, 4, 7, 8, 12, 14],
    rows_printed: &[
        (1, &[&[-1, -2, -2, -5, -5, -6, -6, -10, -10, -11, -11]]),
        (2, &[&[-1], &[-2, -2], &[-5, -5], &[-6, -6], &[-10, -10], &[-11, -11]]),
        (4, &[&[-1], &[-2], &[-2], &[-5, -5], &[-6, -6], &[-10, -10], &[-11, -11]]),
        (7, &[&[-1], &[-2], &[-2], &[-5], &[-5], &[-6, -6], &[-10, -10], &[-11, -11]]),
        (8, &[&[-1], &[-2], &[-2], &[-5], &[-5], &[-6], &[-6], &[-10, -10], &[-11, -11]]),
        (12, &[&[-1], &[-2], &[-2], &[-5], &[-5], &[-6], &[-6], &[-10], &[-10], &[-11, -11]]),
        (14, &[&[-1], &[-2], &[-2], &[-5], &[-5], &[-6], &[-6], &[-10], &[-10], &[-11], &[-11]]),
    ],
    rows_corrected: &[
        // row 1 as printed merges two residual classes that are provably
        // distinct mod 5 (they differ by twist by the quadratic character);
        // the true partition is certified by resultant valuations
        (1, &[&[-1, -5, -5, -10, -10], &[-2, -2, -6, -6, -11, -11]]),
        (2, &[&[-1], &[-2, -2], &[-5, -5], &[-6, -6], &[-10, -10], &[-11, -11]]),
        (4, &[&[-1], &[-2], &[-2], &[-5, -5], &[-6, -6], &[-10, -10], &[-11, -11]]),
        (7, &[&[-1], &[-2], &[-2], &[-5], &[-5], &[-6, -6], &[-10, -10], &[-11, -11]]),
        (8, &[&[-1], &[-2], &[-2], &[-5], &[-5], &[-6], &[-6], &[-10, -10], &[-11, -11]]),
        (12, &[&[-1], &[-2], &[-2], &[-5], &[-5], &[-6], &[-6], &[-10], &[-10], &[-11, -11]]),
        (14, &[&[-1], &[-2], &[-2], &[-5], &[-5], &[-6], &[-6], &[-10], &[-10], &[-11], &[-11]]),
    ],
    cancellation: Some(&[(0, -2), (-1, -5), (-1, -6), (-2, -10), (-2, -11)]),
};

pub const P7_K20: Fixture = Fixture {
    tame: 1,
    p: 7,
    k: 20,
    m: 9,
    file: "p7_k20.linv",
    caption_c: 5,
    vl: &[-1, -5, -3, -6, 0, -6, -5, -1, -3],
    sums: None,
    changepoints: &[1, 2, 3, 5, 7, 8],
    rows_printed: P7_K20_ROWS,
    rows_corrected: P7_K20_ROWS,
    cancellation: None,
};

const P7_K20_ROWS: &[(u32, &[&[i64]])] = &[
    (1, &[&[0, -1, -5, -5], &[-1, -6, -6], &[-3, -3]]),
    (2, &[&[0, -1], &[-1], &[-3, -3], &[-5, -5], &[-6, -6]]),
    (3, &[&[0], &[-1], &[-1], &[-3, -3], &[-5, -5], &[-6, -6]]),
    (5, &[&[0], &[-1], &[-1], &[-3], &[-3], &[-5, -5], &[-6, -6]]),
    (7, &[&[0], &[-1], &[-1], &[-3], &[-3], &[-5], &[-5], &[-6, -6]]),
    (8, &[&[0], &[-1], &[-1], &[-3], &[-3], &[-5], &[-5], &[-6], &[-6]]),
];

pub const P11_K18: Fixture = Fixture {
    tame: 1,
    p: 11,
    k: 18,
    m: 9,
    file: "p11_k18.linv",
    caption_c: 5,
    vl: &[-6, -4, -1, -3, -5, -5, -4, -1, -5, 0, -3, -6, 0, -5],
    sums: None,
    changepoints: &[1, 2, 3, 5, 6, 7, 8],
    rows_printed: &[
        (1, &[&[0], &[0], &[-1, -1], &[-3, -3], &[-5, -5], &[-4, -4, -6, -6], &[-5, -5]]),
        (2, &[&[0], &[0], &[-1, -1], &[-3, -3], &[-4, -4], &[-5, -5], &[-5, -5], &[-6, -6]]),
        (3, &[&[0], &[0], &[-1], &[-1], &[-3, -3], &[-4, -4], &[-5, -5], &[-5, -5], &[-6, -6]]),
        (5, &[&[0], &[0], &[-1], &[-1], &[-3], &[-3], &[-4, -4], &[-5, -5], &[-5, -5], &[-6, -6]]),
        (6, &[&[0], &[0], &[-1], &[-1], &[-3], &[-3], &[-4], &[-4], &[-5, -5], &[-5, -5], &[-6, -6]]),
        (7, &[&[0], &[0], &[-1], &[-1], &[-3], &[-3], &[-4], &[-4], &[-5, -5], &[-5], &[-5], &[-6, -6]]),
        (8, &[&[0], &[0], &[-1], &[-1], &[-3], &[-3], &[-4], &[-4], &[-5], &[-5], &[-5], &[-5], &[-6], &[-6]]),
    ],
    rows_corrected: &[
        (1, &[&[0], &[0], &[-1, -1], &[-3, -3], &[-5, -5], &[-4, -4, -6, -6], &[-5, -5]]),
        (2, &[&[0], &[0], &[-1, -1], &[-3, -3], &[-4, -4], &[-5, -5], &[-5, -5], &[-6, -6]]),
        (3, &[&[0], &[0], &[-1], &[-1], &[-3, -3], &[-4, -4], &[-5, -5], &[-5, -5], &[-6, -6]]),
        (5, &[&[0], &[0], &[-1], &[-1], &[-3], &[-3], &[-4, -4], &[-5, -5], &[-5, -5], &[-6, -6]]),
        (6, &[&[0], &[0], &[-1], &[-1], &[-3], &[-3], &[-4], &[-4], &[-5, -5], &[-5, -5], &[-6, -6]]),
        // row 7 as printed keeps one [-5, -5] pair; both -5 pairs split at
        // depth 7 (certified by resultant valuations), only [-6, -6] stays
        (7, &[&[0], &[0], &[-1], &[-1], &[-3], &[-3], &[-4], &[-4], &[-5], &[-5], &[-5], &[-5], &[-6, -6]]),
        (8, &[&[0], &[0], &[-1], &[-1], &[-3], &[-3], &[-4], &[-4], &[-5], &[-5], &[-5], &[-5], &[-6], &[-6]]),
    ],
    cancellation: None,
};

pub const P3_N2_K36: Fixture = Fixture {
    tame: 2,
    p: 3,
    k: 36,
    m: 17,
    file: "p3_N2_k36.linv",
    caption_c: 7,
    vl: &[-4, -9, -11, -11, -9, -4, -1],
    sums: None,
    changepoints: &[1, 2, 5, 8, 13, 16],
    rows_printed: P3_N2_K36_ROWS,
    rows_corrected: P3_N2_K36_ROWS,
    cancellation: None,
};

const P3_N2_K36_ROWS: &[(u32, &[&[i64]])] = &[
    (1, &[&[-1, -4, -4, -9, -9, -11, -11]]),
    (2, &[&[-1, -9, -9], &[-4, -4, -11, -11]]),
    (5, &[&[-1], &[-4, -4], &[-9, -9], &[-11, -11]]),
    (8, &[&[-1], &[-4], &[-4], &[-9, -9], &[-11, -11]]),
    (13, &[&[-1], &[-4], &[-4], &[-9], &[-9], &[-11, -11]]),
    (16, &[&[-1], &[-4], &[-4], &[-9], &[-9], &[-11], &[-11]]),
];

pub const ALL_FIXTURES: &[&Fixture] =
    &[&P3_K44, &P3_K48, &P5_K32, &P7_K20, &P11_K18, &P3_N2_K36];

/// Canonical form of a partition labeled by valuations: each class sorted,
/// classes sorted lexicographically.
pub fn canon(classes: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = classes
        .iter()
        .map(|c| {
            let mut v = c.clone();
            v.sort();
            v
        })
        .collect();
    out.sort();
    out
}

pub fn canon_ref(classes: &[&[i64]]) -> Vec<Vec<i64>> {
    canon(&classes.iter().map(|c| c.to_vec()).collect::<Vec<_>>())
}

/// Map a computed partition table through a vL labeling.
pub fn labeled_rows(table: &PartitionTable, vl: &[i64]) -> Vec<(u32, Vec<Vec<i64>>)> {
    table
        .rows
        .iter()
        .map(|(n, classes)| {
            (
                *n,
                classes
                    .iter()
                    .map(|c| c.iter().map(|&i| vl[i]).collect::<Vec<i64>>())
                    .collect(),
            )
        })
        .collect()
}

/// Path to a shipped fixture record file.
pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}
