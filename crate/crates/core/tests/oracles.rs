//! Frozen values from independent computations and the published table.

use strong132::construct::{count_full_cycle, count_k_ge_4, enumerate_big_cycle};
use strong132::enumerate::{brute_table, gen_avoiders_132, Options};
use strong132::series::{catalan_numbers, sav132, sav312};

/// Rows k = 1..=n of the published table for n = 1..=13.
const TABLE: [&[u64]; 13] = [
    &[1],
    &[1, 1],
    &[2, 1, 2],
    &[5, 3, 2, 2],
    &[12, 4, 4, 0, 4],
    &[24, 10, 14, 0, 0, 2],
    &[50, 15, 28, 0, 0, 0, 8],
    &[101, 35, 56, 4, 0, 0, 0, 6],
    &[202, 56, 132, 0, 0, 0, 0, 0, 8],
    &[398, 126, 262, 0, 8, 0, 0, 0, 0, 12],
    &[806, 210, 524, 0, 0, 0, 0, 0, 0, 0, 28],
    &[1568, 462, 1098, 10, 0, 4, 0, 0, 0, 0, 0, 6],
    &[3148, 792, 2202, 0, 0, 0, 0, 0, 0, 0, 0, 0, 56],
];

#[test]
fn brute_table_matches_published_columns() {
    let t = brute_table(13, &Options::default()).unwrap();
    for (i, column) in TABLE.iter().enumerate() {
        let n = i + 1;
        assert_eq!(t.column(n).unwrap().counts, column.to_vec(), "n = {n}");
    }
}

#[test]
fn sav132_prefix() {
    let a = sav132(19);
    let got: Vec<i128> = (0..=19).map(|n| a.coeff_i128(n).unwrap()).collect();
    assert_eq!(
        got,
        [
            1, 1, 2, 5, 12, 24, 50, 101, 202, 398, 806, 1568, 3148, 6198, 12306, 24223, 48314,
            94614, 188442, 370586
        ]
    );
}

#[test]
fn sav132_at_order_64() {
    let a = sav132(64);
    assert_eq!(a.coeff(64).unwrap().to_string(), "7518609613541436790");
}

#[test]
fn sav312_prefix() {
    let s = sav312(13);
    let got: Vec<i128> = (0..=13).map(|n| s.coeff_i128(n).unwrap()).collect();
    assert_eq!(
        got,
        [1, 1, 2, 4, 9, 19, 41, 87, 186, 396, 845, 1801, 3841, 8189]
    );
}

#[test]
fn avoider_counts_are_catalan() {
    let c = catalan_numbers(12);
    for (n, expected) in c.iter().enumerate().skip(1) {
        let got = num_bigint::BigInt::from(gen_avoiders_132(n).unwrap().count());
        assert_eq!(&got, expected, "n = {n}");
    }
}

#[test]
fn closed_forms_against_table() {
    for (i, column) in TABLE.iter().enumerate().skip(3) {
        let n = i + 1;
        let ge4: u64 = column[3..].iter().sum();
        assert_eq!(count_k_ge_4(n).unwrap(), u128::from(ge4), "n = {n}");
        assert_eq!(
            count_full_cycle(n).unwrap(),
            u128::from(column[n - 1]),
            "n = {n}"
        );
        assert_eq!(enumerate_big_cycle(n).unwrap().len() as u64, ge4, "n = {n}");
    }
    assert_eq!(count_full_cycle(3).unwrap(), 2);
}
