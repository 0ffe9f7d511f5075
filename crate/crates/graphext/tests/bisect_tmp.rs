mod common;
use rand::Rng;
use graphext::linalg::{smith_normal_form, verify_smith};
use graphext::IntMatrix;
use num_bigint::BigInt;

#[test]
fn bisect_criterion_03_snf() {
    let mut rng = common::rng(0xA3);
    for case in 0..500 {
        let rows = rng.gen_range(0..=8usize);
        let cols = rng.gen_range(0..=8usize);
        let entries: Vec<Vec<BigInt>> = (0..rows)
            .map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect())
            .collect();
        let m = IntMatrix::from_entries(entries).unwrap();
        eprintln!("case {case}: {}x{}", rows, cols);
        let snf = smith_normal_form(&m);
        verify_smith(&m, &snf).unwrap();
    }
}
