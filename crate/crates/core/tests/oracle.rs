//! The sparse engine against the dense oracle.

mod common;

use common::{all_examples, oracle_agrees};

#[test]
fn engine_matches_dense_oracle_on_every_small_example() {
    for (name, d) in all_examples() {
        assert!(d.dim() <= 9);
        if let Err(e) = oracle_agrees(&d, 11, 24) {
            panic!("{name}: {e}");
        }
    }
}

#[test]
fn oracle_sees_a_wrong_gamma() {
    // the oracle is not just echoing the engine: perturbing α changes γ
    let (_, d) = all_examples().remove(3);
    let mut m = d.clone();
    m.alpha = m.alpha.scale(&m.algebra.field().from_i64(2));
    let q = qhopf::QuasiHopf::new(d).unwrap();
    let dense = common::oracle::Dense::new(&m, q.phi_inv().unwrap());
    let el = qhopf::derived::big_f(&q).unwrap();
    assert_ne!(dense.import(&el.gamma), dense.gamma());
}
