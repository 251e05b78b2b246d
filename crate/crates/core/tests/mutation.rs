//! Single-coefficient mutations of a passing datum must be caught.

mod common;

use common::{all_examples, undetected};
use qhopf::{verify, Level, QuasiHopf};

#[test]
fn fifty_mutations_per_example_are_caught() {
    for (name, d) in all_examples() {
        let missed = undetected(&d, 50);
        assert!(missed.is_empty(), "{name}: undetected mutations {missed:?}");
    }
}

#[test]
fn flipped_associator_sign_breaks_the_pentagon() {
    let d = common::f_z(2);
    let mut m = d.clone();
    // ω(1,1,1) = -1 is the only nontrivial value; flipping it gives the
    // trivial cocycle, so flip ω(0,1,1) instead
    let idx = vec![0, 1, 1];
    let c = d.phi.get(&idx).unwrap().clone();
    let entries: Vec<_> = d.phi.iter().map(|(i, x)| if i == idx { (i, -&c) } else { (i, x.clone()) }).collect();
    m.phi = qhopf::SparseTensor::from_entries(d.dim(), 3, entries).unwrap();
    let rep = verify(&QuasiHopf::new(m).unwrap(), Level::Bialgebra);
    let pentagon = rep.checks.iter().find(|c| c.name == "pentagon").unwrap();
    assert!(pentagon.witness.as_ref().and_then(|w| w.index.as_ref()).is_some());
}
