//! Ribbon elements: exhaustive search on D(Z₂) over F₅ and the blockwise
//! solver on D^ω(Z₃) over F₇.
//!
//! cargo run --example ribbon_search

use qhopf::builders::{cocycle_zn, dpr_double, Cocycle3, FiniteAbelianGroup};
use qhopf::ribbon::{check_main_theorem, check_ribbon_lemma, find_ribbon, Strategy};
use qhopf::{Field, QuasiHopf, Result};

fn main() -> Result<()> {
    let f5 = Field::prime(5)?;
    let f7 = Field::prime(7)?;
    let runs = [
        ("D(Z2)/F5", dpr_double(&Cocycle3::trivial(FiniteAbelianGroup::cyclic(2)?, f5))?, Strategy::Enumerate),
        ("D^w(Z3)/F7", dpr_double(&cocycle_zn(3, 1, f7)?)?, Strategy::Blocks),
    ];
    for (name, d, strategy) in runs {
        let q = QuasiHopf::new(d)?;
        let found = find_ribbon(&q, 1_000_000, strategy)?;
        println!("{name}: {} candidates in {}", found.candidates.len(), found.region);
        for c in &found.candidates {
            let mut rep = check_main_theorem(&q, &c.v);
            rep.extend(check_ribbon_lemma(&q, &c.v));
            let v: Vec<String> = c.v.to_vec().iter().map(|(i, x)| format!("{x}·e{i}")).collect();
            println!("    {:?} v = {}  theorem and lemma: {}", c.provenance, v.join(" + "), rep.passed());
        }
    }
    Ok(())
}
