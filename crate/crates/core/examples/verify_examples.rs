//! Builds every shipped example and runs the verifier at its highest layer.
//!
//! cargo run --example verify_examples

use std::time::Instant;

use qhopf::builders::{cocycle_zn, dpr_double, function_algebra, group_algebra, sweedler, Cocycle3, FiniteAbelianGroup};
use qhopf::{verify, Field, Level, QuasiHopf, QuasiHopfDatum, Result};

fn main() -> Result<()> {
    let f7 = Field::prime(7)?;
    let z2 = FiniteAbelianGroup::cyclic(2)?;
    let z3 = FiniteAbelianGroup::cyclic(3)?;
    let data: Vec<QuasiHopfDatum> = vec![
        group_algebra(&z2.to_group(), f7)?,
        function_algebra(&cocycle_zn(2, 1, f7)?)?,
        function_algebra(&cocycle_zn(3, 1, f7)?)?,
        sweedler()?,
        dpr_double(&Cocycle3::trivial(z2.clone(), f7))?,
        dpr_double(&cocycle_zn(2, 1, f7)?)?,
        dpr_double(&Cocycle3::trivial(z3.clone(), f7))?,
        dpr_double(&cocycle_zn(3, 1, f7)?)?,
    ];
    for d in data {
        let t = Instant::now();
        let q = QuasiHopf::new(d)?;
        let level = Level::highest(&q);
        let rep = verify(&q, level);
        let name = q.datum().meta.name.clone().unwrap_or_default();
        println!(
            "{name:<12} dim {:<2} {level:<9} {} checks, {} failed, {} ms",
            q.dim(),
            rep.checks.len(),
            rep.failures().count(),
            t.elapsed().as_millis()
        );
        for c in rep.failures() {
            println!("    {} {:?}", c.name, c.witness);
        }
    }
    Ok(())
}
