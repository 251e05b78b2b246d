//! Modifies the antipode of D^ω(Z₂) by seeded invertible elements x and
//! checks how γ, δ, F and u transform; then recovers x from the two data.
//!
//! cargo run --example antipode_modification

use qhopf::builders::{cocycle_zn, dpr_double};
use qhopf::derived::{check_modification_laws, modify_antipode, random_invertible, recover_modifier};
use qhopf::quasitriangular::check_u_under_modification;
use qhopf::{Field, QuasiHopf, Result};

fn main() -> Result<()> {
    let q = QuasiHopf::new(dpr_double(&cocycle_zn(2, 1, Field::prime(7)?)?)?)?;
    for seed in 0..5 {
        let (x, _) = random_invertible(&q, seed)?;
        let mut rep = check_modification_laws(&q, &x);
        rep.extend(check_u_under_modification(&q, &x));
        let back = recover_modifier(&q, &modify_antipode(&q, &x)?)?;
        println!(
            "seed {seed}: {} checks, {} failed, x recovered: {}",
            rep.checks.len(),
            rep.failures().count(),
            back == x
        );
    }
    Ok(())
}
