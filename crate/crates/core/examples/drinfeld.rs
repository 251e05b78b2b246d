//! The Drinfeld element u of the twisted double D^ω(Z₃) together with û,
//! ǔ and ũ, and the relations among them.
//!
//! cargo run --example drinfeld

use qhopf::builders::{cocycle_zn, dpr_double};
use qhopf::quasitriangular::{check_drinfeld_props, check_u_tilde, drinfeld_u};
use qhopf::ribbon::{check_rtwist_relations, rtwist_elements};
use qhopf::tensor::TensorJson;
use qhopf::{Field, QuasiHopf, Result};

fn main() -> Result<()> {
    let q = QuasiHopf::new(dpr_double(&cocycle_zn(3, 1, Field::prime(7)?)?)?)?;
    let u = &drinfeld_u(&q)?.u;
    println!("u = {}", serde_json::to_string(&TensorJson::from_tensor(u)).expect("serializes"));
    let el = rtwist_elements(&q)?;
    println!("u_hat has {} entries, u_check has {}", el.u_hat.nnz(), el.u_check.nnz());
    let mut rep = check_drinfeld_props(&q);
    rep.extend(check_u_tilde(&q));
    rep.extend(check_rtwist_relations(&q));
    print!("{}", rep.render_text());
    Ok(())
}
