//! The coopposite and op-cop data of Sweedler's H₄: both verify, F of the
//! coopposite is (S⁻¹⊗S⁻¹)(F), and ũ matches the op-cop Drinfeld element.
//!
//! cargo run --example coopposite

use qhopf::builders::sweedler;
use qhopf::derived::{check_coopposite, coopposite, op_cop};
use qhopf::quasitriangular::check_u_tilde;
use qhopf::ribbon::check_opcop_table;
use qhopf::twisting::opcop_twist_iso;
use qhopf::{verify, Level, QuasiHopf, Result};

fn main() -> Result<()> {
    let q = QuasiHopf::new(sweedler()?)?;
    for (name, d) in [("cop", coopposite(&q)?), ("opcop", op_cop(&q)?)] {
        println!("{name:<6} verify at qt: {}", verify(&d, Level::Qt).passed());
    }
    let mut rep = check_coopposite(&q);
    rep.extend(check_u_tilde(&q));
    rep.extend(check_opcop_table(&q));
    rep.extend(opcop_twist_iso(&q));
    print!("{}", rep.render_text());
    Ok(())
}
