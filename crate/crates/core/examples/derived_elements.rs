//! γ, δ, F and F⁻¹ of the twisted double D^ω(Z₂) over F₇, with the
//! compatibility checks they satisfy.
//!
//! cargo run --example derived_elements

use qhopf::builders::{cocycle_zn, dpr_double};
use qhopf::derived::{big_f, check_f_compat};
use qhopf::{Field, QuasiHopf, Result};

fn main() -> Result<()> {
    let f7 = Field::prime(7)?;
    let q = QuasiHopf::new(dpr_double(&cocycle_zn(2, 1, f7)?)?)?;
    let el = big_f(&q)?;
    for (name, t) in [("gamma", &el.gamma), ("delta", &el.delta), ("F", &el.f), ("Finv", &el.f_inv)] {
        println!("{name:<6} {} nonzero entries", t.nnz());
    }
    print!("{}", check_f_compat(&q).render_text());
    Ok(())
}
