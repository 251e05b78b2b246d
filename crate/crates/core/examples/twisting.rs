//! Seeded random twists of Sweedler's H₄: the twisted datum verifies, γ, δ
//! and F transform as expected, and u does not change.
//!
//! cargo run --example twisting [-- SEEDS]

use qhopf::builders::sweedler;
use qhopf::twisting::{check_twist_elements, check_u_twist_invariance, random_twist, twist};
use qhopf::{verify, Level, QuasiHopf, Result};

fn main() -> Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let q = QuasiHopf::new(sweedler()?)?;
    for seed in 0..n {
        let tw = random_twist(&q, seed)?;
        let qt = twist(&q, &tw)?;
        let mut rep = verify(&qt, Level::Qt);
        rep.extend(check_twist_elements(&q, &tw));
        rep.extend(check_u_twist_invariance(&q, &tw));
        println!(
            "seed {seed}: Phi_T has {} entries, {} checks, {} failed",
            qt.phi().nnz(),
            rep.checks.len(),
            rep.failures().count()
        );
    }
    Ok(())
}
