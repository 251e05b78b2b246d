//! Axiom verifiers for the quasi-bialgebra, quasi-Hopf and quasitriangular
//! layers, and the level driver used by the CLI.
//!
//! Every check has a fixed name and the checks appear in a fixed order, so
//! reports for identical inputs are identical.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::datum::QuasiHopf;
use crate::derived;
use crate::error::Error;
use crate::report::{CheckReport, Witness};
use crate::ribbon;
use crate::tensor::{self, LegMap, SparseTensor};

use LegMap::{Antipode as S, Coproduct as D, Counit as E, Identity as I};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Bialgebra,
    Hopf,
    Qt,
    Ribbon,
}

impl Level {
    /// The highest layer a datum carries data for.
    pub fn highest(q: &QuasiHopf) -> Level {
        match (&q.datum().r, &q.datum().v) {
            (Some(_), Some(_)) => Level::Ribbon,
            (Some(_), None) => Level::Qt,
            _ => Level::Hopf,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Bialgebra => "bialgebra",
            Level::Hopf => "hopf",
            Level::Qt => "qt",
            Level::Ribbon => "ribbon",
        })
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Level, Error> {
        match s {
            "bialgebra" => Ok(Level::Bialgebra),
            "hopf" => Ok(Level::Hopf),
            "qt" => Ok(Level::Qt),
            "ribbon" => Ok(Level::Ribbon),
            other => Err(Error::Precondition(format!("unknown level {other:?}"))),
        }
    }
}

pub const BIALGEBRA_CHECKS: &[&str] = &[
    "algebra.associativity",
    "algebra.unit",
    "coproduct.homomorphism",
    "counit.homomorphism",
    "associator.invertible",
    "quasi_coassociativity",
    "pentagon",
    "counitality",
    "counit_associator",
    "counit_associator_property",
];

pub const HOPF_CHECKS: &[&str] = &[
    "antipode.anti_automorphism",
    "antipode.left",
    "antipode.right",
    "duality.left",
    "duality.right",
    "counit.antipode",
    "counit.alpha_beta",
];

pub const QT_CHECKS: &[&str] = &[
    "R.invertible",
    "quasi_cocommutativity",
    "hexagon.left",
    "hexagon.right",
    "R.counit",
    "R.antipode",
];

pub fn verify_quasi_bialgebra(q: &QuasiHopf) -> CheckReport {
    let mut rep = CheckReport::new();
    let alg = q.algebra();
    let field = q.field();
    let n = q.dim();
    rep.bool("algebra.associativity", alg.check_associative().is_none(), || {
        let t = alg.check_associative().unwrap_or_default();
        Witness {
            index: Some(t),
            left: None,
            right: None,
            note: Some("(e_i e_j) e_k ≠ e_i (e_j e_k)".into()),
        }
    });
    rep.bool("algebra.unit", alg.check_unit().is_none(), || {
        Witness::note(format!("1 · e_{0} ≠ e_{0}", alg.check_unit().unwrap_or_default()))
    });
    // Δ(e_i e_j) = Δ(e_i)Δ(e_j) and Δ(1) = 1⊗1
    rep.guarded("coproduct.homomorphism", |r| {
        let d1 = q.delta(&q.one(1))?;
        if d1 != q.one(2) {
            r.equal("coproduct.homomorphism", &d1, &q.one(2), field);
            return Ok(());
        }
        let deltas: Vec<SparseTensor> = (0..n).map(|i| q.delta(&q.basis(i))).collect::<Result<_, _>>()?;
        r.for_basis("coproduct.homomorphism", n * n, field, |ij| {
            let (i, j) = (ij / n, ij % n);
            let prod = q.mult(&q.basis(i), &q.basis(j))?;
            Ok((q.delta(&prod)?, q.mult(&deltas[i], &deltas[j])?))
        });
        Ok(())
    });
    rep.guarded("counit.homomorphism", |r| {
        let eps: Vec<_> = q.datum().epsilon.clone();
        let unit = q.eps(&q.one(1))?;
        if !unit.is_one() {
            r.fail("counit.homomorphism", Witness::note(format!("ε(1) = {unit}")));
            return Ok(());
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = q.eps(&q.mult(&q.basis(i), &q.basis(j))?)?;
                let rhs = &eps[i] * &eps[j];
                if lhs != rhs {
                    r.fail(
                        "counit.homomorphism",
                        Witness {
                            index: Some(vec![i, j]),
                            left: Some(lhs.to_string()),
                            right: Some(rhs.to_string()),
                            note: None,
                        },
                    );
                    return Ok(());
                }
            }
        }
        r.pass("counit.homomorphism");
        Ok(())
    });
    match q.phi_inv() {
        Ok(_) => rep.pass("associator.invertible"),
        Err(e) => rep.fail("associator.invertible", Witness::note(e.to_string())),
    }
    let phi = q.phi();
    rep.for_basis("quasi_coassociativity", n, field, |i| {
        let d = q.delta(&q.basis(i))?;
        let left = q.mult(&q.apply_legs(&d, &[I, D])?, phi)?;
        let right = q.mult(phi, &q.apply_legs(&d, &[D, I])?)?;
        Ok((left, right))
    });
    rep.guarded("pentagon", |r| {
        let one = q.one(1);
        let left = q.mult(&q.apply_legs(phi, &[I, I, D])?, &q.apply_legs(phi, &[D, I, I])?)?;
        let right = q.prod(&[&one.tensor(phi)?, &q.apply_legs(phi, &[I, D, I])?, &phi.tensor(&one)?])?;
        r.equal("pentagon", &left, &right, field);
        Ok(())
    });
    rep.for_basis("counitality", n, field, |i| {
        let a = q.basis(i);
        let d = q.delta(&a)?;
        let l = q.apply_legs(&d, &[E, I])?;
        if l != a {
            return Ok((l, a));
        }
        Ok((q.apply_legs(&d, &[I, E])?, a))
    });
    rep.guarded("counit_associator", |r| {
        r.equal("counit_associator", &q.apply_legs(phi, &[I, E, I])?, &q.one(2), field);
        Ok(())
    });
    rep.guarded("counit_associator_property", |r| {
        let left = q.apply_legs(phi, &[E, I, I])?;
        let right = q.apply_legs(phi, &[I, I, E])?;
        if left != q.one(2) {
            r.equal("counit_associator_property", &left, &q.one(2), field);
        } else {
            r.equal("counit_associator_property", &right, &q.one(2), field);
        }
        Ok(())
    });
    rep
}

pub fn verify_quasi_hopf(q: &QuasiHopf) -> CheckReport {
    let mut rep = CheckReport::new();
    let field = q.field();
    let n = q.dim();
    let (alpha, beta) = (q.alpha(), q.beta());
    rep.guarded("antipode.anti_automorphism", |r| {
        if let Err(e) = q.antipode_inverse_map() {
            r.fail("antipode.anti_automorphism", Witness::note(format!("S is not bijective: {e}")));
            return Ok(());
        }
        let s1 = q.s(&q.one(1))?;
        if s1 != q.one(1) {
            r.equal("antipode.anti_automorphism", &s1, &q.one(1), field);
            return Ok(());
        }
        let images: Vec<SparseTensor> = (0..n).map(|i| q.s(&q.basis(i))).collect::<Result<_, _>>()?;
        r.for_basis("antipode.anti_automorphism", n * n, field, |ij| {
            let (i, j) = (ij / n, ij % n);
            let left = q.s(&q.mult(&q.basis(i), &q.basis(j))?)?;
            Ok((left, q.mult(&images[j], &images[i])?))
        });
        Ok(())
    });
    rep.for_basis("antipode.left", n, field, |i| {
        let a = q.basis(i);
        let d = q.apply_legs(&q.delta(&a)?, &[S, I])?;
        let left = q.contract(&[&d, alpha], &[&[0, 2, 1]])?;
        Ok((left, alpha.scale(&q.eps(&a)?)))
    });
    rep.for_basis("antipode.right", n, field, |i| {
        let a = q.basis(i);
        let d = q.apply_legs(&q.delta(&a)?, &[I, S])?;
        let left = q.contract(&[&d, beta], &[&[0, 2, 1]])?;
        Ok((left, beta.scale(&q.eps(&a)?)))
    });
    rep.guarded("duality.left", |r| {
        // Σ X β S(Y) α Z = 1
        let phi = q.apply_legs(q.phi(), &[I, S, I])?;
        let left = q.contract(&[&phi, beta, alpha], &[&[0, 3, 1, 4, 2]])?;
        r.equal("duality.left", &left, &q.one(1), field);
        Ok(())
    });
    rep.guarded("duality.right", |r| {
        // Σ S(X̄) α Ȳ β S(Z̄) = 1
        let pinv = q.apply_legs(q.phi_inv()?, &[S, I, S])?;
        let right = q.contract(&[&pinv, alpha, beta], &[&[0, 3, 1, 4, 2]])?;
        r.equal("duality.right", &right, &q.one(1), field);
        Ok(())
    });
    rep.guarded("counit.antipode", |r| {
        for i in 0..n {
            let a = q.basis(i);
            let (l, rr) = (q.eps(&q.s(&a)?)?, q.eps(&a)?);
            if l != rr {
                r.fail(
                    "counit.antipode",
                    Witness {
                        index: Some(vec![i]),
                        left: Some(l.to_string()),
                        right: Some(rr.to_string()),
                        note: None,
                    },
                );
                return Ok(());
            }
        }
        r.pass("counit.antipode");
        Ok(())
    });
    rep.guarded("counit.alpha_beta", |r| {
        let prod = &q.eps(alpha)? * &q.eps(beta)?;
        r.equal_scalars("counit.alpha_beta", &prod, &field.one());
        Ok(())
    });
    rep
}

/// Left hexagon right-hand side: `Φ₃₁₂ R₁₃ Φ⁻¹₁₃₂ R₂₃ Φ`.
pub fn hexagon_left_rhs(q: &QuasiHopf, r: &SparseTensor) -> crate::error::Result<SparseTensor> {
    let one = q.one(1);
    q.prod(&[
        &q.phi().permute(&[1, 2, 0])?,
        &tensor::flip(&r.tensor(&one)?, 1, 2)?,
        &tensor::flip(q.phi_inv()?, 1, 2)?,
        &one.tensor(r)?,
        q.phi(),
    ])
}

/// Right hexagon right-hand side: `Φ⁻¹₂₃₁ R₁₃ Φ₂₁₃ R₁₂ Φ⁻¹`.
pub fn hexagon_right_rhs(q: &QuasiHopf, r: &SparseTensor) -> crate::error::Result<SparseTensor> {
    let one = q.one(1);
    q.prod(&[
        &q.phi_inv()?.permute(&[2, 0, 1])?,
        &tensor::flip(&r.tensor(&one)?, 1, 2)?,
        &tensor::flip(q.phi(), 0, 1)?,
        &r.tensor(&one)?,
        q.phi_inv()?,
    ])
}

/// Quasitriangularity of `r` (not necessarily the datum's own R-matrix),
/// so the same checks serve `R′⁻¹`.
pub fn verify_r_matrix(q: &QuasiHopf, r: &SparseTensor) -> CheckReport {
    let mut rep = CheckReport::new();
    let field = q.field();
    let n = q.dim();
    let r_inv = q.invert(r);
    match &r_inv {
        Ok(_) => rep.pass("R.invertible"),
        Err(e) => rep.fail("R.invertible", Witness::note(e.to_string())),
    }
    rep.for_basis("quasi_cocommutativity", n, field, |i| {
        let a = q.basis(i);
        Ok((q.mult(&q.delta_cop(&a)?, r)?, q.mult(r, &q.delta(&a)?)?))
    });
    rep.guarded("hexagon.left", |rp| {
        rp.equal("hexagon.left", &q.apply_legs(r, &[D, I])?, &hexagon_left_rhs(q, r)?, field);
        Ok(())
    });
    rep.guarded("hexagon.right", |rp| {
        rp.equal("hexagon.right", &q.apply_legs(r, &[I, D])?, &hexagon_right_rhs(q, r)?, field);
        Ok(())
    });
    rep.guarded("R.counit", |rp| {
        let left = q.apply_legs(r, &[E, I])?;
        if left != q.one(1) {
            rp.equal("R.counit", &left, &q.one(1), field);
        } else {
            rp.equal("R.counit", &q.apply_legs(r, &[I, E])?, &q.one(1), field);
        }
        Ok(())
    });
    rep.guarded("R.antipode", |rp| {
        let el = derived::big_f(q)?;
        let right = q.prod(&[&q.flip(&el.f)?, r, &el.f_inv])?;
        rp.equal("R.antipode", &q.s_all(r)?, &right, field);
        Ok(())
    });
    rep
}

pub fn verify_quasitriangular(q: &QuasiHopf) -> CheckReport {
    match q.r() {
        Ok(r) => verify_r_matrix(q, r),
        Err(e) => {
            let mut rep = CheckReport::new();
            for name in QT_CHECKS {
                rep.fail(*name, Witness::note(e.to_string()));
            }
            rep
        }
    }
}

/// Runs every layer up to `level`. A layer whose prerequisite layer failed
/// is reported as skipped.
pub fn verify(q: &QuasiHopf, level: Level) -> CheckReport {
    let mut rep = verify_quasi_bialgebra(q);
    if level == Level::Bialgebra {
        return rep;
    }
    if !rep.passed() {
        rep.skip_all(HOPF_CHECKS, "quasi-bialgebra axioms failed");
    } else {
        rep.extend(verify_quasi_hopf(q));
    }
    if level == Level::Hopf {
        return rep;
    }
    if !rep.passed() {
        rep.skip_all(QT_CHECKS, "quasi-Hopf axioms failed");
    } else {
        rep.extend(verify_quasitriangular(q));
    }
    if level == Level::Qt {
        return rep;
    }
    let ok = rep.passed();
    match q.v() {
        Ok(v) if ok => {
            rep.extend(ribbon::is_ribbon(q, v));
            if rep.passed() {
                rep.extend(ribbon::check_ribbon_lemma(q, v));
                rep.extend(ribbon::check_main_theorem(q, v));
            }
        }
        Ok(_) => rep.skip_all(ribbon::RIBBON_CHECKS, "quasitriangular axioms failed"),
        Err(e) => {
            for name in ribbon::RIBBON_CHECKS {
                rep.fail(*name, Witness::note(e.to_string()));
            }
        }
    }
    rep
}
