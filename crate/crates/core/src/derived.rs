//! The elements `γ`, `δ`, `F`, `F⁻¹` of a quasi-Hopf algebra, antipode
//! modification, and the coopposite and opposite-coopposite structures.
//!
//! Sweedler-style sums are evaluated with [`tensor::contract`]: the summands'
//! legs (with structure maps already applied) are laid side by side and each
//! output leg is the ordered product of some of them. That costs the product
//! of the factors' sizes, which is too much once a twist has made `Φ` dense,
//! so `γ`, `δ` and `F` first contract `Φ⁻¹` into a two-leg middle part and
//! then sum over basis slices of one leg of `Φ`.

use crate::datum::{Meta, QuasiHopf, QuasiHopfDatum};
use crate::error::{Error, Result};
use crate::report::CheckReport;
use crate::rng::SplitMix64;
use crate::tensor::{self, LegMap, LinearMap, SparseTensor};

use LegMap::{Antipode as S, Coproduct as D, CoproductCop as Dcop, Identity as I};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedElements {
    pub gamma: SparseTensor,
    pub delta: SparseTensor,
    pub f: SparseTensor,
    pub f_inv: SparseTensor,
}

/// `Σ_k t_k · w(k)` with `t_k` the slice of `t` at `e_k` on its last leg.
fn sum_right(q: &QuasiHopf, t: &SparseTensor, w: impl Fn(&SparseTensor) -> Result<SparseTensor>) -> Result<SparseTensor> {
    let mut acc = SparseTensor::zero(q.dim(), t.arity() - 1);
    for (k, tk) in t.slices(t.arity() - 1)? {
        acc = acc.add(&q.mult(&tk, &w(&q.basis(k))?)?)?;
    }
    Ok(acc)
}

/// `Σ_k w(k) · t_k` with `t_k` the slice of `t` at `e_k` on its first leg.
fn sum_left(q: &QuasiHopf, t: &SparseTensor, w: impl Fn(&SparseTensor) -> Result<SparseTensor>) -> Result<SparseTensor> {
    let mut acc = SparseTensor::zero(q.dim(), t.arity() - 1);
    for (k, tk) in t.slices(0)? {
        acc = acc.add(&q.mult(&w(&q.basis(k))?, &tk)?)?;
    }
    Ok(acc)
}

/// `γ = Σ S(X̄ᵢYⱼ) α Ȳᵢ Zⱼ₍₁₎ ⊗ S(Xⱼ) α Z̄ᵢ Zⱼ₍₂₎`, evaluated as
/// `Σⱼ (S(Yⱼ) ⊗ S(Xⱼ)) P Δ(Zⱼ)` with `P = Σᵢ S(X̄ᵢ) α Ȳᵢ ⊗ α Z̄ᵢ`.
pub fn gamma(q: &QuasiHopf) -> Result<SparseTensor> {
    let pinv = q.apply_legs(q.phi_inv()?, &[S, I, I])?;
    let a = q.alpha();
    let p = q.contract(&[&pinv, a, a], &[&[0, 3, 1], &[4, 2]])?;
    let phi = q.apply_legs(q.phi(), &[S, S, I])?.permute(&[1, 0, 2])?;
    sum_right(q, &phi, |z| q.mult(&p, &q.delta(z)?))
}

/// Second description of `γ`:
/// `Σ S(Yᵢ X̄ⱼ₍₂₎) α Zᵢ Ȳⱼ ⊗ S(Xᵢ X̄ⱼ₍₁₎) α Z̄ⱼ`.
pub fn gamma_alternative(q: &QuasiHopf) -> Result<SparseTensor> {
    let phi = q.apply_legs(q.phi(), &[S, S, I])?; // S X, S Y, Z
    let pinv = q.apply_legs(q.phi_inv()?, &[D, I, I])?;
    let pinv = q.apply_legs(&pinv, &[S, S, I, I])?; // S X̄₁, S X̄₂, Ȳ, Z̄
    let a = q.alpha();
    q.contract(&[&phi, &pinv, a, a], &[&[4, 1, 7, 2, 5], &[3, 0, 8, 6]])
}

/// `δ = Σ Xᵢ₍₁₎ X̄ⱼ β S(Zᵢ) ⊗ Xᵢ₍₂₎ Ȳⱼ β S(Yᵢ Z̄ⱼ)`, evaluated as
/// `Σᵢ Δ(Xᵢ) P (S(Zᵢ) ⊗ S(Yᵢ))` with `P = Σⱼ X̄ⱼ β ⊗ Ȳⱼ β S(Z̄ⱼ)`.
pub fn delta(q: &QuasiHopf) -> Result<SparseTensor> {
    let pinv = q.apply_legs(q.phi_inv()?, &[I, I, S])?;
    let b = q.beta();
    let p = q.contract(&[&pinv, b, b], &[&[0, 3], &[1, 4, 2]])?;
    let phi = q.apply_legs(q.phi(), &[I, S, S])?.permute(&[0, 2, 1])?;
    sum_left(q, &phi, |x| q.mult(&q.delta(x)?, &p))
}

/// Second description of `δ`:
/// `Σ X̄ᵢ β S(Z̄ᵢ₍₂₎ Zⱼ) ⊗ Ȳᵢ Xⱼ β S(Z̄ᵢ₍₁₎ Yⱼ)`.
pub fn delta_alternative(q: &QuasiHopf) -> Result<SparseTensor> {
    let pinv = q.apply_legs(q.phi_inv()?, &[I, I, D])?;
    let pinv = q.apply_legs(&pinv, &[I, I, S, S])?; // X̄, Ȳ, S Z̄₁, S Z̄₂
    let phi = q.apply_legs(q.phi(), &[I, S, S])?; // X, S Y, S Z
    let b = q.beta();
    q.contract(&[&pinv, &phi, b, b], &[&[0, 7, 6, 3], &[1, 4, 8, 5, 2]])
}

fn compute_f(q: &QuasiHopf, gamma: &SparseTensor, delta: &SparseTensor) -> Result<(SparseTensor, SparseTensor)> {
    // F = Σ (S(X̄₍₂₎) ⊗ S(X̄₍₁₎)) γ Δ(Ȳ β S(Z̄))
    let left = q.apply_legs(q.phi_inv()?, &[I, I, S])?;
    let left = q.contract(&[&left, q.beta()], &[&[0], &[1, 3, 2]])?;
    let left = q.apply_legs(&left, &[Dcop, I])?;
    let left = q.apply_legs(&left, &[S, S, I])?;
    let f = sum_right(q, &left, |y| q.mult(gamma, &q.delta(y)?))?;
    // F⁻¹ = Σ Δ(S(X̄) α Ȳ) δ (S(Z̄₍₂₎) ⊗ S(Z̄₍₁₎))
    let right = q.apply_legs(q.phi_inv()?, &[S, I, I])?;
    let right = q.contract(&[&right, q.alpha()], &[&[0, 3, 1], &[2]])?;
    let right = q.apply_legs(&right, &[I, Dcop])?;
    let right = q.apply_legs(&right, &[I, S, S])?;
    let f_inv = sum_left(q, &right, |x| q.mult(&q.delta(x)?, delta))?;
    Ok((f, f_inv))
}

/// `γ`, `δ`, `F` and `F⁻¹` (cached on `q`). Fails with
/// [`Error::InternalInconsistency`] when the displayed inverse of `F` is not
/// an inverse, which means the datum violates an axiom.
pub fn big_f(q: &QuasiHopf) -> Result<&DerivedElements> {
    q.derived
        .get_or_init(|| {
            let gamma = gamma(q)?;
            let delta = delta(q)?;
            let (f, f_inv) = compute_f(q, &gamma, &delta)?;
            let one = q.one(2);
            if q.mult(&f, &f_inv)? != one || q.mult(&f_inv, &f)? != one {
                return Err(Error::InternalInconsistency("F · F⁻¹ ≠ 1⊗1".into()));
            }
            Ok(DerivedElements { gamma, delta, f, f_inv })
        })
        .as_ref()
        .map_err(Clone::clone)
}

/// The compatibility identities of `F`, plus the cross-check of `γ` and `δ`
/// against their second descriptions.
pub fn check_f_compat(q: &QuasiHopf) -> CheckReport {
    let mut rep = CheckReport::new();
    let field = q.field();
    let el = match big_f(q) {
        Ok(el) => el,
        Err(e) => {
            rep.fail("F.inverse", crate::report::Witness::note(e.to_string()));
            return rep;
        }
    };
    rep.pass("F.inverse");
    rep.guarded("F.gamma", |r| {
        r.equal("F.gamma", &el.gamma, &q.mult(&el.f, &q.delta(q.alpha())?)?, field);
        Ok(())
    });
    rep.guarded("F.delta", |r| {
        r.equal("F.delta", &el.delta, &q.mult(&q.delta(q.beta())?, &el.f_inv)?, field);
        Ok(())
    });
    rep.for_basis("F.coproduct_antipode", q.dim(), field, |i| {
        let a = q.basis(i);
        let left = q.delta(&q.s(&a)?)?;
        let mid = q.s_all(&q.delta_cop(&a)?)?;
        Ok((left, q.prod(&[&el.f_inv, &mid, &el.f])?))
    });
    rep.guarded("F.associator", |r| {
        let left = q.s_all(q.phi())?.permute(&[2, 1, 0])?;
        let one = q.one(1);
        let right = q.prod(&[
            &one.tensor(&el.f)?,
            &q.apply_legs(&el.f, &[I, D])?,
            q.phi(),
            &q.apply_legs(&el.f_inv, &[D, I])?,
            &el.f_inv.tensor(&one)?,
        ])?;
        r.equal("F.associator", &left, &right, field);
        Ok(())
    });
    rep.guarded("gamma.alternative", |r| {
        r.equal("gamma.alternative", &el.gamma, &gamma_alternative(q)?, field);
        Ok(())
    });
    rep.guarded("delta.alternative", |r| {
        r.equal("delta.alternative", &el.delta, &delta_alternative(q)?, field);
        Ok(())
    });
    rep
}

fn carry_inverses(q: &QuasiHopf, datum: QuasiHopfDatum) -> Result<QuasiHopf> {
    let phi_inv = q.phi_inv().ok().cloned();
    let r_inv = q.datum().r.as_ref().and_then(|_| q.r_inv().ok().cloned());
    QuasiHopf::with_inverses(datum, phi_inv, r_inv)
}

fn with_name(meta: &Meta, suffix: &str) -> Meta {
    let mut m = meta.clone();
    m.name = m.name.map(|n| format!("{n}{suffix}"));
    m
}

/// `S_x = x S(·) x⁻¹`, `α_x = x α`, `β_x = β x⁻¹`.
pub fn modify_antipode(q: &QuasiHopf, x: &SparseTensor) -> Result<QuasiHopf> {
    let x_inv = q.invert(x)?;
    let n = q.dim();
    let images = (0..n)
        .map(|i| q.prod(&[x, &q.s(&q.basis(i))?, &x_inv]))
        .collect::<Result<Vec<_>>>()?;
    let mut d = q.datum().clone();
    d.antipode = LinearMap::from_images(n, 1, &images)?;
    d.alpha = q.mult(x, q.alpha())?;
    d.beta = q.mult(q.beta(), &x_inv)?;
    d.meta = with_name(&d.meta, "_mod");
    carry_inverses(q, d)
}

/// A pseudo-random invertible element and its inverse, redrawn from the same
/// stream until an invertible one turns up (at most 64 draws).
pub fn random_invertible(q: &QuasiHopf, seed: u64) -> Result<(SparseTensor, SparseTensor)> {
    let field = q.field();
    let mut rng = SplitMix64::new(seed);
    for _ in 0..64 {
        let v: Vec<_> = (0..q.dim()).map(|i| (i, rng.scalar(field))).collect();
        let x = SparseTensor::from_vec(q.dim(), &v);
        match q.invert(&x) {
            Ok(x_inv) => return Ok((x, x_inv)),
            Err(Error::NotInvertible) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Exhausted)
}

/// Given two antipode structures on the same quasi-bialgebra, returns the
/// invertible `x` with `d_prime = modify_antipode(d, x)`.
pub fn recover_modifier(q: &QuasiHopf, q_prime: &QuasiHopf) -> Result<SparseTensor> {
    let (a, b) = (q.datum(), q_prime.datum());
    if a.algebra != b.algebra || a.delta != b.delta || a.epsilon != b.epsilon || a.phi != b.phi {
        return Err(Error::Precondition(
            "the two data must share algebra, coproduct, counit and associator".into(),
        ));
    }
    let s_prime = q_prime.antipode_map();
    let pinv = q.phi_inv()?;
    // x = Σ S'(X̄) α' Ȳ β S(Z̄)
    let left = q.apply_legs(pinv, &[LegMap::Linear(s_prime), I, S])?;
    let x = q.contract(&[&left, q_prime.alpha(), q.beta()], &[&[0, 3, 1, 4, 2]])?;
    // x⁻¹ = Σ S(X̄) α Ȳ β' S'(Z̄)
    let right = q.apply_legs(pinv, &[S, I, LegMap::Linear(s_prime)])?;
    let x_inv = q.contract(&[&right, q.alpha(), q_prime.beta()], &[&[0, 3, 1, 4, 2]])?;
    let one = q.one(1);
    if q.mult(&x, &x_inv)? != one || q.mult(&x_inv, &x)? != one {
        return Err(Error::InternalInconsistency("recovered x is not invertible by its inverse formula".into()));
    }
    for i in 0..q.dim() {
        let e = q.basis(i);
        if q_prime.s(&e)? != q.prod(&[&x, &q.s(&e)?, &x_inv])? {
            return Err(Error::InternalInconsistency(format!("S' ≠ S_x on basis element {i}")));
        }
    }
    if *q_prime.alpha() != q.mult(&x, q.alpha())? || *q_prime.beta() != q.mult(q.beta(), &x_inv)? {
        return Err(Error::InternalInconsistency("α' ≠ xα or β' ≠ βx⁻¹".into()));
    }
    Ok(x)
}

/// Recomputes `γ`, `δ`, `F` in `modify_antipode(q, x)` and compares with
/// `(x⊗x)γ`, `δ(x⁻¹⊗x⁻¹)`, `(x⊗x)FΔ(x⁻¹)`.
pub fn check_modification_laws(q: &QuasiHopf, x: &SparseTensor) -> CheckReport {
    let mut rep = CheckReport::new();
    let field = q.field();
    rep.guarded("modification", |r| {
        let qx = modify_antipode(q, x)?;
        let x_inv = q.invert(x)?;
        let el = big_f(q)?;
        let elx = big_f(&qx)?;
        let xx = x.tensor(x)?;
        let xixi = x_inv.tensor(&x_inv)?;
        r.equal("modification.gamma", &elx.gamma, &q.mult(&xx, &el.gamma)?, field);
        r.equal("modification.delta", &elx.delta, &q.mult(&el.delta, &xixi)?, field);
        r.equal(
            "modification.F",
            &elx.f,
            &q.prod(&[&xx, &el.f, &q.delta(&x_inv)?])?,
            field,
        );
        Ok(())
    });
    rep
}

/// `A^cop`: coopposite coproduct, associator `Σ Z̄ᵢ⊗Ȳᵢ⊗X̄ᵢ`, antipode `S⁻¹`,
/// evaluation `S⁻¹(α)`, coevaluation `S⁻¹(β)`. An R-matrix is carried over as
/// `R'`, a ribbon candidate unchanged.
pub fn coopposite(q: &QuasiHopf) -> Result<QuasiHopf> {
    let s_inv = q.antipode_inverse_map()?.clone();
    let mut d = q.datum().clone();
    let phi_cop = q.phi_inv()?.permute(&[2, 1, 0])?;
    let phi_cop_inv = q.phi().permute(&[2, 1, 0])?;
    d.delta = q.delta_cop_map().clone();
    d.phi = phi_cop;
    d.alpha = q.s_inv(q.alpha())?;
    d.beta = q.s_inv(q.beta())?;
    d.antipode = s_inv;
    let mut r_inv = None;
    if let Some(r) = &q.datum().r {
        d.r = Some(tensor::flip(r, 0, 1)?);
        r_inv = Some(tensor::flip(q.r_inv()?, 0, 1)?);
    }
    d.meta = with_name(&d.meta, "_cop");
    QuasiHopf::with_inverses(d, Some(phi_cop_inv), r_inv)
}

/// `γ`, `δ` and `F` recomputed in `A^cop` against `(S⁻¹⊗S⁻¹)` of the
/// originals.
pub fn check_coopposite(q: &QuasiHopf) -> CheckReport {
    let mut rep = CheckReport::new();
    let field = q.field();
    rep.guarded("cop", |r| {
        let cop = coopposite(q)?;
        let (el, elc) = (big_f(q)?, big_f(&cop)?);
        let s2 = |t: &SparseTensor| q.s_inv_all(t);
        r.equal("cop.gamma", &elc.gamma, &s2(&el.gamma)?, field);
        r.equal("cop.delta", &elc.delta, &s2(&el.delta)?, field);
        r.equal("cop.F", &elc.f, &s2(&el.f)?, field);
        Ok(())
    });
    rep
}

/// `A^opcop`: opposite product, coopposite coproduct, associator
/// `Σ Zᵢ⊗Yᵢ⊗Xᵢ`, the same antipode, evaluation `β`, coevaluation `α`, the
/// same R-matrix.
pub fn op_cop(q: &QuasiHopf) -> Result<QuasiHopf> {
    let mut d = q.datum().clone();
    d.algebra = q.algebra().opposite();
    d.delta = q.delta_cop_map().clone();
    d.phi = q.phi().permute(&[2, 1, 0])?;
    let phi_inv = q.phi_inv()?.permute(&[2, 1, 0])?;
    d.alpha = q.beta().clone();
    d.beta = q.alpha().clone();
    let r_inv = match &q.datum().r {
        Some(_) => Some(q.r_inv()?.clone()),
        None => None,
    };
    d.meta = with_name(&d.meta, "_opcop");
    QuasiHopf::with_inverses(d, Some(phi_inv), r_inv)
}
