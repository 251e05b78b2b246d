//! The Drinfel'd element `u` and its opposite-coopposite counterpart `ũ`.

use crate::datum::QuasiHopf;
use crate::derived::{self, big_f};
use crate::error::{Error, Result};
use crate::report::{CheckReport, Witness};
use crate::tensor::{LegMap, SparseTensor};

use LegMap::{Antipode as S, Identity as I};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrinfeldElements {
    pub u: SparseTensor,
    pub u_inv: SparseTensor,
    pub u_tilde: Option<SparseTensor>,
}

/// `u = Σ S(Ȳᵢ β S(Z̄ᵢ)) S(t_l) α s_l X̄ᵢ`.
pub fn u_formula(q: &QuasiHopf) -> Result<SparseTensor> {
    let r = q.r()?;
    let s2 = q.antipode_map().then(q.antipode_map())?;
    let pinv = q.apply_legs(q.phi_inv()?, &[I, S, LegMap::Linear(&s2)])?; // X̄, S Ȳ, S² Z̄
    let r = q.apply_legs(r, &[I, S])?; // s, S t
    let sb = q.s(q.beta())?;
    q.contract(&[&pinv, &r, &sb, q.alpha()], &[&[2, 5, 1, 4, 6, 3, 0]])
}

/// `ũ = Σ Z̄ᵢ s_l β S(t_l) S(S(X̄ᵢ) α Ȳᵢ)`.
pub fn u_tilde_formula(q: &QuasiHopf) -> Result<SparseTensor> {
    let r = q.r()?;
    let s2 = q.antipode_map().then(q.antipode_map())?;
    let pinv = q.apply_legs(q.phi_inv()?, &[LegMap::Linear(&s2), S, I])?; // S² X̄, S Ȳ, Z̄
    let r = q.apply_legs(r, &[I, S])?; // s, S t
    let sa = q.s(q.alpha())?;
    q.contract(&[&pinv, &r, q.beta(), &sa], &[&[2, 3, 5, 4, 1, 6, 0]])
}

/// `u`, `u⁻¹` and `ũ`, cached on `q`. Non-invertibility of `u` contradicts
/// the axioms and is reported as [`Error::InternalInconsistency`].
pub fn drinfeld_u(q: &QuasiHopf) -> Result<&DrinfeldElements> {
    q.drinfeld
        .get_or_init(|| {
            let u = u_formula(q)?;
            let u_inv = q
                .invert(&u)
                .map_err(|_| Error::InternalInconsistency("the Drinfel'd element is not invertible".into()))?;
            let u_tilde = Some(u_tilde_formula(q)?);
            Ok(DrinfeldElements { u, u_inv, u_tilde })
        })
        .as_ref()
        .map_err(Clone::clone)
}

pub fn check_drinfeld_props(q: &QuasiHopf) -> CheckReport {
    let mut rep = CheckReport::new();
    let field = q.field();
    let el = match drinfeld_u(q) {
        Ok(el) => el,
        Err(e) => {
            rep.fail("u.invertible", Witness::note(e.to_string()));
            return rep;
        }
    };
    rep.pass("u.invertible");
    rep.guarded("u.counit", |r| {
        r.equal_scalars("u.counit", &q.eps(&el.u)?, &field.one());
        Ok(())
    });
    rep.for_basis("u.antipode_square", q.dim(), field, |i| {
        let a = q.basis(i);
        Ok((q.s(&q.s(&a)?)?, q.prod(&[&el.u, &a, &el.u_inv])?))
    });
    rep.guarded("u.coproduct", |r| {
        let f = big_f(q)?;
        let r_inv = q.r_inv()?;
        let rr_inv = q.mult(r_inv, &q.flip(r_inv)?)?;
        let right = q.prod(&[&f.f_inv, &q.s_all(&q.flip(&f.f)?)?, &el.u.tensor(&el.u)?, &rr_inv])?;
        r.equal("u.coproduct", &q.delta(&el.u)?, &right, field);
        Ok(())
    });
    rep
}

/// `u_x = x S(x⁻¹) u`, with `u_x` recomputed in the modified datum.
pub fn check_u_under_modification(q: &QuasiHopf, x: &SparseTensor) -> CheckReport {
    let mut rep = CheckReport::new();
    rep.guarded("u.modification", |r| {
        let qx = derived::modify_antipode(q, x)?;
        let ux = &drinfeld_u(&qx)?.u;
        let right = q.prod(&[x, &q.s(&q.invert(x)?)?, &drinfeld_u(q)?.u])?;
        r.equal("u.modification", ux, &right, q.field());
        Ok(())
    });
    rep
}

/// `ũ` by its formula against the Drinfel'd element of `A^opcop`, then
/// `u = S(ũ)`.
pub fn check_u_tilde(q: &QuasiHopf) -> CheckReport {
    let mut rep = CheckReport::new();
    let field = q.field();
    rep.guarded("u_tilde.opcop", |r| {
        let el = drinfeld_u(q)?;
        let ut = el.u_tilde.as_ref().expect("computed with u");
        let opcop = derived::op_cop(q)?;
        r.equal("u_tilde.opcop", ut, &u_formula(&opcop)?, field);
        r.equal("u_tilde.antipode", &el.u, &q.s(ut)?, field);
        Ok(())
    });
    rep
}
