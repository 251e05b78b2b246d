//! Twisting by a counit-normalized invertible `T ∈ A⊗A`, and the
//! identification of `A^opcop` with a twist of `A`.

use crate::datum::QuasiHopf;
use crate::derived::big_f;
use crate::error::{Error, Result};
use crate::quasitriangular::drinfeld_u;
use crate::report::{CheckReport, Witness};
use crate::rng::SplitMix64;
use crate::tensor::{self, LegMap, LinearMap, SparseTensor};

use LegMap::{Antipode as S, Coproduct as D, CoproductCop as Dcop, Counit as E, Identity as I};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Twist {
    pub t: SparseTensor,
    pub t_inv: SparseTensor,
}

impl Twist {
    /// Validates counit normalization and inverts `t`.
    pub fn new(q: &QuasiHopf, t: SparseTensor) -> Result<Twist> {
        if t.arity() != 2 || t.dim() != q.dim() {
            return Err(Error::Shape("a twist is an element of A⊗A".into()));
        }
        let one = q.one(1);
        if q.apply_legs(&t, &[E, I])? != one || q.apply_legs(&t, &[I, E])? != one {
            return Err(Error::InvalidTwist("(ε⊗id)(T) = (id⊗ε)(T) = 1 fails".into()));
        }
        let t_inv = q.invert(&t)?;
        Ok(Twist { t, t_inv })
    }

    pub fn identity(q: &QuasiHopf) -> Twist {
        Twist {
            t: q.one(2),
            t_inv: q.one(2),
        }
    }

    /// The same twist read in the opposite direction.
    pub fn inverse(&self) -> Twist {
        Twist {
            t: self.t_inv.clone(),
            t_inv: self.t.clone(),
        }
    }
}

/// `Δ_T = TΔ(·)T⁻¹`, `Φ_T = (1⊗T)(id⊗Δ)(T)Φ(Δ⊗id)(T⁻¹)(T⁻¹⊗1)`,
/// `α_T = Σ S(f̄)αḡ`, `β_T = Σ fβS(g)`, `R_T = T′RT⁻¹`.
pub fn twist(q: &QuasiHopf, tw: &Twist) -> Result<QuasiHopf> {
    let (t, ti) = (&tw.t, &tw.t_inv);
    let n = q.dim();
    let one = q.one(1);
    let images = (0..n)
        .map(|i| q.prod(&[t, &q.delta(&q.basis(i))?, ti]))
        .collect::<Result<Vec<_>>>()?;
    let mut d = q.datum().clone();
    d.delta = LinearMap::from_images(n, 2, &images)?;
    d.phi = q.prod(&[
        &one.tensor(t)?,
        &q.apply_legs(t, &[I, D])?,
        q.phi(),
        &q.apply_legs(ti, &[D, I])?,
        &ti.tensor(&one)?,
    ])?;
    let phi_inv = q.prod(&[
        &t.tensor(&one)?,
        &q.apply_legs(t, &[D, I])?,
        q.phi_inv()?,
        &q.apply_legs(ti, &[I, D])?,
        &one.tensor(ti)?,
    ])?;
    d.alpha = q.contract(&[&q.apply_legs(ti, &[S, I])?, q.alpha()], &[&[0, 2, 1]])?;
    d.beta = q.contract(&[&q.apply_legs(t, &[I, S])?, q.beta()], &[&[0, 2, 1]])?;
    let mut r_inv = None;
    if let Some(r) = &q.datum().r {
        d.r = Some(q.prod(&[&tensor::flip(t, 0, 1)?, r, ti])?);
        r_inv = Some(q.prod(&[t, q.r_inv()?, &tensor::flip(ti, 0, 1)?])?);
    }
    d.meta.name = d.meta.name.map(|s| format!("{s}_twisted"));
    QuasiHopf::with_inverses(d, Some(phi_inv), r_inv)
}

/// Deterministic pseudo-random twist.
///
/// A tensor `T₀` with sampled coordinates is projected onto the kernel of
/// both `ε⊗id` and `id⊗ε`:
/// `T₁ = T₀ − 1⊗(ε⊗id)(T₀) − (id⊗ε)(T₀)⊗1 + (ε⊗ε)(T₀)·1⊗1`.
/// The twist is `1⊗1 + s·T₁` for the smallest `s ∈ {1, 2, …}` giving an
/// invertible element. Over a small field a dense `T₁` often has every
/// `1 + sλ` vanishing somewhere on its spectrum, so a failed draw is
/// replaced by a sparser one (attempt `a` keeps each coordinate with
/// probability `2⁻ᵃ`).
pub fn random_twist(q: &QuasiHopf, seed: u64) -> Result<Twist> {
    let field = q.field();
    let n = q.dim();
    let mut rng = SplitMix64::new(seed);
    let one = q.one(1);
    let limit = field.order().unwrap_or(64).min(64);
    for attempt in 0..16u32 {
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if rng.below(1 << attempt) == 0 {
                    entries.push((vec![i, j], rng.scalar(field)));
                }
            }
        }
        let t0 = SparseTensor::from_entries(n, 2, entries)?;
        let left = q.apply_legs(&t0, &[E, I])?;
        let right = q.apply_legs(&t0, &[I, E])?;
        let c = q.apply_legs(&t0, &[E, E])?.as_scalar(field);
        let t1 = t0
            .sub(&one.tensor(&left)?)?
            .sub(&right.tensor(&one)?)?
            .add(&q.one(2).scale(&c))?;
        if t1.is_zero() {
            continue;
        }
        for s in 1..limit {
            let t = q.one(2).add(&t1.scale(&field.from_i64(s as i64)))?;
            match Twist::new(q, t) {
                Ok(tw) => return Ok(tw),
                Err(Error::NotInvertible) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Err(Error::Exhausted)
}

/// The three transformation identities for `γ_T`, `δ_T`, `F_T`, each
/// recomputed from scratch in the twisted datum.
pub fn check_twist_elements(q: &QuasiHopf, tw: &Twist) -> CheckReport {
    let mut rep = CheckReport::new();
    let field = q.field();
    rep.guarded("twist.elements", |r| {
        let qt = twist(q, tw)?;
        let el = big_f(q)?;
        let elt = big_f(&qt)?;
        let (t, ti) = (&tw.t, &tw.t_inv);
        let st_flip = q.s_all(&tensor::flip(t, 0, 1)?)?;
        let sti_flip = q.s_all(&tensor::flip(ti, 0, 1)?)?;

        let left = q.prod(&[&st_flip, &elt.gamma, t])?;
        let a = q.apply_legs(&q.apply_legs(ti, &[Dcop, D])?, &[S, S, I, I])?;
        let right = q.contract(&[&a, &el.gamma], &[&[0, 4, 2], &[1, 5, 3]])?;
        r.equal("twist.gamma", &left, &right, field);

        let left = q.prod(&[ti, &elt.delta, &sti_flip])?;
        let b = q.apply_legs(&q.apply_legs(t, &[D, Dcop])?, &[I, I, S, S])?;
        let right = q.contract(&[&b, &el.delta], &[&[0, 4, 2], &[1, 5, 3]])?;
        r.equal("twist.delta", &left, &right, field);

        r.equal("twist.F", &elt.f, &q.prod(&[&sti_flip, &el.f, ti])?, field);
        Ok(())
    });
    rep
}

/// `u_T = u`.
pub fn check_u_twist_invariance(q: &QuasiHopf, tw: &Twist) -> CheckReport {
    let mut rep = CheckReport::new();
    rep.guarded("twist.u", |r| {
        let qt = twist(q, tw)?;
        r.equal("twist.u", &drinfeld_u(&qt)?.u, &drinfeld_u(q)?.u, q.field());
        Ok(())
    });
    rep
}

/// The antipode as a map from `A^opcop` to the twist of `A` by
/// `T = ε(β)F`.
pub fn opcop_twist_iso(q: &QuasiHopf) -> CheckReport {
    let mut rep = CheckReport::new();
    let field = q.field();
    let n = q.dim();
    let el = match big_f(q) {
        Ok(el) => el,
        Err(e) => {
            rep.fail("iso.twist_normalized", Witness::note(e.to_string()));
            return rep;
        }
    };
    let eb = match q.eps(q.beta()) {
        Ok(c) => c,
        Err(e) => {
            rep.fail("iso.twist_normalized", Witness::note(e.to_string()));
            return rep;
        }
    };
    let ea = q.eps(q.alpha()).unwrap_or_else(|_| field.zero());
    let tw = Twist {
        t: el.f.scale(&eb),
        t_inv: match eb.inv() {
            Ok(c) => el.f_inv.scale(&c),
            Err(e) => {
                rep.fail("iso.twist_normalized", Witness::note(e.to_string()));
                return rep;
            }
        },
    };
    rep.guarded("iso.twist_normalized", |r| {
        let one = q.one(1);
        let l = q.apply_legs(&tw.t, &[E, I])?;
        if l != one {
            r.equal("iso.twist_normalized", &l, &one, field);
        } else {
            r.equal("iso.twist_normalized", &q.apply_legs(&tw.t, &[I, E])?, &one, field);
        }
        Ok(())
    });
    if !rep.passed() {
        return rep;
    }
    let qt = match twist(q, &tw) {
        Ok(qt) => qt,
        Err(e) => {
            rep.fail("iso.twist", Witness::note(e.to_string()));
            return rep;
        }
    };
    rep.for_basis("iso.algebra", n * n, field, |ij| {
        let (i, j) = (ij / n, ij % n);
        let op = q.mult(&q.basis(j), &q.basis(i))?;
        Ok((q.s(&op)?, q.mult(&q.s(&q.basis(i))?, &q.s(&q.basis(j))?)?))
    });
    rep.for_basis("iso.coproduct", n, field, |i| {
        let a = q.basis(i);
        Ok((q.s_all(&q.delta_cop(&a)?)?, qt.delta(&q.s(&a)?)?))
    });
    rep.guarded("iso.associator", |r| {
        let left = q.s_all(&q.phi().permute(&[2, 1, 0])?)?;
        r.equal("iso.associator", &left, qt.phi(), field);
        Ok(())
    });
    rep.guarded("iso.alpha_beta", |r| {
        let eb2 = &eb * &eb;
        let ea2 = &ea * &ea;
        r.equal("iso.alpha", &q.s(q.beta())?, &qt.alpha().scale(&eb2), field);
        r.equal("iso.beta", &q.s(q.alpha())?, &qt.beta().scale(&ea2), field);
        Ok(())
    });
    if q.datum().r.is_some() {
        rep.guarded("iso.R", |r| {
            r.equal("iso.R", &q.s_all(q.r()?)?, qt.r()?, field);
            Ok(())
        });
        rep.guarded("iso.u_tilde", |r| {
            let x = q.one(1).scale(&(&eb * &eb));
            let ut = drinfeld_u(q)?.u_tilde.clone().expect("computed with u");
            let u_t = &drinfeld_u(&qt)?.u;
            let right = q.prod(&[&x, &q.s(&q.invert(&x)?)?, u_t])?;
            r.equal("iso.u_tilde", &q.s(&ut)?, &right, field);
            r.equal("iso.u_twist", u_t, &drinfeld_u(q)?.u, field);
            Ok(())
        });
    }
    rep
}
