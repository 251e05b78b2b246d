//! The structures obtained by viewing `R` and `R′⁻¹` as twists, ribbon
//! elements, and a solver for them.

use serde::Serialize;

use crate::datum::QuasiHopf;
use crate::error::{Error, Result};
use crate::linalg::{self, SparseRow};
use crate::quasitriangular::drinfeld_u;
use crate::report::{CheckReport, Witness};
use crate::tensor::{LegMap, SparseTensor};

use LegMap::{Antipode as S, AntipodeInverse as Sinv, Identity as I};

pub const RIBBON_CHECKS: &[&str] = &[
    "ribbon.nonzero",
    "ribbon.central",
    "ribbon.coproduct",
    "ribbon.antipode",
    "ribbon.counit",
    "ribbon.invertible",
    "ribbon.lemma_alpha",
    "ribbon.lemma_beta",
    "ribbon.theorem",
    "ribbon.v_squared",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RTwistElements {
    pub alpha_hat: SparseTensor,
    pub beta_hat: SparseTensor,
    pub alpha_check: SparseTensor,
    pub beta_check: SparseTensor,
    pub u_hat: SparseTensor,
    pub u_hat_inv: SparseTensor,
    pub u_check: SparseTensor,
    pub u_check_inv: SparseTensor,
}

/// `Σ S(Zᵢ) a Yᵢ S⁻¹(β) S⁻¹(Xᵢ)` and `Σ S⁻¹(Zᵢ) S⁻¹(α) Yᵢ b S(Xᵢ)`.
fn u_pair(q: &QuasiHopf, a: &SparseTensor, b: &SparseTensor) -> Result<(SparseTensor, SparseTensor)> {
    let phi = q.apply_legs(q.phi(), &[Sinv, I, S])?;
    let u = q.contract(&[&phi, a, &q.s_inv(q.beta())?], &[&[2, 3, 1, 4, 0]])?;
    let phi = q.apply_legs(q.phi(), &[S, I, Sinv])?;
    let u_inv = q.contract(&[&phi, &q.s_inv(q.alpha())?, b], &[&[2, 3, 1, 4, 0]])?;
    Ok((u, u_inv))
}

fn compute(q: &QuasiHopf) -> Result<RTwistElements> {
    let r = q.r()?;
    let r_inv = q.r_inv()?;
    let rs = q.apply_legs(r, &[I, S])?; // s, S(t)
    let ris = q.apply_legs(r_inv, &[S, I])?; // S(s̄), t̄
    let (alpha, beta) = (q.alpha(), q.beta());
    let alpha_hat = q.contract(&[&ris, alpha], &[&[0, 2, 1]])?;
    let beta_hat = q.contract(&[&rs, beta], &[&[0, 2, 1]])?;
    let alpha_check = q.contract(&[&rs, alpha], &[&[1, 2, 0]])?;
    let beta_check = q.contract(&[&ris, beta], &[&[1, 2, 0]])?;
    let (u_hat, u_hat_inv) = u_pair(q, &alpha_hat, &beta_hat)?;
    let (u_check, u_check_inv) = u_pair(q, &alpha_check, &beta_check)?;
    let one = q.one(1);
    let s_a = q.s_inv(alpha)?;
    let s_b = q.s_inv(beta)?;
    for (tag, u, ui, a, b) in [
        ("û", &u_hat, &u_hat_inv, &alpha_hat, &beta_hat),
        ("ǔ", &u_check, &u_check_inv, &alpha_check, &beta_check),
    ] {
        let fail = |what: &str| Error::InternalInconsistency(format!("{tag}: {what}"));
        if q.mult(u, ui)? != one || q.mult(ui, u)? != one {
            return Err(fail("inverse formula is not an inverse"));
        }
        for i in 0..q.dim() {
            let e = q.basis(i);
            if q.s(&e)? != q.prod(&[u, &q.s_inv(&e)?, ui])? {
                return Err(fail(&format!("S(a) ≠ u S⁻¹(a) u⁻¹ for basis element {i}")));
            }
        }
        if *a != q.mult(u, &s_a)? {
            return Err(fail("evaluation element ≠ u S⁻¹(α)"));
        }
        if *b != q.mult(&s_b, ui)? {
            return Err(fail("coevaluation element ≠ S⁻¹(β) u⁻¹"));
        }
    }
    Ok(RTwistElements {
        alpha_hat,
        beta_hat,
        alpha_check,
        beta_check,
        u_hat,
        u_hat_inv,
        u_check,
        u_check_inv,
    })
}

/// All eight elements, cached on `q`; their displayed relations are
/// verified before returning.
pub fn rtwist_elements(q: &QuasiHopf) -> Result<&RTwistElements> {
    q.rtwist.get_or_init(|| compute(q)).as_ref().map_err(Clone::clone)
}

pub fn check_rtwist_relations(q: &QuasiHopf) -> CheckReport {
    let mut rep = CheckReport::new();
    let field = q.field();
    let el = match rtwist_elements(q) {
        Ok(el) => el,
        Err(e) => {
            rep.fail("rtwist.construction", Witness::note(e.to_string()));
            return rep;
        }
    };
    rep.pass("rtwist.construction");
    rep.guarded("rtwist.relations", |r| {
        let (alpha, beta) = (q.alpha(), q.beta());
        r.equal("rtwist.alpha_check", &q.s_inv(&el.alpha_check)?, &q.mult(&el.u_hat_inv, alpha)?, field);
        r.equal("rtwist.alpha_hat", &q.s_inv(&el.alpha_hat)?, &q.mult(&el.u_check_inv, alpha)?, field);
        r.equal("rtwist.beta_check", &q.s_inv(&el.beta_check)?, &q.mult(beta, &el.u_hat)?, field);
        r.equal("rtwist.beta_hat", &q.s_inv(&el.beta_hat)?, &q.mult(beta, &el.u_check)?, field);
        let u = &drinfeld_u(q)?.u;
        r.equal("rtwist.u_check", u, &el.u_check, field);
        r.equal("rtwist.u_hat", u, &q.s(&el.u_hat_inv)?, field);
        r.equal("rtwist.alpha_check_u", &el.alpha_check, &q.mult(&q.s(alpha)?, u)?, field);
        r.equal("rtwist.central", &q.mult(&el.u_hat, &q.s_inv(&el.u_check)?)?, &q.one(1), field);
        Ok(())
    });
    rep
}

/// The six elements formed in `A^opcop` against their partners in `A`:
/// `α̂, β̂, ǎ, β̌, û, ǔ` there are `β̌, ǎ, β̂, α̂, ǔ⁻¹, û⁻¹` here.
pub fn check_opcop_table(q: &QuasiHopf) -> CheckReport {
    let mut rep = CheckReport::new();
    let field = q.field();
    rep.guarded("opcop_table", |r| {
        let oc = crate::derived::op_cop(q)?;
        let (a, b) = (rtwist_elements(q)?, rtwist_elements(&oc)?);
        r.equal("opcop_table.alpha_hat", &b.alpha_hat, &a.beta_check, field);
        r.equal("opcop_table.beta_hat", &b.beta_hat, &a.alpha_check, field);
        r.equal("opcop_table.alpha_check", &b.alpha_check, &a.beta_hat, field);
        r.equal("opcop_table.beta_check", &b.beta_check, &a.alpha_hat, field);
        r.equal("opcop_table.u_hat", &b.u_hat, &a.u_check_inv, field);
        r.equal("opcop_table.u_check", &b.u_check, &a.u_hat_inv, field);
        Ok(())
    });
    rep
}

/// The defining properties of a ribbon element and their consequences
/// `ε(v) = 1` and invertibility.
pub fn is_ribbon(q: &QuasiHopf, v: &SparseTensor) -> CheckReport {
    let mut rep = CheckReport::new();
    let field = q.field();
    rep.bool("ribbon.nonzero", !v.is_zero(), || Witness::note("v = 0"));
    rep.for_basis("ribbon.central", q.dim(), field, |i| {
        let a = q.basis(i);
        Ok((q.mult(v, &a)?, q.mult(&a, v)?))
    });
    rep.guarded("ribbon.coproduct", |r| {
        let rr = q.r()?;
        let right = q.prod(&[&q.flip(rr)?, rr, &v.tensor(v)?])?;
        r.equal("ribbon.coproduct", &q.delta(v)?, &right, field);
        Ok(())
    });
    rep.guarded("ribbon.antipode", |r| {
        r.equal("ribbon.antipode", &q.s(v)?, v, field);
        Ok(())
    });
    rep.guarded("ribbon.counit", |r| {
        r.equal_scalars("ribbon.counit", &q.eps(v)?, &field.one());
        Ok(())
    });
    let defining_ok = rep.passed();
    match q.invert(v) {
        Ok(_) => rep.pass("ribbon.invertible"),
        Err(_) if defining_ok => rep.fail(
            "ribbon.invertible",
            Witness::note(Error::InternalInconsistency("a ribbon element is not invertible".into()).to_string()),
        ),
        Err(e) => rep.fail("ribbon.invertible", Witness::note(e.to_string())),
    }
    rep
}

/// `v² ǎ = α̂` and `v² β̂ = β̌`.
pub fn check_ribbon_lemma(q: &QuasiHopf, v: &SparseTensor) -> CheckReport {
    let mut rep = CheckReport::new();
    let field = q.field();
    rep.guarded("ribbon.lemma", |r| {
        let el = rtwist_elements(q)?;
        let v2 = q.mult(v, v)?;
        r.equal("ribbon.lemma_alpha", &q.mult(&v2, &el.alpha_check)?, &el.alpha_hat, field);
        r.equal("ribbon.lemma_beta", &q.mult(&v2, &el.beta_hat)?, &el.beta_check, field);
        Ok(())
    });
    rep
}

/// `v⁻² = u S(u)` and the intermediate `v² = û ǔ⁻¹`.
pub fn check_main_theorem(q: &QuasiHopf, v: &SparseTensor) -> CheckReport {
    let mut rep = CheckReport::new();
    let field = q.field();
    rep.guarded("ribbon.theorem", |r| {
        let v_inv = q.invert(v)?;
        let u = &drinfeld_u(q)?.u;
        let el = rtwist_elements(q)?;
        r.equal("ribbon.theorem", &q.mult(&v_inv, &v_inv)?, &q.mult(u, &q.s(u)?)?, field);
        r.equal("ribbon.v_squared", &q.mult(v, v)?, &q.mult(&el.u_hat, &el.u_check_inv)?, field);
        Ok(())
    });
    rep
}

/// Basis of the center, from the null space of `z ↦ (z eᵢ − eᵢ z)ᵢ`.
pub fn center(q: &QuasiHopf) -> Vec<SparseTensor> {
    let alg = q.algebra();
    let n = q.dim();
    let field = q.field();
    let mut rows: Vec<SparseRow> = Vec::new();
    for i in 0..n {
        let mut per_m: Vec<SparseRow> = vec![SparseRow::new(); n];
        for k in 0..n {
            for (m, c) in alg.product(k, i) {
                per_m[*m].entry(k).or_insert_with(|| field.zero()).add_assign_ref(c);
            }
            for (m, c) in alg.product(i, k) {
                per_m[*m].entry(k).or_insert_with(|| field.zero()).add_assign_ref(&-c);
            }
        }
        rows.extend(per_m.into_iter().filter(|r| r.values().any(|c| !c.is_zero())));
    }
    linalg::null_space(field, rows, n)
        .into_iter()
        .map(|x| {
            let v: Vec<(usize, _)> = x.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
            SparseTensor::from_vec(n, &v)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    User,
    ClosedForm,
    Solver,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonCandidate {
    pub v: SparseTensor,
    pub provenance: Provenance,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Blocks when the datum declares them, otherwise enumeration.
    #[default]
    Auto,
    Blocks,
    Enumerate,
}

#[derive(Clone, Debug)]
pub struct RibbonSearch {
    pub candidates: Vec<RibbonCandidate>,
    /// Description of the region that was searched exhaustively.
    pub region: String,
}

/// All elements `w` of `span{e_b : b ∈ block}` with `w² = target`, by brute
/// force over the block's coordinates.
fn block_roots(q: &QuasiHopf, block: &[usize], target: &SparseTensor, p: u64) -> Result<Vec<SparseTensor>> {
    let field = q.field();
    let n = q.dim();
    let mut out = Vec::new();
    let mut coords = vec![0u64; block.len()];
    loop {
        let v: Vec<(usize, _)> = block
            .iter()
            .zip(&coords)
            .filter(|(_, c)| **c != 0)
            .map(|(b, c)| (*b, field.element(*c)))
            .collect();
        let w = SparseTensor::from_vec(n, &v);
        if q.mult(&w, &w)? == *target {
            out.push(w);
        }
        let mut k = 0;
        loop {
            if k == coords.len() {
                return Ok(out);
            }
            coords[k] += 1;
            if coords[k] < p {
                break;
            }
            coords[k] = 0;
            k += 1;
        }
    }
}

fn restrict(t: &SparseTensor, block: &[usize]) -> SparseTensor {
    let v: Vec<(usize, _)> = t.to_vec().into_iter().filter(|(i, _)| block.contains(i)).collect();
    SparseTensor::from_vec(t.dim(), &v)
}

/// `Σ_g δ_g⊗g` when `q` is laid out as an untwisted double (convention
/// metadata, one block per `g`, trivial associator).
pub fn closed_form_ribbon(q: &QuasiHopf) -> Option<SparseTensor> {
    let meta = &q.datum().meta;
    meta.conventions.as_ref()?;
    let blocks = meta.blocks.as_ref()?;
    if *q.phi() != q.one(3) || blocks.iter().any(|b| b.len() != blocks.len()) {
        return None;
    }
    let one = q.field().one();
    let v: Vec<_> = blocks.iter().enumerate().map(|(g, b)| (b[g], one.clone())).collect();
    Some(SparseTensor::from_vec(q.dim(), &v))
}

/// Searches ribbon elements among the central square roots of
/// `(u S(u))⁻¹`, a necessary condition by the main theorem. Every returned
/// candidate has passed [`is_ribbon`].
pub fn find_ribbon(q: &QuasiHopf, budget: u64, strategy: Strategy) -> Result<RibbonSearch> {
    let field = q.field();
    let u = &drinfeld_u(q)?.u;
    let c = q.invert(&q.mult(u, &q.s(u)?)?)?;
    let blocks = q.datum().meta.blocks.clone();
    let use_blocks = match strategy {
        Strategy::Auto => blocks.is_some(),
        Strategy::Blocks => {
            if blocks.is_none() {
                return Err(Error::Precondition("the datum declares no block structure".into()));
            }
            true
        }
        Strategy::Enumerate => false,
    };
    let p = field.order();
    let mut candidates = Vec::new();
    let closed = closed_form_ribbon(q);
    let accept = |v: SparseTensor, cands: &mut Vec<RibbonCandidate>| {
        if is_ribbon(q, &v).passed() {
            let provenance = if closed.as_ref() == Some(&v) {
                Provenance::ClosedForm
            } else if q.datum().v.as_ref() == Some(&v) {
                Provenance::User
            } else {
                Provenance::Solver
            };
            cands.push(RibbonCandidate { v, provenance });
        }
    };
    if use_blocks {
        let blocks = blocks.expect("checked above");
        let p = p.ok_or_else(|| Error::Precondition("blockwise square roots need a finite field".into()))?;
        let mut per_block = Vec::with_capacity(blocks.len());
        for b in &blocks {
            let size = p.checked_pow(b.len() as u32).unwrap_or(u64::MAX);
            if size > budget {
                return Err(Error::BudgetExceeded {
                    required: size.to_string(),
                    budget,
                });
            }
            per_block.push(block_roots(q, b, &restrict(&c, b), p)?);
        }
        let combos = per_block.iter().try_fold(1u64, |acc, r| acc.checked_mul(r.len() as u64));
        match combos {
            Some(k) if k <= budget => {}
            other => {
                return Err(Error::BudgetExceeded {
                    required: other.map_or("overflow".into(), |k| k.to_string()),
                    budget,
                })
            }
        }
        if per_block.iter().all(|r| !r.is_empty()) {
            let mut idx = vec![0usize; per_block.len()];
            'outer: loop {
                let mut v = SparseTensor::zero(q.dim(), 1);
                for (k, roots) in per_block.iter().enumerate() {
                    v = v.add(&roots[idx[k]])?;
                }
                accept(v, &mut candidates);
                let mut k = 0;
                loop {
                    if k == idx.len() {
                        break 'outer;
                    }
                    idx[k] += 1;
                    if idx[k] < per_block[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
            }
        }
        let region = format!(
            "all square roots of (u S(u))^-1 in {} blocks of sizes {:?} over {}",
            blocks.len(),
            blocks.iter().map(Vec::len).collect::<Vec<_>>(),
            field
        );
        return Ok(RibbonSearch { candidates, region });
    }
    let z = center(q);
    let m = z.len();
    let size = p.and_then(|p| p.checked_pow(m as u32));
    let size = match size {
        Some(s) if s <= budget => s,
        other => {
            return Err(Error::BudgetExceeded {
                required: match (p, other) {
                    (None, _) => "infinitely many".into(),
                    (Some(_), Some(s)) => s.to_string(),
                    (Some(p), None) => format!("{p}^{m}"),
                },
                budget,
            })
        }
    };
    let p = p.expect("finite field");
    let mut coords = vec![0u64; m];
    for _ in 0..size {
        let mut v = SparseTensor::zero(q.dim(), 1);
        for (zk, ck) in z.iter().zip(&coords) {
            if *ck != 0 {
                v = v.add(&zk.scale(&field.element(*ck)))?;
            }
        }
        if q.mult(&v, &v)? == c {
            accept(v, &mut candidates);
        }
        for slot in coords.iter_mut() {
            *slot += 1;
            if *slot < p {
                break;
            }
            *slot = 0;
        }
    }
    Ok(RibbonSearch {
        candidates,
        region: format!("all {size} points of the {m}-dimensional center over {field}"),
    })
}
