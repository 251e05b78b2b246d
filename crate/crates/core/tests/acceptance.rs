//! One line per acceptance criterion. Run with
//! `cargo test --test acceptance`; exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use qhopf::cli::SHIPPED_CORPUS;
use qhopf::derived::{check_coopposite, check_f_compat, check_modification_laws, random_invertible};
use qhopf::dsl::{parse, run_corpus, Env, LineStatus};
use qhopf::quasitriangular::{check_drinfeld_props, check_u_tilde, check_u_under_modification};
use qhopf::ribbon::{
    check_main_theorem, check_opcop_table, check_ribbon_lemma, check_rtwist_relations, closed_form_ribbon, find_ribbon,
    Provenance, Strategy,
};
use qhopf::twisting::{check_twist_elements, check_u_twist_invariance, opcop_twist_iso, random_twist};
use qhopf::verify::{verify_quasi_bialgebra, verify_quasi_hopf, verify_quasitriangular, BIALGEBRA_CHECKS, HOPF_CHECKS, QT_CHECKS};
use qhopf::{CheckReport, Error, Field, Status};

type Outcome = Result<(), String>;

/// Fails with the first failing check, tagged by example.
fn clean(tag: &str, rep: &CheckReport) -> Outcome {
    match rep.failures().next() {
        None => Ok(()),
        Some(c) => Err(format!("{tag}: {} failed {:?}", c.name, c.witness)),
    }
}

/// Fails unless every named check is present and passed.
fn has_all(tag: &str, rep: &CheckReport, names: &[&str]) -> Outcome {
    for n in names {
        if rep.status(n) != Some(Status::Pass) {
            return Err(format!("{tag}: {n} is {:?}", rep.status(n)));
        }
    }
    clean(tag, rep)
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let t = start.elapsed();
    if t < limit {
        Ok(())
    } else {
        Err(format!("took {t:.1?}, limit {limit:?}"))
    }
}

fn axiom_suite() -> Outcome {
    let start = Instant::now();
    for (name, d) in hopf_examples() {
        let q = load(d);
        let mut rep = verify_quasi_bialgebra(&q);
        rep.extend(verify_quasi_hopf(&q));
        has_all(name, &rep, BIALGEBRA_CHECKS)?;
        has_all(name, &rep, HOPF_CHECKS)?;
    }
    within(start, Duration::from_secs(5))
}

fn qt_suite() -> Outcome {
    let start = Instant::now();
    for (name, d) in qt_examples() {
        let q = load(d);
        has_all(name, &verify_quasitriangular(&q), QT_CHECKS)?;
    }
    within(start, Duration::from_secs(30))
}

fn f_compat() -> Outcome {
    for (name, d) in all_examples() {
        let rep = check_f_compat(&load(d));
        has_all(name, &rep, &["F.gamma", "F.delta", "F.coproduct_antipode", "F.associator", "F.inverse"])?;
    }
    Ok(())
}

fn modification() -> Outcome {
    let q = load(double(2, true, f7()));
    for seed in 0..100 {
        let (x, _) = random_invertible(&q, seed).map_err(|e| e.to_string())?;
        let tag = format!("seed {seed}");
        has_all(&tag, &check_modification_laws(&q, &x), &["modification.gamma", "modification.delta", "modification.F"])?;
        has_all(&tag, &check_u_under_modification(&q, &x), &["u.modification"])?;
    }
    Ok(())
}

fn coopposite_f() -> Outcome {
    for (name, d) in all_examples() {
        has_all(name, &check_coopposite(&load(d)), &["cop.F"])?;
    }
    Ok(())
}

fn twists() -> Outcome {
    for (name, d, count) in [("H4", h4(), 100), ("D^w(Z3)", double(3, true, f7()), 20)] {
        let q = load(d);
        for seed in 0..count {
            let tw = random_twist(&q, seed).map_err(|e| format!("{name} seed {seed}: {e}"))?;
            let mut rep = check_twist_elements(&q, &tw);
            rep.extend(check_u_twist_invariance(&q, &tw));
            has_all(&format!("{name} seed {seed}"), &rep, &["twist.gamma", "twist.delta", "twist.F", "twist.u"])?;
        }
    }
    Ok(())
}

fn drinfeld() -> Outcome {
    for (name, d) in qt_examples() {
        let q = load(d);
        let mut rep = check_drinfeld_props(&q);
        rep.extend(check_rtwist_relations(&q));
        has_all(
            name,
            &rep,
            &["u.counit", "u.antipode_square", "u.coproduct", "rtwist.u_check", "rtwist.u_hat", "rtwist.alpha_check_u"],
        )?;
    }
    Ok(())
}

fn ribbon() -> Outcome {
    let start = Instant::now();
    let q = load(double(2, false, Field::prime(5).unwrap()));
    let found = find_ribbon(&q, 1_000_000, Strategy::Enumerate).map_err(|e| e.to_string())?;
    if !found.region.contains("625 points") {
        return Err(format!("searched {}", found.region));
    }
    let closed = closed_form_ribbon(&q).ok_or("no closed form on D(Z2)")?;
    if !found.candidates.iter().any(|c| c.v == closed && c.provenance == Provenance::ClosedForm) {
        return Err("closed form missing from the candidates".into());
    }
    let mut checked = vec![("D(Z2)/F5", &q, found.candidates)];
    let q3 = load(double(3, true, f7()));
    let found = find_ribbon(&q3, 1_000_000, Strategy::Blocks).map_err(|e| e.to_string())?;
    if found.candidates.is_empty() {
        return Err("no candidate on D^w(Z3)/F7".into());
    }
    checked.push(("D^w(Z3)/F7", &q3, found.candidates));
    for (name, q, cands) in checked {
        for c in &cands {
            let mut rep = check_main_theorem(q, &c.v);
            rep.extend(check_ribbon_lemma(q, &c.v));
            has_all(name, &rep, &["ribbon.theorem", "ribbon.lemma_alpha", "ribbon.lemma_beta"])?;
        }
    }
    within(start, Duration::from_secs(60))
}

fn op_cop() -> Outcome {
    for (name, d) in qt_examples() {
        let q = load(d);
        has_all(name, &check_u_tilde(&q), &["u_tilde.opcop", "u_tilde.antipode"])?;
        let table = ["alpha_hat", "beta_hat", "alpha_check", "beta_check", "u_hat", "u_check"].map(|s| format!("opcop_table.{s}"));
        has_all(name, &check_opcop_table(&q), &table.each_ref().map(String::as_str))?;
        has_all(name, &opcop_twist_iso(&q), &["iso.twist_normalized", "iso.alpha", "iso.beta", "iso.u_tilde"])?;
    }
    Ok(())
}

fn oracle() -> Outcome {
    for (name, d) in all_examples() {
        if d.dim() > 9 {
            return Err(format!("{name} has dim {}", d.dim()));
        }
        oracle_agrees(&d, 11, 24).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}

fn mutations() -> Outcome {
    for (name, d) in all_examples() {
        let missed = undetected(&d, 50);
        if !missed.is_empty() {
            return Err(format!("{name}: undetected {missed:?}"));
        }
    }
    Ok(())
}

fn corpus() -> Outcome {
    for (k, raw) in SHIPPED_CORPUS.lines().enumerate() {
        let src = raw.trim();
        if src.is_empty() || src.starts_with('#') {
            continue;
        }
        let stmt = parse(src).map_err(|e| format!("line {}: {e}", k + 1))?;
        if parse(&stmt.to_string()).map_err(|e| e.to_string())? != stmt {
            return Err(format!("line {} does not round-trip", k + 1));
        }
    }
    let allowed = [Error::MissingR.to_string(), Error::MissingV.to_string()];
    for (name, d) in all_examples() {
        let q = load(d);
        let tw = random_twist(&q, 3).map_err(|e| e.to_string())?;
        let (x, _) = random_invertible(&q, 3).map_err(|e| e.to_string())?;
        let env = Env::new(&q).with_twist(tw).with_modifier(x).map_err(|e| e.to_string())?;
        for l in run_corpus(&env, SHIPPED_CORPUS, 4).map_err(|e| e.to_string())? {
            match l.status {
                LineStatus::Pass => {}
                LineStatus::Skipped(why) if allowed.contains(&why) => {}
                other => return Err(format!("{name} line {}: {other:?}", l.line)),
            }
        }
    }
    Ok(())
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        ("axiom suite", axiom_suite),
        ("quasitriangular suite", qt_suite),
        ("F compatibility", f_compat),
        ("antipode modification", modification),
        ("F of the coopposite", coopposite_f),
        ("twisting", twists),
        ("Drinfeld element", drinfeld),
        ("ribbon search", ribbon),
        ("op-cop and u = S(u~)", op_cop),
        ("dense oracle", oracle),
        ("mutation sensitivity", mutations),
        ("identity corpus", corpus),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let t = start.elapsed();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({t:.2?})", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({t:.2?}): {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
