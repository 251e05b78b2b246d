//! Shared fixtures for the integration tests: the shipped examples, a seeded
//! single-coefficient mutator, and the dense oracle.
#![allow(dead_code)]

pub mod oracle;

use qhopf::builders::{cocycle_zn, dpr_double, function_algebra, group_algebra, sweedler, Cocycle3, FiniteAbelianGroup};
use qhopf::rng::SplitMix64;
use qhopf::tensor::{LinearMap, SparseTensor};
use qhopf::{verify, Field, Level, QuasiHopf, QuasiHopfDatum, Scalar};

pub fn f7() -> Field {
    Field::prime(7).unwrap()
}

pub fn k_z2() -> QuasiHopfDatum {
    group_algebra(&FiniteAbelianGroup::cyclic(2).unwrap().to_group(), f7()).unwrap()
}

pub fn f_z(n: u64) -> QuasiHopfDatum {
    function_algebra(&cocycle_zn(n, 1, f7()).unwrap()).unwrap()
}

pub fn h4() -> QuasiHopfDatum {
    sweedler().unwrap()
}

/// `D(Zn)` (`twisted = false`) or `D^ω(Zn)` with `q = 1`, over `field`.
pub fn double(n: u64, twisted: bool, field: Field) -> QuasiHopfDatum {
    let z = FiniteAbelianGroup::cyclic(n).unwrap();
    let omega = if twisted { cocycle_zn(n, 1, field).unwrap() } else { Cocycle3::trivial(z, field) };
    dpr_double(&omega).unwrap()
}

/// The four data without R-matrix requirements of the axiom suite.
pub fn hopf_examples() -> Vec<(&'static str, QuasiHopfDatum)> {
    vec![("K[Z2]", k_z2()), ("F(Z2)_w", f_z(2)), ("F(Z3)_w", f_z(3)), ("H4", h4())]
}

/// The quasitriangular examples.
pub fn qt_examples() -> Vec<(&'static str, QuasiHopfDatum)> {
    vec![
        ("H4", h4()),
        ("D(Z2)", double(2, false, f7())),
        ("D^w(Z2)", double(2, true, f7())),
        ("D(Z3)", double(3, false, f7())),
        ("D^w(Z3)", double(3, true, f7())),
    ]
}

/// Every shipped example once.
pub fn all_examples() -> Vec<(&'static str, QuasiHopfDatum)> {
    let mut v = hopf_examples();
    v.extend(qt_examples().into_iter().filter(|(n, _)| *n != "H4"));
    v
}

pub fn load(d: QuasiHopfDatum) -> QuasiHopf {
    QuasiHopf::new(d).unwrap()
}

fn nudge(t: &SparseTensor, pick: u64, by: &Scalar) -> SparseTensor {
    let mut entries: Vec<(Vec<usize>, Scalar)> = t.iter().map(|(i, c)| (i, c.clone())).collect();
    let k = pick as usize % entries.len();
    let old = entries[k].1.clone();
    let mut new = &old + by;
    // a sign flip can land on another cocycle or bicharacter, i.e. on a
    // valid datum; step once more instead
    if new == -&old {
        new = &new + by;
    }
    entries[k].1 = new;
    SparseTensor::from_entries(t.dim(), t.arity(), entries).unwrap()
}

/// Adds a random nonzero scalar to one nonzero coefficient of Φ, R, S, α or
/// β, chosen by `seed`, skipping results that merely flip its sign. Returns the component name and the mutated datum.
pub fn mutate(d: &QuasiHopfDatum, seed: u64) -> (&'static str, QuasiHopfDatum) {
    let mut rng = SplitMix64::new(seed);
    let field = d.algebra.field();
    let mut parts = vec!["Phi", "S", "alpha", "beta"];
    if d.r.is_some() {
        parts.push("R");
    }
    let part = parts[rng.below(parts.len() as u64) as usize];
    let by = rng.nonzero_scalar(field);
    let pick = rng.next_u64();
    let mut m = d.clone();
    match part {
        "Phi" => m.phi = nudge(&d.phi, pick, &by),
        "alpha" => m.alpha = nudge(&d.alpha, pick, &by),
        "beta" => m.beta = nudge(&d.beta, pick, &by),
        "R" => m.r = Some(nudge(d.r.as_ref().unwrap(), pick, &by)),
        "S" => {
            let n = d.dim();
            let mut images: Vec<SparseTensor> = (0..n).map(|i| d.antipode.image(i)).collect();
            let nonzero: Vec<usize> = (0..n).filter(|&i| !images[i].is_zero()).collect();
            let i = nonzero[pick as usize % nonzero.len()];
            images[i] = nudge(&images[i], pick / n as u64, &by);
            m.antipode = LinearMap::from_images(n, 1, &images).unwrap();
        }
        _ => unreachable!(),
    }
    (part, m)
}

/// A sparse random tensor with at most `nnz` entries.
/// Seeds `0..count` of `mutate` on `d` that the verifier does not catch at
/// the highest layer `d` has.
pub fn undetected(d: &QuasiHopfDatum, count: u64) -> Vec<(u64, &'static str)> {
    let level = Level::highest(&QuasiHopf::new(d.clone()).unwrap());
    (0..count)
        .filter_map(|seed| {
            let (part, m) = mutate(d, seed);
            let caught = match QuasiHopf::new(m) {
                Ok(q) => !verify(&q, level).passed(),
                Err(_) => true,
            };
            (!caught).then_some((seed, part))
        })
        .collect()
}

pub fn random_tensor(rng: &mut SplitMix64, field: Field, n: usize, arity: usize, nnz: usize) -> SparseTensor {
    let entries = (0..nnz).map(|_| {
        let idx: Vec<usize> = (0..arity).map(|_| rng.below(n as u64) as usize).collect();
        (idx, rng.scalar(field))
    });
    SparseTensor::from_entries(n, arity, entries.collect::<Vec<_>>()).unwrap()
}

/// Compares the sparse engine with the dense oracle on random products and
/// leg maps and on `γ, δ, F, F⁻¹, u`. Returns the first disagreement.
pub fn oracle_agrees(d: &QuasiHopfDatum, seed: u64, rounds: usize) -> Result<(), String> {
    use oracle::{Dense, Leg};
    use qhopf::derived::big_f;
    use qhopf::quasitriangular::drinfeld_u;
    use qhopf::tensor::LegMap;

    let q = QuasiHopf::new(d.clone()).map_err(|e| e.to_string())?;
    let dense = Dense::new(d, q.phi_inv().map_err(|e| e.to_string())?);
    let (n, field) = (q.dim(), q.field());
    let mut rng = SplitMix64::new(seed);
    for round in 0..rounds {
        let arity = 1 + round % 3;
        let a = random_tensor(&mut rng, field, n, arity, 6);
        let b = random_tensor(&mut rng, field, n, arity, 6);
        let got = dense.import(&q.mult(&a, &b).map_err(|e| e.to_string())?);
        if got != dense.mult(&dense.import(&a), &dense.import(&b)) {
            return Err(format!("mult disagrees in round {round}"));
        }
        let legs: Vec<(Leg, LegMap)> = (0..arity)
            .map(|_| match rng.below(5) {
                0 => (Leg::Id, LegMap::Identity),
                1 => (Leg::S, LegMap::Antipode),
                2 => (Leg::Eps, LegMap::Counit),
                3 => (Leg::D, LegMap::Coproduct),
                _ => (Leg::Dcop, LegMap::CoproductCop),
            })
            .collect();
        let (dl, sl): (Vec<Leg>, Vec<LegMap>) = legs.into_iter().unzip();
        let got = dense.import(&q.apply_legs(&a, &sl).map_err(|e| e.to_string())?);
        if got != dense.apply_legs(&dense.import(&a), &dl) {
            return Err(format!("apply_legs {dl:?} disagrees in round {round}"));
        }
    }
    let el = big_f(&q).map_err(|e| e.to_string())?;
    let gamma = dense.gamma();
    let delta = dense.delta();
    for (name, sparse, oracle) in [
        ("gamma", &el.gamma, &gamma),
        ("delta", &el.delta, &delta),
        ("F", &el.f, &dense.f(&gamma)),
        ("Finv", &el.f_inv, &dense.f_inv(&delta)),
    ] {
        if dense.import(sparse) != *oracle {
            return Err(format!("{name} disagrees"));
        }
    }
    if let Some(u) = dense.u() {
        let el = drinfeld_u(&q).map_err(|e| e.to_string())?;
        if dense.import(&el.u) != u {
            return Err("u disagrees".into());
        }
    }
    Ok(())
}
