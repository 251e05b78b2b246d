//! Builders for the standard examples: group algebras, function algebras
//! with a 3-cocycle associator, twisted Drinfel'd doubles of abelian groups,
//! and Sweedler's four-dimensional Hopf algebra.

use crate::datum::{Conventions, Meta, QuasiHopf, QuasiHopfDatum};
use crate::error::{Error, Result};
use crate::report::CheckReport;
use crate::scalar::{Field, Scalar};
use crate::tensor::{Algebra, LinearMap, SparseTensor, SparseVec};
use crate::verify::{self, Level};

/// `Z_{n₁} × … × Z_{n_r}`, elements indexed in mixed radix (first factor
/// most significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.contains(&0) {
            return Err(Error::Precondition("invariant factors must be positive".into()));
        }
        Ok(FiniteAbelianGroup { factors })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product::<u64>() as usize
    }

    pub fn element(&self, i: usize) -> Vec<u64> {
        let mut out = vec![0; self.factors.len()];
        let mut rem = i as u64;
        for (slot, n) in out.iter_mut().zip(&self.factors).rev() {
            *slot = rem % n;
            rem /= n;
        }
        out
    }

    pub fn index(&self, g: &[u64]) -> usize {
        g.iter().zip(&self.factors).fold(0u64, |acc, (a, n)| acc * n + a % n) as usize
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.element(a), self.element(b));
        let sum: Vec<u64> = x.iter().zip(&y).zip(&self.factors).map(|((a, b), n)| (a + b) % n).collect();
        self.index(&sum)
    }

    pub fn neg(&self, a: usize) -> usize {
        let x = self.element(a);
        let neg: Vec<u64> = x.iter().zip(&self.factors).map(|(a, n)| (n - a) % n).collect();
        self.index(&neg)
    }

    /// Parses `Z2`, `Z3`, `Z2xZ2`, ….
    pub fn parse(s: &str) -> Result<Self> {
        let factors = s
            .split(['x', '×'])
            .map(|part| {
                part.trim()
                    .strip_prefix('Z')
                    .and_then(|n| n.parse::<u64>().ok())
                    .ok_or_else(|| Error::Precondition(format!("cannot parse group {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    pub fn to_group(&self) -> FiniteGroup {
        let n = self.order();
        let table = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| self.add(a, b)).collect();
        FiniteGroup::from_table(n, table).expect("abelian group table is a group")
    }

    pub fn name(&self) -> String {
        self.factors.iter().map(|n| format!("Z{n}")).collect::<Vec<_>>().join("x")
    }
}

/// A finite group by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(order: usize, table: Vec<usize>) -> Result<Self> {
        if table.len() != order * order || table.iter().any(|g| *g >= order) {
            return Err(Error::Shape("group table has the wrong shape".into()));
        }
        let mul = |a: usize, b: usize| table[a * order + b];
        if (0..order).any(|g| mul(0, g) != g || mul(g, 0) != g) {
            return Err(Error::Precondition("element 0 is not the identity".into()));
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(Error::Precondition("group table is not associative".into()));
                    }
                }
            }
        }
        let inverse = (0..order)
            .map(|g| {
                (0..order)
                    .find(|h| mul(g, *h) == 0)
                    .ok_or_else(|| Error::Precondition(format!("element {g} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteGroup { order, table, inverse })
    }

    /// The symmetric group on `n` letters, permutations in lexicographic
    /// order (so the identity comes first).
    pub fn symmetric(n: usize) -> Self {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out.sort();
            out
        }
        let all = perms(n);
        let pos = |p: &Vec<usize>| all.iter().position(|q| q == p).expect("closed");
        let table = all
            .iter()
            .flat_map(|a| all.iter().map(move |b| (a, b)))
            .map(|(a, b)| pos(&(0..n).map(|i| a[b[i]]).collect()))
            .collect();
        FiniteGroup::from_table(all.len(), table).expect("symmetric group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }
}

/// A normalized 3-cocycle `ω: G³ → K^×` on a finite abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle3 {
    group: FiniteAbelianGroup,
    values: Vec<Scalar>,
    trivial: bool,
}

impl Cocycle3 {
    /// Validates normalization and the cocycle identity
    /// `ω(h,k,l) ω(g,hk,l) ω(g,h,k) = ω(gh,k,l) ω(g,h,kl)`.
    pub fn new(group: FiniteAbelianGroup, values: Vec<Scalar>) -> Result<Self> {
        let n = group.order();
        if values.len() != n * n * n {
            return Err(Error::Shape(format!("cocycle needs {} values", n * n * n)));
        }
        if values.iter().any(Scalar::is_zero) {
            return Err(Error::Precondition("cocycle values must be nonzero".into()));
        }
        let w = |a: usize, b: usize, c: usize| &values[(a * n + b) * n + c];
        for a in 0..n {
            for b in 0..n {
                if !w(0, a, b).is_one() || !w(a, 0, b).is_one() || !w(a, b, 0).is_one() {
                    return Err(Error::Precondition("cocycle is not normalized".into()));
                }
            }
        }
        let add = |a, b| group.add(a, b);
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let left = &(w(h, k, l) * w(g, add(h, k), l)) * w(g, h, k);
                        let right = w(add(g, h), k, l) * w(g, h, add(k, l));
                        if left != right {
                            return Err(Error::Precondition(format!(
                                "cocycle identity fails at ({g},{h},{k},{l})"
                            )));
                        }
                    }
                }
            }
        }
        let trivial = values.iter().all(Scalar::is_one);
        Ok(Cocycle3 { group, values, trivial })
    }

    pub fn trivial(group: FiniteAbelianGroup, field: Field) -> Self {
        let n = group.order();
        Cocycle3 {
            group,
            values: vec![field.one(); n * n * n],
            trivial: true,
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn field(&self) -> Field {
        self.values[0].field()
    }

    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    pub fn value(&self, a: usize, b: usize, c: usize) -> &Scalar {
        let n = self.group.order();
        &self.values[(a * n + b) * n + c]
    }

    /// The pointwise inverse cocycle.
    pub fn inverse(&self) -> Cocycle3 {
        Cocycle3 {
            group: self.group.clone(),
            values: self.values.iter().map(|c| c.inv().expect("nonzero")).collect(),
            trivial: self.trivial,
        }
    }
}

/// `ω(a,b,c) = ζₙ^{q·a·⌊(b+c)/n⌋}` on `Z_n`.
pub fn cocycle_zn(n: u64, q: u64, field: Field) -> Result<Cocycle3> {
    cocycle_abelian(&FiniteAbelianGroup::cyclic(n)?, &[q], field)
}

/// Product of the cyclic cocycles `ω_{qᵢ}` pulled back along the factors.
pub fn cocycle_abelian(group: &FiniteAbelianGroup, qs: &[u64], field: Field) -> Result<Cocycle3> {
    if qs.len() != group.factors().len() {
        return Err(Error::Precondition("one exponent per invariant factor".into()));
    }
    let roots = group
        .factors()
        .iter()
        .zip(qs)
        .map(|(n, q)| {
            if q % n == 0 {
                Ok(field.one())
            } else if *q >= *n {
                Err(Error::Precondition(format!("exponent {q} must be below {n}")))
            } else {
                field.root_of_unity(*n)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let m = group.order();
    let mut values = Vec::with_capacity(m * m * m);
    for a in 0..m {
        let ea = group.element(a);
        for b in 0..m {
            let eb = group.element(b);
            for c in 0..m {
                let ec = group.element(c);
                let mut v = field.one();
                for (i, n) in group.factors().iter().enumerate() {
                    let e = qs[i] * ea[i] * ((eb[i] + ec[i]) / n);
                    v = &v * &roots[i].pow(e);
                }
                values.push(v);
            }
        }
    }
    Cocycle3::new(group.clone(), values)
}

fn basis(n: usize, i: usize, field: Field) -> SparseTensor {
    SparseTensor::basis(n, i, field)
}

fn map_from(n: usize, arity: usize, images: Vec<Vec<(Vec<usize>, Scalar)>>) -> Result<LinearMap> {
    let ts = images
        .into_iter()
        .map(|e| SparseTensor::from_entries(n, arity, e))
        .collect::<Result<Vec<_>>>()?;
    LinearMap::from_images(n, arity, &ts)
}

/// `K[G]` with `Δ(g) = g⊗g`, `S(g) = g⁻¹`, trivial associator, `R = 1⊗1`
/// and ribbon candidate `v = 1`.
pub fn group_algebra(g: &FiniteGroup, field: Field) -> Result<QuasiHopfDatum> {
    let n = g.order();
    let table = (0..n * n).map(|ij| vec![(g.mul(ij / n, ij % n), field.one())]).collect();
    let algebra = Algebra::new(field, n, table, vec![(0, field.one())])?;
    let delta = map_from(n, 2, (0..n).map(|i| vec![(vec![i, i], field.one())]).collect())?;
    let antipode = map_from(n, 1, (0..n).map(|i| vec![(vec![g.inv(i)], field.one())]).collect())?;
    let one = basis(n, 0, field);
    Ok(QuasiHopfDatum {
        algebra,
        delta,
        epsilon: vec![field.one(); n],
        phi: SparseTensor::from_entries(n, 3, [(vec![0, 0, 0], field.one())])?,
        antipode,
        alpha: one.clone(),
        beta: one.clone(),
        r: Some(SparseTensor::from_entries(n, 2, [(vec![0, 0], field.one())])?),
        v: Some(one),
        meta: Meta {
            name: Some(format!("K[G] (order {n})")),
            ..Meta::default()
        },
    })
}

/// `K^G` with associator `Φ = Σ ω(g,h,k)⁻¹ δ_g⊗δ_h⊗δ_k`, `α = 1` and
/// `β = Σ ω(g,g⁻¹,g) δ_g`.
pub fn function_algebra(omega: &Cocycle3) -> Result<QuasiHopfDatum> {
    let grp = omega.group();
    let field = omega.field();
    let n = grp.order();
    let mut table = vec![Vec::new(); n * n];
    for g in 0..n {
        table[g * n + g] = vec![(g, field.one())];
    }
    let unit: SparseVec = (0..n).map(|g| (g, field.one())).collect();
    let algebra = Algebra::new(field, n, table, unit.clone())?;
    let delta = map_from(
        n,
        2,
        (0..n)
            .map(|g| (0..n).map(|h| (vec![h, grp.add(g, grp.neg(h))], field.one())).collect())
            .collect(),
    )?;
    let epsilon = (0..n).map(|g| if g == 0 { field.one() } else { field.zero() }).collect();
    let mut phi = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                phi.push((vec![a, b, c], omega.value(a, b, c).inv()?));
            }
        }
    }
    let antipode = map_from(n, 1, (0..n).map(|g| vec![(vec![grp.neg(g)], field.one())]).collect())?;
    let beta: SparseVec = (0..n).map(|g| (g, omega.value(g, grp.neg(g), g).clone())).collect();
    Ok(QuasiHopfDatum {
        algebra,
        delta,
        epsilon,
        phi: SparseTensor::from_entries(n, 3, phi)?,
        antipode,
        alpha: SparseTensor::from_vec(n, &unit),
        beta: SparseTensor::from_vec(n, &beta),
        r: None,
        v: None,
        meta: Meta {
            name: Some(format!("F({})", grp.name())),
            ..Meta::default()
        },
    })
}

/// The twisted double with explicit convention flags, without verification.
/// Basis index of `δ_g⊗x` is `g·|G| + x`.
pub fn dpr_double_with(omega: &Cocycle3, conventions: &Conventions) -> Result<QuasiHopfDatum> {
    let grp = omega.group();
    let field = omega.field();
    let m = grp.order();
    let n = m * m;
    let idx = |g: usize, x: usize| g * m + x;
    let w_phi = if conventions.invert_phi { omega.inverse() } else { omega.clone() };
    let w_th = if conventions.invert_theta { omega.inverse() } else { omega.clone() };
    let w = |a, b, c| w_th.value(a, b, c).clone();
    let theta = |g: usize, x: usize, y: usize| -> Result<Scalar> {
        (&w(g, x, y) * &w(x, y, g)).try_mul(&w(x, g, y).inv()?)
    };
    let gamma = |x: usize, h: usize, k: usize| -> Result<Scalar> {
        (&w(h, k, x) * &w(x, h, k)).try_mul(&w(h, x, k).inv()?)
    };
    let mut table = vec![Vec::new(); n * n];
    for g in 0..m {
        for x in 0..m {
            for y in 0..m {
                table[idx(g, x) * n + idx(g, y)] = vec![(idx(g, grp.add(x, y)), theta(g, x, y)?)];
            }
        }
    }
    let unit: SparseVec = (0..m).map(|g| (idx(g, 0), field.one())).collect();
    let algebra = Algebra::new(field, n, table, unit.clone())?;
    let mut delta_images = Vec::with_capacity(n);
    let mut s_images = Vec::with_capacity(n);
    for g in 0..m {
        for x in 0..m {
            let terms = (0..m)
                .map(|h| {
                    let k = grp.add(g, grp.neg(h));
                    Ok((vec![idx(h, x), idx(k, x)], gamma(x, h, k)?))
                })
                .collect::<Result<Vec<_>>>()?;
            delta_images.push(terms);
            let (gi, xi) = (grp.neg(g), grp.neg(x));
            let c = (&theta(gi, x, xi)? * &gamma(x, g, gi)?).inv()?;
            s_images.push(vec![(vec![idx(gi, xi)], c)]);
        }
    }
    let delta = map_from(n, 2, delta_images)?;
    let antipode = map_from(n, 1, s_images)?;
    let epsilon = (0..n).map(|i| if i / m == 0 { field.one() } else { field.zero() }).collect();
    let mut phi = Vec::with_capacity(m * m * m);
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                phi.push((vec![idx(a, 0), idx(b, 0), idx(c, 0)], w_phi.value(a, b, c).inv()?));
            }
        }
    }
    let beta: SparseVec = (0..m).map(|g| (idx(g, 0), w_phi.value(g, grp.neg(g), g).clone())).collect();
    let mut r = Vec::with_capacity(m * m);
    for g in 0..m {
        for h in 0..m {
            r.push((vec![idx(g, 0), idx(h, g)], field.one()));
        }
    }
    // v = Σ_g δ_g⊗g. Its inverse Σ_g δ_g⊗g⁻¹ fails Δ(v) = R′R(v⊗v) with
    // this R once G has elements of order > 2.
    let v = omega
        .is_trivial()
        .then(|| SparseTensor::from_vec(n, &(0..m).map(|g| (idx(g, g), field.one())).collect::<Vec<_>>()));
    let name = if omega.is_trivial() {
        format!("D({})", grp.name())
    } else {
        format!("D^w({})", grp.name())
    };
    Ok(QuasiHopfDatum {
        algebra,
        delta,
        epsilon,
        phi: SparseTensor::from_entries(n, 3, phi)?,
        antipode,
        alpha: SparseTensor::from_vec(n, &unit),
        beta: SparseTensor::from_vec(n, &beta),
        r: Some(SparseTensor::from_entries(n, 2, r)?),
        v,
        meta: Meta {
            name: Some(name),
            conventions: Some(conventions.clone()),
            blocks: Some((0..m).map(|g| (0..m).map(|x| idx(g, x)).collect()).collect()),
        },
    })
}

/// The four convention assignments in the order they are tried.
pub const CONVENTION_ORDER: [(bool, bool); 4] = [(false, false), (true, false), (false, true), (true, true)];

/// The twisted Drinfel'd double `D^ω(G)` of a finite abelian group, with
/// the first convention assignment under which the quasitriangular
/// verifier passes. The closed-form ribbon candidate is attached when `ω`
/// is trivial.
pub fn dpr_double(omega: &Cocycle3) -> Result<QuasiHopfDatum> {
    let mut last = CheckReport::new();
    for (invert_phi, invert_theta) in CONVENTION_ORDER {
        let conv = Conventions {
            invert_phi,
            invert_theta,
        };
        let d = dpr_double_with(omega, &conv)?;
        let q = QuasiHopf::new(d)?;
        let rep = verify::verify(&q, Level::Qt);
        if rep.passed() {
            return Ok(q.into_datum());
        }
        last = rep;
    }
    let first = last.failures().next().map(|c| c.name.clone()).unwrap_or_default();
    Err(Error::Precondition(format!(
        "no convention assignment makes the twisted double quasitriangular (last failure: {first})"
    )))
}

/// Sweedler's Hopf algebra over `Q` with basis `1, g, x, gx` and the
/// R-matrix `R₀ = ½(1⊗1 + 1⊗g + g⊗1 − g⊗g)`.
pub fn sweedler() -> Result<QuasiHopfDatum> {
    sweedler_with(&Field::Rational.zero())
}

/// Sweedler's algebra with `R_λ = R₀ + λ/2 (x⊗x + x⊗gx + gx⊗gx − gx⊗x)`.
pub fn sweedler_with(lambda: &Scalar) -> Result<QuasiHopfDatum> {
    let f = Field::Rational;
    let n = 4;
    // index a + 2b for g^a x^b
    let mut table = vec![Vec::new(); 16];
    for i in 0..4usize {
        for j in 0..4usize {
            let (a, b, c, d) = (i % 2, i / 2, j % 2, j / 2);
            if b + d > 1 {
                continue;
            }
            let sign = if b * c == 1 { -1 } else { 1 };
            table[i * 4 + j] = vec![((a + c) % 2 + 2 * (b + d), f.from_i64(sign))];
        }
    }
    let algebra = Algebra::new(f, n, table, vec![(0, f.one())])?;
    let (one, g, x, gx) = (0, 1, 2, 3);
    let c = |v: i64| f.from_i64(v);
    let delta = map_from(
        n,
        2,
        vec![
            vec![(vec![one, one], c(1))],
            vec![(vec![g, g], c(1))],
            vec![(vec![x, one], c(1)), (vec![g, x], c(1))],
            vec![(vec![gx, g], c(1)), (vec![one, gx], c(1))],
        ],
    )?;
    let antipode = map_from(
        n,
        1,
        vec![vec![(vec![one], c(1))], vec![(vec![g], c(1))], vec![(vec![gx], c(-1))], vec![(vec![x], c(1))]],
    )?;
    let half = f.ratio(1, 2)?;
    let l2 = lambda * &half;
    let mut r = vec![
        (vec![one, one], half.clone()),
        (vec![one, g], half.clone()),
        (vec![g, one], half.clone()),
        (vec![g, g], -&half),
    ];
    if !lambda.is_zero() {
        r.extend([
            (vec![x, x], l2.clone()),
            (vec![x, gx], l2.clone()),
            (vec![gx, gx], l2.clone()),
            (vec![gx, x], -&l2),
        ]);
    }
    let unit = basis(n, one, f);
    Ok(QuasiHopfDatum {
        algebra,
        delta,
        epsilon: vec![c(1), c(1), c(0), c(0)],
        phi: SparseTensor::from_entries(n, 3, [(vec![one, one, one], c(1))])?,
        antipode,
        alpha: unit.clone(),
        beta: unit,
        r: Some(SparseTensor::from_entries(n, 2, r)?),
        v: None,
        meta: Meta {
            name: Some("H4".into()),
            ..Meta::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> Field {
        Field::prime(7).unwrap()
    }

    #[test]
    fn z2_cocycle_values() {
        let w = cocycle_zn(2, 1, f7()).unwrap();
        assert_eq!(w.value(1, 1, 1), &f7().from_i64(6));
        assert_eq!(w.value(0, 1, 1), &f7().one());
        assert_eq!(w.value(1, 0, 1), &f7().one());
        assert!(cocycle_zn(2, 0, f7()).unwrap().is_trivial());
    }

    #[test]
    fn z3_cocycle_needs_cube_roots() {
        assert!(cocycle_zn(3, 1, f7()).is_ok());
        assert!(matches!(cocycle_zn(3, 1, Field::Rational), Err(Error::NoSuchRoot(3, _))));
        assert!(cocycle_zn(3, 0, Field::Rational).is_ok());
    }

    #[test]
    fn broken_cocycle_rejected() {
        let w = cocycle_zn(2, 1, f7()).unwrap();
        let mut values = w.values.clone();
        values[7] = f7().from_i64(3);
        assert!(Cocycle3::new(w.group.clone(), values).is_err());
    }

    #[test]
    fn group_parsing() {
        let g = FiniteAbelianGroup::parse("Z2xZ2").unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.add(1, 3), 2);
        assert!(FiniteAbelianGroup::parse("S3").is_err());
    }

    #[test]
    fn symmetric_group() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!((0..6).all(|g| s3.mul(g, s3.inv(g)) == 0));
        assert!((0..6).any(|a| (0..6).any(|b| s3.mul(a, b) != s3.mul(b, a))));
    }

    #[test]
    fn sweedler_relations() {
        let d = sweedler().unwrap();
        let a = &d.algebra;
        // x g = −g x
        assert_eq!(a.product(2, 1), &vec![(3, Field::Rational.from_i64(-1))]);
        assert!(a.product(2, 2).is_empty());
    }
}
