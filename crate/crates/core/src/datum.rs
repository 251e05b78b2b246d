//! The layered quasi-Hopf datum, its JSON document format, and [`QuasiHopf`],
//! a validated datum with lazily computed inverses and derived elements.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::derived::DerivedElements;
use crate::error::{Error, Result};
use crate::quasitriangular::DrinfeldElements;
use crate::ribbon::RTwistElements;
use crate::scalar::{Field, Scalar};
use crate::tensor::{self, Algebra, LegMap, LinearMap, SparseTensor, TensorJson};

/// Convention flags of a twisted-double builder, recorded so a datum says
/// which sign/inversion choice made the verifiers pass.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub invert_phi: bool,
    pub invert_theta: bool,
}

/// Optional descriptive metadata carried alongside the algebraic data.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conventions: Option<Conventions>,
    /// Basis index sets of two-sided ideals whose direct sum is `A`; used by
    /// the ribbon solver to take square roots blockwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Vec<usize>>>,
}

impl Meta {
    fn is_empty(&self) -> bool {
        self == &Meta::default()
    }
}

/// Algebra, coproduct, counit, associator, antipode with evaluation and
/// coevaluation elements, and optionally an R-matrix and a ribbon candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiHopfDatum {
    pub algebra: Algebra,
    /// `A → A⊗A`.
    pub delta: LinearMap,
    pub epsilon: Vec<Scalar>,
    pub phi: SparseTensor,
    pub antipode: LinearMap,
    pub alpha: SparseTensor,
    pub beta: SparseTensor,
    pub r: Option<SparseTensor>,
    pub v: Option<SparseTensor>,
    pub meta: Meta,
}

/// On-disk document. Scalars are decimal strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DatumJson {
    pub field: Field,
    pub dim: usize,
    /// `[i, j, k, c]`: `e_i e_j` has coefficient `c` at `e_k`.
    pub product: Vec<(usize, usize, usize, String)>,
    pub unit: TensorJson,
    /// `[i, j, k, c]`: `Δ(e_i)` has coefficient `c` at `e_j ⊗ e_k`.
    pub delta: Vec<(usize, usize, usize, String)>,
    pub epsilon: Vec<String>,
    pub phi: TensorJson,
    /// `[i, j, c]`: `S(e_i)` has coefficient `c` at `e_j`.
    pub antipode: Vec<(usize, usize, String)>,
    pub alpha: TensorJson,
    pub beta: TensorJson,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<TensorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<TensorJson>,
    #[serde(default, skip_serializing_if = "Meta::is_empty")]
    pub meta: Meta,
}

fn check_index(i: usize, n: usize, what: &str) -> Result<()> {
    if i >= n {
        return Err(Error::Shape(format!("{what}: index {i} out of range for dim {n}")));
    }
    Ok(())
}

impl QuasiHopfDatum {
    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Parses a JSON document; syntax errors carry line and column.
    pub fn load(text: &str) -> Result<QuasiHopfDatum> {
        let doc: DatumJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            reason: e.to_string(),
        })?;
        QuasiHopfDatum::from_json(&doc)
    }

    pub fn load_file(path: &std::path::Path) -> Result<QuasiHopfDatum> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        QuasiHopfDatum::load(&text)
    }

    pub fn from_json(doc: &DatumJson) -> Result<QuasiHopfDatum> {
        let field = doc.field;
        let n = doc.dim;
        if n == 0 {
            return Err(Error::Shape("dim must be positive".into()));
        }
        let mut table = vec![Vec::new(); n * n];
        for (i, j, k, c) in &doc.product {
            check_index(*i, n, "product")?;
            check_index(*j, n, "product")?;
            check_index(*k, n, "product")?;
            table[i * n + j].push((*k, field.parse(c)?));
        }
        let unit = doc.unit.to_tensor(n, field)?;
        if unit.arity() != 1 {
            return Err(Error::Shape("unit must have arity 1".into()));
        }
        let algebra = Algebra::new(field, n, table, unit.to_vec())?;
        let mut delta_images = vec![SparseTensor::zero(n, 2); n];
        let mut per_row: Vec<Vec<(Vec<usize>, Scalar)>> = vec![Vec::new(); n];
        for (i, j, k, c) in &doc.delta {
            check_index(*i, n, "delta")?;
            check_index(*j, n, "delta")?;
            check_index(*k, n, "delta")?;
            per_row[*i].push((vec![*j, *k], field.parse(c)?));
        }
        for (i, row) in per_row.into_iter().enumerate() {
            delta_images[i] = SparseTensor::from_entries(n, 2, row)?;
        }
        let delta = LinearMap::from_images(n, 2, &delta_images)?;
        if doc.epsilon.len() != n {
            return Err(Error::Shape(format!("epsilon has {} entries, expected {n}", doc.epsilon.len())));
        }
        let epsilon = doc.epsilon.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>()?;
        let mut s_rows: Vec<Vec<(Vec<usize>, Scalar)>> = vec![Vec::new(); n];
        for (i, j, c) in &doc.antipode {
            check_index(*i, n, "antipode")?;
            check_index(*j, n, "antipode")?;
            s_rows[*i].push((vec![*j], field.parse(c)?));
        }
        let s_images = s_rows
            .into_iter()
            .map(|row| SparseTensor::from_entries(n, 1, row))
            .collect::<Result<Vec<_>>>()?;
        let antipode = LinearMap::from_images(n, 1, &s_images)?;
        let tensor_of = |t: &TensorJson, arity: usize, what: &str| -> Result<SparseTensor> {
            if t.arity != arity {
                return Err(Error::Shape(format!("{what} must have arity {arity}, got {}", t.arity)));
            }
            t.to_tensor(n, field)
        };
        let datum = QuasiHopfDatum {
            algebra,
            delta,
            epsilon,
            phi: tensor_of(&doc.phi, 3, "phi")?,
            antipode,
            alpha: tensor_of(&doc.alpha, 1, "alpha")?,
            beta: tensor_of(&doc.beta, 1, "beta")?,
            r: doc.r.as_ref().map(|t| tensor_of(t, 2, "R")).transpose()?,
            v: doc.v.as_ref().map(|t| tensor_of(t, 1, "v")).transpose()?,
            meta: doc.meta.clone(),
        };
        datum.check_shapes()?;
        Ok(datum)
    }

    pub fn to_json(&self) -> DatumJson {
        let n = self.dim();
        let mut product = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.algebra.product(i, j) {
                    product.push((i, j, *k, c.to_string()));
                }
            }
        }
        let mut delta = Vec::new();
        let mut antipode = Vec::new();
        for i in 0..n {
            for (idx, c) in self.delta.image(i).iter() {
                delta.push((i, idx[0], idx[1], c.to_string()));
            }
            for (idx, c) in self.antipode.image(i).iter() {
                antipode.push((i, idx[0], c.to_string()));
            }
        }
        DatumJson {
            field: self.field(),
            dim: n,
            product,
            unit: TensorJson::from_tensor(&SparseTensor::from_vec(n, self.algebra.unit_vec())),
            delta,
            epsilon: self.epsilon.iter().map(|c| c.to_string()).collect(),
            phi: TensorJson::from_tensor(&self.phi),
            antipode,
            alpha: TensorJson::from_tensor(&self.alpha),
            beta: TensorJson::from_tensor(&self.beta),
            r: self.r.as_ref().map(TensorJson::from_tensor),
            v: self.v.as_ref().map(TensorJson::from_tensor),
            meta: self.meta.clone(),
        }
    }

    /// Canonical serialization (lexicographically ordered entries).
    pub fn save(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("datum serializes")
    }

    /// SHA-256 of the canonical compact serialization.
    pub fn content_hash(&self) -> String {
        let compact = serde_json::to_string(&self.to_json()).expect("datum serializes");
        hex::encode(Sha256::digest(compact.as_bytes()))
    }

    /// Structural well-formedness: arities and dimensions of every layer.
    pub fn check_shapes(&self) -> Result<()> {
        let n = self.dim();
        let field = self.field();
        if self.delta.dim() != n || self.delta.out_arity() != 2 {
            return Err(Error::Shape("coproduct must map A to A⊗A".into()));
        }
        if self.antipode.dim() != n || self.antipode.out_arity() != 1 {
            return Err(Error::Shape("antipode must map A to A".into()));
        }
        if self.epsilon.len() != n {
            return Err(Error::Shape("counit length differs from dim".into()));
        }
        if self.epsilon.iter().any(|c| c.field() != field) {
            return Err(Error::FieldMismatch(field.to_string(), "counit".into()));
        }
        let tensors = [
            ("phi", Some(&self.phi), 3),
            ("alpha", Some(&self.alpha), 1),
            ("beta", Some(&self.beta), 1),
            ("R", self.r.as_ref(), 2),
            ("v", self.v.as_ref(), 1),
        ];
        for (name, t, arity) in tensors {
            if let Some(t) = t {
                if t.arity() != arity || t.dim() != n {
                    return Err(Error::Shape(format!("{name} must be an arity-{arity} tensor over dim {n}")));
                }
                if t.raw().values().any(|c| c.field() != field) {
                    return Err(Error::FieldMismatch(field.to_string(), name.into()));
                }
            }
        }
        if let Some(blocks) = &self.meta.blocks {
            let mut seen = vec![false; n];
            for b in blocks.iter().flatten() {
                check_index(*b, n, "block")?;
                if std::mem::replace(&mut seen[*b], true) {
                    return Err(Error::Shape(format!("basis index {b} in two blocks")));
                }
            }
            if seen.iter().any(|s| !s) {
                return Err(Error::Shape("blocks do not cover the basis".into()));
            }
        }
        Ok(())
    }
}

/// A validated datum together with its cached derived structure.
///
/// All inverses and derived elements are computed on first use and kept for
/// the lifetime of the value; the datum itself is immutable.
pub struct QuasiHopf {
    datum: QuasiHopfDatum,
    counit: LinearMap,
    delta_cop: LinearMap,
    hash: OnceLock<String>,
    s_inv: OnceLock<Result<LinearMap>>,
    phi_inv: OnceLock<Result<SparseTensor>>,
    r_inv: OnceLock<Result<SparseTensor>>,
    pub(crate) derived: OnceLock<Result<DerivedElements>>,
    pub(crate) drinfeld: OnceLock<Result<DrinfeldElements>>,
    pub(crate) rtwist: OnceLock<Result<RTwistElements>>,
}

impl std::fmt::Debug for QuasiHopf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuasiHopf").field("datum", &self.datum).finish_non_exhaustive()
    }
}

impl Clone for QuasiHopf {
    fn clone(&self) -> Self {
        QuasiHopf::new(self.datum.clone()).expect("already validated")
    }
}

impl QuasiHopf {
    pub fn new(datum: QuasiHopfDatum) -> Result<QuasiHopf> {
        datum.check_shapes()?;
        let n = datum.dim();
        let field = datum.field();
        let counit_images: Vec<SparseTensor> =
            datum.epsilon.iter().map(|c| SparseTensor::scalar(n, c.clone())).collect();
        let counit = LinearMap::from_images(n, 0, &counit_images)?;
        let cop_images = (0..n)
            .map(|i| tensor::flip(&datum.delta.image(i), 0, 1))
            .collect::<Result<Vec<_>>>()?;
        let delta_cop = LinearMap::from_images(n, 2, &cop_images)?;
        let _ = field;
        Ok(QuasiHopf {
            datum,
            counit,
            delta_cop,
            hash: OnceLock::new(),
            s_inv: OnceLock::new(),
            phi_inv: OnceLock::new(),
            r_inv: OnceLock::new(),
            derived: OnceLock::new(),
            drinfeld: OnceLock::new(),
            rtwist: OnceLock::new(),
        })
    }

    /// Like [`QuasiHopf::new`], seeding the associator and R-matrix inverses
    /// with known closed forms. Each hint is checked by multiplication.
    pub fn with_inverses(
        datum: QuasiHopfDatum,
        phi_inv: Option<SparseTensor>,
        r_inv: Option<SparseTensor>,
    ) -> Result<QuasiHopf> {
        let q = QuasiHopf::new(datum)?;
        if let Some(pi) = phi_inv {
            q.check_two_sided_inverse(&q.datum.phi, &pi, 3, "associator")?;
            let _ = q.phi_inv.set(Ok(pi));
        }
        if let (Some(ri), Some(r)) = (r_inv, q.datum.r.as_ref()) {
            q.check_two_sided_inverse(r, &ri, 2, "R-matrix")?;
            let _ = q.r_inv.set(Ok(ri));
        }
        Ok(q)
    }

    fn check_two_sided_inverse(&self, t: &SparseTensor, inv: &SparseTensor, k: usize, what: &str) -> Result<()> {
        let one = self.one(k);
        if self.mult(t, inv)? != one || self.mult(inv, t)? != one {
            return Err(Error::InternalInconsistency(format!("supplied {what} inverse is not an inverse")));
        }
        Ok(())
    }

    pub fn datum(&self) -> &QuasiHopfDatum {
        &self.datum
    }

    pub fn into_datum(self) -> QuasiHopfDatum {
        self.datum
    }

    pub fn field(&self) -> Field {
        self.datum.field()
    }

    pub fn dim(&self) -> usize {
        self.datum.dim()
    }

    pub fn algebra(&self) -> &Algebra {
        &self.datum.algebra
    }

    pub fn content_hash(&self) -> &str {
        self.hash.get_or_init(|| self.datum.content_hash())
    }

    pub fn one(&self, k: usize) -> SparseTensor {
        tensor::unit_tensor(&self.datum.algebra, k)
    }

    pub fn scalar(&self, c: Scalar) -> SparseTensor {
        SparseTensor::scalar(self.dim(), c)
    }

    pub fn basis(&self, i: usize) -> SparseTensor {
        SparseTensor::basis(self.dim(), i, self.field())
    }

    pub fn mult(&self, a: &SparseTensor, b: &SparseTensor) -> Result<SparseTensor> {
        tensor::mult(a, b, &self.datum.algebra)
    }

    /// Left-to-right product of several tensors of equal arity.
    pub fn prod(&self, factors: &[&SparseTensor]) -> Result<SparseTensor> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::Precondition("empty product".into()))?;
        let mut acc = (*first).clone();
        for f in rest {
            acc = self.mult(&acc, f)?;
        }
        Ok(acc)
    }

    pub fn invert(&self, t: &SparseTensor) -> Result<SparseTensor> {
        tensor::invert(t, &self.datum.algebra)
    }

    pub fn contract(&self, factors: &[&SparseTensor], groups: &[&[usize]]) -> Result<SparseTensor> {
        tensor::contract(&self.datum.algebra, factors, groups)
    }

    pub fn delta_map(&self) -> &LinearMap {
        &self.datum.delta
    }

    pub fn delta_cop_map(&self) -> &LinearMap {
        &self.delta_cop
    }

    pub fn antipode_map(&self) -> &LinearMap {
        &self.datum.antipode
    }

    pub fn counit_map(&self) -> &LinearMap {
        &self.counit
    }

    pub fn antipode_inverse_map(&self) -> Result<&LinearMap> {
        self.s_inv
            .get_or_init(|| self.datum.antipode.inverse(self.field()))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn phi(&self) -> &SparseTensor {
        &self.datum.phi
    }

    pub fn phi_inv(&self) -> Result<&SparseTensor> {
        self.phi_inv
            .get_or_init(|| self.invert(&self.datum.phi))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn r(&self) -> Result<&SparseTensor> {
        self.datum.r.as_ref().ok_or(Error::MissingR)
    }

    pub fn r_inv(&self) -> Result<&SparseTensor> {
        let r = self.r()?;
        self.r_inv.get_or_init(|| self.invert(r)).as_ref().map_err(Clone::clone)
    }

    pub fn v(&self) -> Result<&SparseTensor> {
        self.datum.v.as_ref().ok_or(Error::MissingV)
    }

    pub fn alpha(&self) -> &SparseTensor {
        &self.datum.alpha
    }

    pub fn beta(&self) -> &SparseTensor {
        &self.datum.beta
    }

    fn resolve<'a>(&'a self, leg: &LegMap<'a>) -> Result<Option<&'a LinearMap>> {
        Ok(match leg {
            LegMap::Identity => None,
            LegMap::Antipode => Some(&self.datum.antipode),
            LegMap::AntipodeInverse => Some(self.antipode_inverse_map()?),
            LegMap::Counit => Some(&self.counit),
            LegMap::Coproduct => Some(&self.datum.delta),
            LegMap::CoproductCop => Some(&self.delta_cop),
            LegMap::Linear(m) => Some(*m),
        })
    }

    /// Applies one structure map per leg.
    pub fn apply_legs<'a>(&'a self, t: &SparseTensor, maps: &[LegMap<'a>]) -> Result<SparseTensor> {
        let resolved = maps.iter().map(|m| self.resolve(m)).collect::<Result<Vec<_>>>()?;
        tensor::apply_maps(t, &resolved)
    }

    /// `S` applied to an element of `A`.
    pub fn s(&self, a: &SparseTensor) -> Result<SparseTensor> {
        self.apply_legs(a, &[LegMap::Antipode])
    }

    pub fn s_inv(&self, a: &SparseTensor) -> Result<SparseTensor> {
        self.apply_legs(a, &[LegMap::AntipodeInverse])
    }

    /// `S ⊗ … ⊗ S` on every leg.
    pub fn s_all(&self, t: &SparseTensor) -> Result<SparseTensor> {
        self.apply_legs(t, &vec![LegMap::Antipode; t.arity()])
    }

    pub fn s_inv_all(&self, t: &SparseTensor) -> Result<SparseTensor> {
        self.apply_legs(t, &vec![LegMap::AntipodeInverse; t.arity()])
    }

    pub fn delta(&self, a: &SparseTensor) -> Result<SparseTensor> {
        self.apply_legs(a, &[LegMap::Coproduct])
    }

    pub fn delta_cop(&self, a: &SparseTensor) -> Result<SparseTensor> {
        self.apply_legs(a, &[LegMap::CoproductCop])
    }

    pub fn eps(&self, a: &SparseTensor) -> Result<Scalar> {
        Ok(self.apply_legs(a, &[LegMap::Counit])?.as_scalar(self.field()))
    }

    pub fn flip(&self, t: &SparseTensor) -> Result<SparseTensor> {
        tensor::flip(t, 0, 1)
    }

    pub fn tensor(&self, a: &SparseTensor, b: &SparseTensor) -> Result<SparseTensor> {
        a.tensor(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_doc() -> String {
        // K[Z2] over F7: basis {e, g}
        r#"{
          "field": {"kind": "prime", "p": 7},
          "dim": 2,
          "product": [[0,0,0,"1"],[0,1,1,"1"],[1,0,1,"1"],[1,1,0,"1"]],
          "unit": {"arity": 1, "entries": [[[0], "1"]]},
          "delta": [[0,0,0,"1"],[1,1,1,"1"]],
          "epsilon": ["1","1"],
          "phi": {"arity": 3, "entries": [[[0,0,0], "1"]]},
          "antipode": [[0,0,"1"],[1,1,"1"]],
          "alpha": {"arity": 1, "entries": [[[0], "1"]]},
          "beta": {"arity": 1, "entries": [[[0], "1"]]}
        }"#
        .to_string()
    }

    #[test]
    fn loads_group_algebra() {
        let d = QuasiHopfDatum::load(&tiny_doc()).unwrap();
        assert_eq!(d.dim(), 2);
        let q = QuasiHopf::new(d.clone()).unwrap();
        assert_eq!(q.phi(), &q.one(3));
        assert_eq!(QuasiHopfDatum::load(&d.save()).unwrap(), d);
    }

    #[test]
    fn index_out_of_range_is_shape_error() {
        let doc = tiny_doc().replace("[1,1,0,\"1\"]", "[1,1,5,\"1\"]");
        assert!(matches!(QuasiHopfDatum::load(&doc), Err(Error::Shape(_))));
    }

    #[test]
    fn syntax_error_has_position() {
        match QuasiHopfDatum::load("{\n  \"field\": ") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
