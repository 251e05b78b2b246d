//! Sparse multilinear algebra over `A^{⊗k}` for a finite-dimensional algebra `A`
//! given by structure constants.
//!
//! A [`SparseTensor`] stores only nonzero coefficients, keyed by the
//! mixed-radix linear index of its multi-index (first leg most significant),
//! so map order is lexicographic order of multi-indices.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, SparseRow};
use crate::scalar::{Field, Scalar};

/// Sparse vector in `A`: `(basis index, coefficient)`.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Structure constants of an associative unital algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    field: Field,
    dim: usize,
    /// `table[i * dim + j]` is the sparse expansion of `e_i e_j`.
    table: Vec<SparseVec>,
    unit: SparseVec,
    /// For each `i`, the `j` with `e_i e_j != 0`.
    partners: Vec<Vec<usize>>,
}

impl Algebra {
    pub fn new(field: Field, dim: usize, table: Vec<SparseVec>, unit: SparseVec) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Shape("dimension must be positive".into()));
        }
        if table.len() != dim * dim {
            return Err(Error::Shape(format!("expected {} product rows, got {}", dim * dim, table.len())));
        }
        for row in table.iter().chain(std::iter::once(&unit)) {
            for (k, _) in row {
                if *k >= dim {
                    return Err(Error::Shape(format!("basis index {k} out of range for dim {dim}")));
                }
            }
        }
        let clean = |v: SparseVec| -> SparseVec {
            let mut m: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (k, c) in v {
                m.entry(k).or_insert_with(|| field.zero()).add_assign_ref(&c);
            }
            m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        };
        let table: Vec<SparseVec> = table.into_iter().map(clean).collect();
        let unit = clean(unit);
        let partners = (0..dim)
            .map(|i| (0..dim).filter(|j| !table[i * dim + j].is_empty()).collect())
            .collect();
        Ok(Algebra {
            field,
            dim,
            table,
            unit,
            partners,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit_vec(&self) -> &SparseVec {
        &self.unit
    }

    #[inline]
    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim + j]
    }

    /// The opposite algebra, `a ·op b = b a`.
    pub fn opposite(&self) -> Algebra {
        let n = self.dim;
        let table = (0..n * n).map(|ij| self.table[(ij % n) * n + ij / n].clone()).collect();
        Algebra::new(self.field, n, table, self.unit.clone()).expect("opposite of a valid table")
    }

    /// Multiplies sparse vectors `a b`.
    pub fn mul_vec(&self, a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = DenseAcc::new(self.field, self.dim);
        for (i, x) in a {
            for (j, y) in b {
                let xy = x * y;
                for (k, c) in self.product(*i, *j) {
                    acc.add_mul(*k, &xy, c);
                }
            }
        }
        acc.drain()
    }

    /// Product of a word of basis elements.
    pub fn mul_word(&self, word: &[usize]) -> SparseVec {
        let mut cur: SparseVec = vec![(word[0], self.field.one())];
        for b in &word[1..] {
            if cur.is_empty() {
                break;
            }
            if cur.len() == 1 {
                let (k, c) = &cur[0];
                let row = self.product(*k, *b);
                cur = row.iter().map(|(j, d)| (*j, c * d)).collect();
            } else {
                cur = self.mul_vec(&cur, &[(*b, self.field.one())]);
            }
        }
        cur
    }

    /// Structure-constant check: associativity and two-sided unit, on basis
    /// triples. Returns the first failing `(i, j, k)` or `(i,)` if any.
    pub fn check_associative(&self) -> Option<Vec<usize>> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                let ij = self.product(i, j);
                for k in 0..n {
                    let left = self.mul_vec(ij, &[(k, self.field.one())]);
                    let jk = self.product(j, k);
                    let right = self.mul_vec(&[(i, self.field.one())], jk);
                    if left != right {
                        return Some(vec![i, j, k]);
                    }
                }
            }
        }
        None
    }

    pub fn check_unit(&self) -> Option<usize> {
        let one = self.field.one();
        for i in 0..self.dim {
            let e = vec![(i, one.clone())];
            if self.mul_vec(&self.unit, &e) != e || self.mul_vec(&e, &self.unit) != e {
                return Some(i);
            }
        }
        None
    }
}

/// Dense accumulator over `[0, len)` that remembers touched slots.
pub(crate) struct DenseAcc {
    vals: Vec<Scalar>,
    touched: Vec<usize>,
    used: Vec<bool>,
}

impl DenseAcc {
    pub(crate) fn new(field: Field, len: usize) -> Self {
        DenseAcc {
            vals: vec![field.zero(); len],
            touched: Vec::new(),
            used: vec![false; len],
        }
    }

    #[inline]
    pub(crate) fn add_mul(&mut self, k: usize, a: &Scalar, b: &Scalar) {
        if !self.used[k] {
            self.used[k] = true;
            self.touched.push(k);
        }
        self.vals[k].add_mul(a, b);
    }

    pub(crate) fn drain(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let field_zero = self.vals[0].field().zero();
        let mut out = Vec::with_capacity(self.touched.len());
        for k in self.touched.drain(..) {
            self.used[k] = false;
            let v = std::mem::replace(&mut self.vals[k], field_zero.clone());
            if !v.is_zero() {
                out.push((k, v));
            }
        }
        out
    }
}

/// Element of `A^{⊗k}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseTensor {
    arity: usize,
    dim: usize,
    entries: BTreeMap<u64, Scalar>,
}

impl fmt::Debug for SparseTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseTensor(arity={}, dim={}, {{", self.arity, self.dim)?;
        for (i, (idx, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{idx:?}: {c}")?;
        }
        write!(f, "}})")
    }
}

fn radix_size(dim: usize, arity: usize) -> Result<u64> {
    (dim as u64)
        .checked_pow(arity as u32)
        .ok_or_else(|| Error::Shape(format!("A^⊗{arity} with dim {dim} is too large to index")))
}

impl SparseTensor {
    /// The zero tensor. Arity 0 tensors are scalars.
    pub fn zero(dim: usize, arity: usize) -> Self {
        SparseTensor {
            arity,
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries(
        dim: usize,
        arity: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, Scalar)>,
    ) -> Result<Self> {
        radix_size(dim, arity)?;
        let mut t = SparseTensor::zero(dim, arity);
        for (idx, c) in entries {
            if idx.len() != arity {
                return Err(Error::Shape(format!("multi-index {idx:?} has length {}, expected {arity}", idx.len())));
            }
            if let Some(bad) = idx.iter().find(|i| **i >= dim) {
                return Err(Error::Shape(format!("index {bad} out of range for dim {dim}")));
            }
            let key = t.encode(&idx);
            t.add_at(key, &c);
        }
        Ok(t)
    }

    pub(crate) fn from_map(dim: usize, arity: usize, map: impl IntoIterator<Item = (u64, Scalar)>) -> Self {
        SparseTensor {
            arity,
            dim,
            entries: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// `e_i` as an element of `A`.
    pub fn basis(dim: usize, i: usize, field: Field) -> Self {
        Self::from_map(dim, 1, [(i as u64, field.one())])
    }

    /// A scalar as an arity-0 tensor.
    pub fn scalar(dim: usize, c: Scalar) -> Self {
        Self::from_map(dim, 0, [(0, c)])
    }

    pub fn from_vec(dim: usize, v: &[(usize, Scalar)]) -> Self {
        let mut t = SparseTensor::zero(dim, 1);
        for (i, c) in v {
            t.add_at(*i as u64, c);
        }
        t
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn encode(&self, idx: &[usize]) -> u64 {
        idx.iter().fold(0u64, |acc, i| acc * self.dim as u64 + *i as u64)
    }

    fn decode_into(&self, mut key: u64, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = (key % self.dim as u64) as usize;
            key /= self.dim as u64;
        }
    }

    pub fn decode(&self, key: u64) -> Vec<usize> {
        let mut v = vec![0; self.arity];
        self.decode_into(key, &mut v);
        v
    }

    fn add_at(&mut self, key: u64, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.entries.get_mut(&key) {
            Some(v) => {
                v.add_assign_ref(c);
                if v.is_zero() {
                    self.entries.remove(&key);
                }
            }
            None => {
                self.entries.insert(key, c.clone());
            }
        }
    }

    /// Entries in lexicographic multi-index order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &Scalar)> + '_ {
        self.entries.iter().map(move |(k, c)| (self.decode(*k), c))
    }

    pub(crate) fn raw(&self) -> &BTreeMap<u64, Scalar> {
        &self.entries
    }

    pub fn get(&self, idx: &[usize]) -> Option<&Scalar> {
        self.entries.get(&self.encode(idx))
    }

    /// Coordinates of an arity-1 tensor.
    pub fn to_vec(&self) -> SparseVec {
        assert_eq!(self.arity, 1);
        self.entries.iter().map(|(k, c)| (*k as usize, c.clone())).collect()
    }

    /// The scalar of an arity-0 tensor.
    pub fn as_scalar(&self, field: Field) -> Scalar {
        assert_eq!(self.arity, 0);
        self.entries.get(&0).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn add(&self, other: &SparseTensor) -> Result<SparseTensor> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (k, c) in &other.entries {
            out.add_at(*k, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparseTensor) -> Result<SparseTensor> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (k, c) in &other.entries {
            out.add_at(*k, &-c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> SparseTensor {
        SparseTensor::from_map(self.dim, self.arity, self.entries.iter().map(|(k, v)| (*k, v * c)))
    }

    fn same_shape(&self, other: &SparseTensor) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch(self.arity, other.arity));
        }
        if self.dim != other.dim {
            return Err(Error::Shape(format!("dimension {} vs {}", self.dim, other.dim)));
        }
        Ok(())
    }

    /// First multi-index where `self` and `other` differ, with both values.
    pub fn first_difference(&self, other: &SparseTensor, field: Field) -> Option<(Vec<usize>, Scalar, Scalar)> {
        if self.arity != other.arity {
            return Some((vec![], field.zero(), field.zero()));
        }
        let mut a = self.entries.iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return None,
                (Some((ka, va)), None) => return Some((self.decode(**ka), (*va).clone(), field.zero())),
                (None, Some((kb, vb))) => return Some((self.decode(**kb), field.zero(), (*vb).clone())),
                (Some((ka, va)), Some((kb, vb))) => {
                    if ka < kb {
                        return Some((self.decode(**ka), (*va).clone(), field.zero()));
                    } else if kb < ka {
                        return Some((self.decode(**kb), field.zero(), (*vb).clone()));
                    } else if va != vb {
                        return Some((self.decode(**ka), (*va).clone(), (*vb).clone()));
                    }
                    a.next();
                    b.next();
                }
            }
        }
    }

    /// `self ⊗ other` (legs of `other` appended).
    /// Splits off leg `leg`: pairs `(k, t_k)` with `t = Σ_k t_k` placed so
    /// that leg `leg` carries `e_k`, and `t_k` holding the remaining legs.
    pub fn slices(&self, leg: usize) -> Result<Vec<(usize, SparseTensor)>> {
        if leg >= self.arity {
            return Err(Error::Shape(format!("leg {leg} of an arity-{} tensor", self.arity)));
        }
        let mut out: BTreeMap<usize, SparseTensor> = BTreeMap::new();
        for (mut idx, c) in self.iter() {
            let k = idx.remove(leg);
            let t = out.entry(k).or_insert_with(|| SparseTensor::zero(self.dim, self.arity - 1));
            let key = t.encode(&idx);
            t.add_at(key, c);
        }
        Ok(out.into_iter().collect())
    }

    pub fn tensor(&self, other: &SparseTensor) -> Result<SparseTensor> {
        if self.dim != other.dim {
            return Err(Error::Shape(format!("dimension {} vs {}", self.dim, other.dim)));
        }
        let arity = self.arity + other.arity;
        let shift = radix_size(self.dim, other.arity)?;
        radix_size(self.dim, arity)?;
        let mut out = BTreeMap::new();
        for (ka, a) in &self.entries {
            for (kb, b) in &other.entries {
                out.insert(ka * shift + kb, a * b);
            }
        }
        Ok(SparseTensor::from_map(self.dim, arity, out))
    }

    /// Output leg `k` is input leg `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Result<SparseTensor> {
        let mut seen = vec![false; self.arity];
        if perm.len() != self.arity {
            return Err(Error::Shape(format!("permutation of length {} for arity {}", perm.len(), self.arity)));
        }
        for p in perm {
            if *p >= self.arity || std::mem::replace(&mut seen[*p], true) {
                return Err(Error::Shape(format!("{perm:?} is not a permutation")));
            }
        }
        let mut digits = vec![0; self.arity];
        let mut out = BTreeMap::new();
        for (k, c) in &self.entries {
            self.decode_into(*k, &mut digits);
            let key = perm.iter().fold(0u64, |acc, p| acc * self.dim as u64 + digits[*p] as u64);
            out.insert(key, c.clone());
        }
        Ok(SparseTensor::from_map(self.dim, self.arity, out))
    }
}

/// The unit of `A^{⊗k}`.
pub fn unit_tensor(alg: &Algebra, k: usize) -> SparseTensor {
    let one = SparseTensor::from_vec(alg.dim, alg.unit_vec());
    let mut t = SparseTensor::scalar(alg.dim, alg.field.one());
    for _ in 0..k {
        t = t.tensor(&one).expect("unit tensor power");
    }
    t
}

/// Swaps legs `i` and `j`.
pub fn flip(t: &SparseTensor, i: usize, j: usize) -> Result<SparseTensor> {
    if i == j || i >= t.arity || j >= t.arity {
        return Err(Error::Shape(format!("cannot flip legs {i},{j} of an arity-{} tensor", t.arity)));
    }
    let mut perm: Vec<usize> = (0..t.arity).collect();
    perm.swap(i, j);
    t.permute(&perm)
}

/// Componentwise product in `A^{⊗k}`.
pub fn mult(t1: &SparseTensor, t2: &SparseTensor, alg: &Algebra) -> Result<SparseTensor> {
    if t1.arity != t2.arity {
        return Err(Error::ArityMismatch(t1.arity, t2.arity));
    }
    if t1.dim != alg.dim || t2.dim != alg.dim {
        return Err(Error::Shape("tensor dimension differs from the algebra".into()));
    }
    let k = t1.arity;
    let n = alg.dim as u64;
    if k == 0 {
        let a = t1.as_scalar(alg.field);
        let b = t2.as_scalar(alg.field);
        return Ok(SparseTensor::scalar(alg.dim, &a * &b));
    }
    // group t2 by its first-leg index
    let lead = n.pow(k as u32 - 1);
    let mut groups: Vec<Vec<(Vec<usize>, &Scalar)>> = vec![Vec::new(); alg.dim];
    for (key, c) in &t2.entries {
        groups[(key / lead) as usize].push((t2.decode(*key), c));
    }
    let mut acc: HashMap<u64, Scalar> = HashMap::new();
    let mut da = vec![0usize; k];
    let mut legs: Vec<&SparseVec> = Vec::with_capacity(k);
    for (ka, a) in &t1.entries {
        t1.decode_into(*ka, &mut da);
        for j0 in &alg.partners[da[0]] {
            for (db, b) in &groups[*j0] {
                legs.clear();
                let mut zero = false;
                for l in 0..k {
                    let p = alg.product(da[l], db[l]);
                    if p.is_empty() {
                        zero = true;
                        break;
                    }
                    legs.push(p);
                }
                if zero {
                    continue;
                }
                let ab = a * b;
                expand_product(&legs, n, &ab, &mut |key, c| {
                    acc.entry(key).or_insert_with(|| alg.field.zero()).add_assign_ref(&c);
                });
            }
        }
    }
    Ok(SparseTensor::from_map(alg.dim, k, acc))
}

/// Visits every term of `coef · legs[0] ⊗ legs[1] ⊗ …` for sparse vectors in `A`.
fn expand_product(legs: &[&SparseVec], n: u64, coef: &Scalar, visit: &mut impl FnMut(u64, Scalar)) {
    fn rec(legs: &[&SparseVec], n: u64, key: u64, coef: Scalar, visit: &mut impl FnMut(u64, Scalar)) {
        match legs.split_first() {
            None => visit(key, coef),
            Some((first, rest)) => {
                for (i, c) in first.iter() {
                    rec(rest, n, key * n + *i as u64, &coef * c, visit);
                }
            }
        }
    }
    rec(legs, n, 0, coef.clone(), visit)
}

/// A linear map `A → A^{⊗m}` given on basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    dim: usize,
    out_arity: usize,
    rows: Vec<Vec<(u64, Scalar)>>,
}

impl LinearMap {
    /// `images[i]` is the image of `e_i` as a tensor of arity `out_arity`.
    pub fn from_images(dim: usize, out_arity: usize, images: &[SparseTensor]) -> Result<Self> {
        if images.len() != dim {
            return Err(Error::Shape(format!("linear map needs {dim} images, got {}", images.len())));
        }
        for im in images {
            if im.arity != out_arity || im.dim != dim {
                return Err(Error::Shape("image with wrong shape".into()));
            }
        }
        Ok(LinearMap {
            dim,
            out_arity,
            rows: images.iter().map(|t| t.entries.iter().map(|(k, c)| (*k, c.clone())).collect()).collect(),
        })
    }

    pub fn identity(dim: usize, field: Field) -> Self {
        LinearMap {
            dim,
            out_arity: 1,
            rows: (0..dim).map(|i| vec![(i as u64, field.one())]).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn out_arity(&self) -> usize {
        self.out_arity
    }

    /// Image of `e_i`.
    pub fn image(&self, i: usize) -> SparseTensor {
        SparseTensor::from_map(self.dim, self.out_arity, self.rows[i].iter().cloned())
    }

    pub fn apply(&self, t: &SparseTensor) -> Result<SparseTensor> {
        apply_maps(t, &[Some(self)])
    }

    /// Composition `other ∘ self`, for arity-1 maps.
    pub fn then(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.out_arity != 1 {
            return Err(Error::Shape("composition needs an A → A map first".into()));
        }
        let images: Result<Vec<_>> = (0..self.dim).map(|i| other.apply(&self.image(i))).collect();
        LinearMap::from_images(self.dim, other.out_arity, &images?)
    }

    /// Inverse of a bijective `A → A` map, by solving one linear system per
    /// basis vector.
    pub fn inverse(&self, field: Field) -> Result<LinearMap> {
        if self.out_arity != 1 {
            return Err(Error::NotInvertible);
        }
        let n = self.dim;
        // matrix M with M[j][i] = coefficient of e_j in self(e_i)
        let mut rows: Vec<SparseRow> = vec![SparseRow::new(); n];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row {
                rows[*j as usize].insert(i, c.clone());
            }
        }
        let mut images = Vec::with_capacity(n);
        for target in 0..n {
            let rhs = (0..n).map(|j| if j == target { field.one() } else { field.zero() }).collect();
            let x = linalg::solve(field, rows.clone(), rhs, n).ok_or(Error::NotInvertible)?;
            images.push(SparseTensor::from_map(n, 1, x.into_iter().enumerate().map(|(i, c)| (i as u64, c))));
        }
        LinearMap::from_images(n, 1, &images)
    }
}

/// Applies one linear map per leg (`None` is the identity).
pub fn apply_maps(t: &SparseTensor, maps: &[Option<&LinearMap>]) -> Result<SparseTensor> {
    if maps.len() != t.arity {
        return Err(Error::Shape(format!("{} leg maps for an arity-{} tensor", maps.len(), t.arity)));
    }
    let n = t.dim as u64;
    for m in maps.iter().flatten() {
        if m.dim != t.dim {
            return Err(Error::Shape("leg map dimension differs from the tensor".into()));
        }
    }
    let widths: Vec<u64> = maps.iter().map(|m| n.pow(m.map_or(1, |m| m.out_arity) as u32)).collect();
    let out_arity: usize = maps.iter().map(|m| m.map_or(1, |m| m.out_arity)).sum();
    radix_size(t.dim, out_arity)?;
    let mut digits = vec![0usize; t.arity];
    let mut acc: HashMap<u64, Scalar> = HashMap::new();
    for (key, c) in &t.entries {
        t.decode_into(*key, &mut digits);
        fn rec(
            l: usize,
            digits: &[usize],
            maps: &[Option<&LinearMap>],
            widths: &[u64],
            key: u64,
            coef: Scalar,
            acc: &mut HashMap<u64, Scalar>,
        ) {
            if l == digits.len() {
                acc.entry(key).or_insert_with(|| coef.field().zero()).add_assign_ref(&coef);
                return;
            }
            match maps[l] {
                None => rec(l + 1, digits, maps, widths, key * widths[l] + digits[l] as u64, coef, acc),
                Some(m) => {
                    for (k, c) in &m.rows[digits[l]] {
                        rec(l + 1, digits, maps, widths, key * widths[l] + *k, &coef * c, acc);
                    }
                }
            }
        }
        rec(0, &digits, maps, &widths, 0, c.clone(), &mut acc);
    }
    Ok(SparseTensor::from_map(t.dim, out_arity, acc))
}

/// Per-leg action for [`crate::datum::QuasiHopf::apply_legs`].
#[derive(Clone, Copy, Debug)]
pub enum LegMap<'a> {
    Identity,
    Antipode,
    AntipodeInverse,
    Counit,
    Coproduct,
    CoproductCop,
    Linear(&'a LinearMap),
}

/// Two-sided inverse in `A^{⊗k}`, from the linear system `t · x = 1`,
/// verified on both sides.
pub fn invert(t: &SparseTensor, alg: &Algebra) -> Result<SparseTensor> {
    let k = t.arity;
    let n = alg.dim as u64;
    let size = radix_size(alg.dim, k)? as usize;
    if t.is_zero() {
        return Err(Error::NotInvertible);
    }
    // column J of left multiplication: t · e_J
    let mut rows: Vec<SparseRow> = vec![SparseRow::new(); size];
    let mut dj = vec![0usize; k];
    let mut di = vec![0usize; k];
    let mut legs: Vec<&SparseVec> = Vec::with_capacity(k);
    for col in 0..size as u64 {
        let mut rem = col;
        for slot in dj.iter_mut().rev() {
            *slot = (rem % n) as usize;
            rem /= n;
        }
        for (key, c) in &t.entries {
            t.decode_into(*key, &mut di);
            legs.clear();
            let mut zero = false;
            for l in 0..k {
                let p = alg.product(di[l], dj[l]);
                if p.is_empty() {
                    zero = true;
                    break;
                }
                legs.push(p);
            }
            if zero {
                continue;
            }
            expand_product(&legs, n, c, &mut |row, v| {
                let e = rows[row as usize].entry(col as usize).or_insert_with(|| alg.field.zero());
                e.add_assign_ref(&v);
            });
        }
    }
    for r in rows.iter_mut() {
        r.retain(|_, v| !v.is_zero());
    }
    let one = unit_tensor(alg, k);
    let mut rhs = vec![alg.field.zero(); size];
    for (key, c) in &one.entries {
        rhs[*key as usize] = c.clone();
    }
    let x = linalg::solve(alg.field, rows, rhs, size).ok_or(Error::NotInvertible)?;
    let inv = SparseTensor::from_map(alg.dim, k, x.into_iter().enumerate().map(|(i, c)| (i as u64, c)));
    if mult(t, &inv, alg)? != one || mult(&inv, t, alg)? != one {
        return Err(Error::NotInvertible);
    }
    Ok(inv)
}

/// Generalized contraction. The factors are laid side by side (leg indices
/// are global over the concatenation); output leg `k` is the ordered product
/// of the input legs listed in `groups[k]`. Every input leg must be used
/// exactly once.
///
/// This is how all Sweedler-style sums are evaluated: for example
/// `Σ X β S(Y) α Z` is `contract([(id⊗S⊗id)(Φ), β, α], [[0, 3, 1, 4, 2]])`.
pub fn contract(alg: &Algebra, factors: &[&SparseTensor], groups: &[&[usize]]) -> Result<SparseTensor> {
    let total: usize = factors.iter().map(|f| f.arity).sum();
    let mut used = vec![false; total];
    for g in groups {
        if g.is_empty() {
            return Err(Error::Shape("empty output leg in contraction".into()));
        }
        for l in g.iter() {
            if *l >= total || std::mem::replace(&mut used[*l], true) {
                return Err(Error::Shape(format!("leg {l} used twice or out of range in contraction")));
            }
        }
    }
    if used.iter().any(|u| !u) {
        return Err(Error::Shape("contraction leaves an input leg unused".into()));
    }
    for f in factors {
        if f.dim != alg.dim {
            return Err(Error::Shape("factor dimension differs from the algebra".into()));
        }
    }
    let out_arity = groups.len();
    let n = alg.dim as u64;
    let out_size = radix_size(alg.dim, out_arity)?;
    // decode each factor once
    let decoded: Vec<Vec<(Vec<usize>, Scalar)>> = factors
        .iter()
        .map(|f| f.entries.iter().map(|(k, c)| (f.decode(*k), c.clone())).collect())
        .collect();
    if decoded.iter().any(|d| d.is_empty()) {
        return Ok(SparseTensor::zero(alg.dim, out_arity));
    }
    let mut offsets = Vec::with_capacity(factors.len());
    let mut off = 0;
    for f in factors {
        offsets.push(off);
        off += f.arity;
    }
    let mut accumulator = Accumulator::new(alg.field, out_size);
    let mut legs = vec![0usize; total];
    let mut word = Vec::new();
    let mut out_legs: Vec<SparseVec> = vec![Vec::new(); out_arity];
    let mut idx = vec![0usize; factors.len()];
    let mut coefs: Vec<Scalar> = vec![alg.field.one(); factors.len() + 1];
    let nf = factors.len();
    // odometer over entry combinations; coefs[d+1] = coefs[d] * entry coefficient
    let mut depth = 0;
    loop {
        if depth == nf {
            'combo: {
                for (k, g) in groups.iter().enumerate() {
                    word.clear();
                    word.extend(g.iter().map(|l| legs[*l]));
                    let v = alg.mul_word(&word);
                    if v.is_empty() {
                        break 'combo;
                    }
                    out_legs[k] = v;
                }
                let refs: Vec<&SparseVec> = out_legs.iter().collect();
                expand_product(&refs, n, &coefs[nf], &mut |key, c| accumulator.add(key, &c));
            }
            // advance
            loop {
                if depth == 0 {
                    return Ok(SparseTensor::from_map(alg.dim, out_arity, accumulator.finish()));
                }
                depth -= 1;
                idx[depth] += 1;
                if idx[depth] < decoded[depth].len() {
                    break;
                }
                idx[depth] = 0;
            }
        }
        let (digits, c) = &decoded[depth][idx[depth]];
        legs[offsets[depth]..offsets[depth] + digits.len()].copy_from_slice(digits);
        coefs[depth + 1] = &coefs[depth] * c;
        depth += 1;
    }
}

enum Accumulator {
    Dense(Vec<Scalar>),
    Sparse(HashMap<u64, Scalar>, Field),
}

impl Accumulator {
    fn new(field: Field, size: u64) -> Self {
        if size <= 1 << 20 {
            Accumulator::Dense(vec![field.zero(); size as usize])
        } else {
            Accumulator::Sparse(HashMap::new(), field)
        }
    }

    #[inline]
    fn add(&mut self, key: u64, c: &Scalar) {
        match self {
            Accumulator::Dense(v) => v[key as usize].add_assign_ref(c),
            Accumulator::Sparse(m, f) => m.entry(key).or_insert_with(|| f.zero()).add_assign_ref(c),
        }
    }

    fn finish(self) -> Vec<(u64, Scalar)> {
        match self {
            Accumulator::Dense(v) => v
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k as u64, c))
                .collect(),
            Accumulator::Sparse(m, _) => m.into_iter().collect(),
        }
    }
}

/// JSON encoding `{"arity": k, "entries": [[[i1, …, ik], "scalar"], …]}` with
/// entries in lexicographic order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TensorJson {
    pub arity: usize,
    pub entries: Vec<(Vec<usize>, String)>,
}

impl TensorJson {
    pub fn from_tensor(t: &SparseTensor) -> Self {
        TensorJson {
            arity: t.arity,
            entries: t.iter().map(|(idx, c)| (idx, c.to_string())).collect(),
        }
    }

    pub fn to_tensor(&self, dim: usize, field: Field) -> Result<SparseTensor> {
        let entries: Result<Vec<_>> = self
            .entries
            .iter()
            .map(|(idx, s)| Ok((idx.clone(), field.parse(s)?)))
            .collect();
        SparseTensor::from_entries(dim, self.arity, entries?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Function algebra on Z2: orthogonal idempotents δ0, δ1.
    fn fz2(field: Field) -> Algebra {
        let one = field.one();
        let table = vec![vec![(0, one.clone())], vec![], vec![], vec![(1, one.clone())]];
        Algebra::new(field, 2, table, vec![(0, one.clone()), (1, one)]).unwrap()
    }

    #[test]
    fn orthogonal_idempotents() {
        let f = Field::prime(7).unwrap();
        let a = fz2(f);
        let d0 = SparseTensor::basis(2, 0, f);
        let d1 = SparseTensor::basis(2, 1, f);
        assert_eq!(mult(&d0, &d0, &a).unwrap(), d0);
        assert!(mult(&d0, &d1, &a).unwrap().is_zero());
        let t = SparseTensor::from_entries(2, 2, [(vec![0, 1], f.from_i64(3)), (vec![1, 1], f.one())]).unwrap();
        assert_eq!(mult(&unit_tensor(&a, 2), &t, &a).unwrap(), t);
        assert!(matches!(mult(&d0, &t, &a), Err(Error::ArityMismatch(1, 2))));
    }

    #[test]
    fn flip_is_an_involution() {
        let f = Field::Rational;
        let t = SparseTensor::from_entries(3, 2, [(vec![0, 2], f.from_i64(5)), (vec![1, 0], f.from_i64(-1))]).unwrap();
        let once = flip(&t, 0, 1).unwrap();
        assert_eq!(once.get(&[2, 0]), Some(&f.from_i64(5)));
        assert_eq!(flip(&once, 0, 1).unwrap(), t);
        assert!(flip(&t, 1, 1).is_err());
    }

    #[test]
    fn inversion() {
        let f = Field::prime(7).unwrap();
        let a = fz2(f);
        assert_eq!(invert(&unit_tensor(&a, 3), &a).unwrap(), unit_tensor(&a, 3));
        assert_eq!(invert(&SparseTensor::zero(2, 2), &a), Err(Error::NotInvertible));
        // δ0 alone is a zero divisor
        assert_eq!(invert(&SparseTensor::basis(2, 0, f), &a), Err(Error::NotInvertible));
        let t = SparseTensor::from_entries(2, 1, [(vec![0], f.from_i64(2)), (vec![1], f.from_i64(3))]).unwrap();
        let inv = invert(&t, &a).unwrap();
        assert_eq!(inv.get(&[0]), Some(&f.from_i64(4)));
        assert_eq!(inv.get(&[1]), Some(&f.from_i64(5)));
    }

    #[test]
    fn index_out_of_range_rejected() {
        let f = Field::Rational;
        assert!(SparseTensor::from_entries(2, 1, [(vec![2], f.one())]).is_err());
        assert!(SparseTensor::from_entries(2, 2, [(vec![1], f.one())]).is_err());
    }

    #[test]
    fn contraction_reproduces_product() {
        let f = Field::prime(5).unwrap();
        let a = fz2(f);
        let x = SparseTensor::from_entries(2, 2, [(vec![0, 1], f.from_i64(2)), (vec![1, 1], f.one())]).unwrap();
        let y = SparseTensor::from_entries(2, 2, [(vec![0, 0], f.from_i64(3)), (vec![1, 1], f.from_i64(4))]).unwrap();
        let via = contract(&a, &[&x, &y], &[&[0, 2], &[1, 3]]).unwrap();
        assert_eq!(via, mult(&x, &y, &a).unwrap());
    }

    #[test]
    fn json_encoding_is_sorted() {
        let f = Field::Rational;
        let t = SparseTensor::from_entries(2, 2, [(vec![1, 0], f.from_i64(1)), (vec![0, 1], f.parse("-2/3").unwrap())])
            .unwrap();
        let j = serde_json::to_string(&TensorJson::from_tensor(&t)).unwrap();
        assert_eq!(j, r#"{"arity":2,"entries":[[[0,1],"-2/3"],[[1,0],"1"]]}"#);
        assert_eq!(TensorJson::from_tensor(&t).to_tensor(2, f).unwrap(), t);
    }
}
