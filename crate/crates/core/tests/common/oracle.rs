//! A naive dense evaluator, independent of the sparse engine. It reads a
//! datum through its JSON document, keeps every structure as a flat array
//! indexed by full index tuples, and evaluates the Sweedler sums for γ, δ,
//! F, F⁻¹ and u term by term. Its own arithmetic: residues in `i128` or
//! `BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use qhopf::datum::DatumJson;
use qhopf::tensor::{SparseTensor, TensorJson};
use qhopf::QuasiHopfDatum;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum V {
    P(i128),
    Q(BigRational),
}

#[derive(Clone, Copy, Debug)]
pub enum K {
    P(i128),
    Q,
}

impl K {
    pub fn zero(&self) -> V {
        match self {
            K::P(_) => V::P(0),
            K::Q => V::Q(BigRational::zero()),
        }
    }

    pub fn one(&self) -> V {
        match self {
            K::P(_) => V::P(1),
            K::Q => V::Q(BigRational::one()),
        }
    }

    pub fn parse(&self, s: &str) -> V {
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.parse::<BigInt>().unwrap(), b.parse::<BigInt>().unwrap()),
            None => (s.parse::<BigInt>().unwrap(), BigInt::one()),
        };
        match self {
            K::P(p) => {
                let pb = BigInt::from(*p);
                let n: i128 = (((num % &pb) + &pb) % &pb).try_into().unwrap();
                let d: i128 = (((den % &pb) + &pb) % &pb).try_into().unwrap();
                V::P(n * self.inv_p(d) % p)
            }
            K::Q => V::Q(BigRational::new(num, den)),
        }
    }

    fn inv_p(&self, a: i128) -> i128 {
        let K::P(p) = *self else { unreachable!() };
        // Fermat
        let (mut base, mut e, mut acc) = (a.rem_euclid(p), p - 2, 1i128);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }

    pub fn add(&self, a: &V, b: &V) -> V {
        match (self, a, b) {
            (K::P(p), V::P(x), V::P(y)) => V::P((x + y) % p),
            (K::Q, V::Q(x), V::Q(y)) => V::Q(x + y),
            _ => panic!("mixed fields"),
        }
    }

    pub fn mul(&self, a: &V, b: &V) -> V {
        match (self, a, b) {
            (K::P(p), V::P(x), V::P(y)) => V::P(x * y % p),
            (K::Q, V::Q(x), V::Q(y)) => V::Q(x * y),
            _ => panic!("mixed fields"),
        }
    }

    pub fn is_zero(&self, a: &V) -> bool {
        match a {
            V::P(x) => *x == 0,
            V::Q(x) => x.is_zero(),
        }
    }
}

/// A dense element of `A^{⊗k}`: `n^k` coefficients, leg 0 most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct T {
    pub arity: usize,
    pub data: Vec<V>,
}

pub struct Dense {
    pub k: K,
    pub n: usize,
    /// `m[(i*n + j)*n + l]`: coefficient of `e_l` in `e_i e_j`.
    m: Vec<V>,
    pub unit: T,
    /// `delta[i]`: `Δ(e_i)` as a 2-tensor.
    delta: Vec<T>,
    eps: Vec<V>,
    /// `s[i]`: `S(e_i)`.
    s: Vec<T>,
    pub phi: T,
    pub phi_inv: T,
    pub alpha: T,
    pub beta: T,
    pub r: Option<T>,
}

/// Maps applied leg by leg in [`Dense::apply_legs`].
#[derive(Clone, Copy, Debug)]
pub enum Leg {
    Id,
    S,
    Eps,
    D,
    Dcop,
}

impl Dense {
    /// Reads `d` through its document. `phi_inv` is taken from the caller and
    /// checked here by dense multiplication.
    pub fn new(d: &QuasiHopfDatum, phi_inv: &SparseTensor) -> Dense {
        let doc: DatumJson = d.to_json();
        let k = match doc.field {
            qhopf::Field::Prime { p } => K::P(p as i128),
            qhopf::Field::Rational => K::Q,
        };
        let n = doc.dim;
        let mut m = vec![k.zero(); n * n * n];
        for (i, j, l, c) in &doc.product {
            m[(i * n + j) * n + l] = k.parse(c);
        }
        let mut delta = vec![T::zero(&k, n, 2); n];
        for (i, a, b, c) in &doc.delta {
            delta[*i].data[a * n + b] = k.parse(c);
        }
        let mut s = vec![T::zero(&k, n, 1); n];
        for (i, j, c) in &doc.antipode {
            s[*i].data[*j] = k.parse(c);
        }
        let eps = doc.epsilon.iter().map(|c| k.parse(c)).collect();
        let tj = |t: &TensorJson| T::from_json(&k, n, t);
        let mut dense = Dense {
            k,
            n,
            m,
            unit: tj(&doc.unit),
            delta,
            eps,
            s,
            phi: tj(&doc.phi),
            phi_inv: T::zero(&k, n, 3),
            alpha: tj(&doc.alpha),
            beta: tj(&doc.beta),
            r: doc.r.as_ref().map(tj),
        };
        let pinv = dense.import(phi_inv);
        let one3 = dense.one(3);
        assert_eq!(dense.mult(&dense.phi, &pinv), one3, "supplied Φ⁻¹ is not an inverse");
        dense.phi_inv = pinv;
        dense
    }

    pub fn import(&self, t: &SparseTensor) -> T {
        let mut out = T::zero(&self.k, self.n, t.arity());
        for (idx, c) in t.iter() {
            out.data[self.flat(&idx)] = self.k.parse(&c.to_string());
        }
        out
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, i| acc * self.n + i)
    }

    fn unflat(&self, mut f: usize, arity: usize) -> Vec<usize> {
        let mut idx = vec![0; arity];
        for slot in idx.iter_mut().rev() {
            *slot = f % self.n;
            f /= self.n;
        }
        idx
    }

    pub fn one(&self, arity: usize) -> T {
        let mut t = T::scalar(&self.k, self.k.one());
        for _ in 0..arity {
            t = self.outer(&t, &self.unit);
        }
        t
    }

    pub fn basis(&self, i: usize) -> T {
        let mut t = T::zero(&self.k, self.n, 1);
        t.data[i] = self.k.one();
        t
    }

    pub fn outer(&self, a: &T, b: &T) -> T {
        let mut out = T::zero(&self.k, self.n, a.arity + b.arity);
        let nb = b.data.len();
        for (i, x) in a.data.iter().enumerate() {
            if self.k.is_zero(x) {
                continue;
            }
            for (j, y) in b.data.iter().enumerate() {
                if !self.k.is_zero(y) {
                    out.data[i * nb + j] = self.k.mul(x, y);
                }
            }
        }
        out
    }

    pub fn add_into(&self, acc: &mut T, t: &T, c: &V) {
        assert_eq!(acc.arity, t.arity);
        for (a, x) in acc.data.iter_mut().zip(&t.data) {
            if !self.k.is_zero(x) {
                *a = self.k.add(a, &self.k.mul(c, x));
            }
        }
    }

    /// Product in `A^{⊗k}`: every pair of index tuples, every leg through the
    /// structure constants.
    pub fn mult(&self, a: &T, b: &T) -> T {
        assert_eq!(a.arity, b.arity);
        let k = a.arity;
        let mut out = T::zero(&self.k, self.n, k);
        for (fi, x) in a.data.iter().enumerate() {
            if self.k.is_zero(x) {
                continue;
            }
            let ii = self.unflat(fi, k);
            for (fj, y) in b.data.iter().enumerate() {
                if self.k.is_zero(y) {
                    continue;
                }
                let jj = self.unflat(fj, k);
                let mut term = T::scalar(&self.k, self.k.mul(x, y));
                for l in 0..k {
                    let mut leg = T::zero(&self.k, self.n, 1);
                    for t in 0..self.n {
                        leg.data[t] = self.m[(ii[l] * self.n + jj[l]) * self.n + t].clone();
                    }
                    term = self.outer(&term, &leg);
                }
                let one = self.k.one();
                self.add_into(&mut out, &term, &one);
            }
        }
        out
    }

    pub fn prod(&self, factors: &[&T]) -> T {
        let mut acc = factors[0].clone();
        for f in &factors[1..] {
            acc = self.mult(&acc, f);
        }
        acc
    }

    fn leg_image(&self, leg: Leg, i: usize) -> T {
        match leg {
            Leg::Id => self.basis(i),
            Leg::S => self.s[i].clone(),
            Leg::Eps => T::scalar(&self.k, self.eps[i].clone()),
            Leg::D => self.delta[i].clone(),
            Leg::Dcop => {
                let mut t = T::zero(&self.k, self.n, 2);
                for a in 0..self.n {
                    for b in 0..self.n {
                        t.data[b * self.n + a] = self.delta[i].data[a * self.n + b].clone();
                    }
                }
                t
            }
        }
    }

    /// `(f₁ ⊗ … ⊗ f_k)(t)`, tuple by tuple.
    pub fn apply_legs(&self, t: &T, legs: &[Leg]) -> T {
        assert_eq!(legs.len(), t.arity);
        let out_arity: usize = legs
            .iter()
            .map(|l| match l {
                Leg::Eps => 0,
                Leg::Id | Leg::S => 1,
                Leg::D | Leg::Dcop => 2,
            })
            .sum();
        let mut out = T::zero(&self.k, self.n, out_arity);
        for (f, c) in t.data.iter().enumerate() {
            if self.k.is_zero(c) {
                continue;
            }
            let idx = self.unflat(f, t.arity);
            let mut term = T::scalar(&self.k, c.clone());
            for (l, i) in legs.iter().zip(&idx) {
                term = self.outer(&term, &self.leg_image(*l, *i));
            }
            let one = self.k.one();
            self.add_into(&mut out, &term, &one);
        }
        out
    }

    pub fn el_mul(&self, a: &T, b: &T) -> T {
        self.mult(a, b)
    }

    pub fn el_prod(&self, factors: &[&T]) -> T {
        self.prod(factors)
    }

    pub fn s(&self, a: &T) -> T {
        self.apply_legs(a, &[Leg::S])
    }

    pub fn d(&self, a: &T) -> T {
        self.apply_legs(a, &[Leg::D])
    }

    /// Nonzero entries of a 3-tensor as `(x, y, z, c)`.
    fn triples(&self, t: &T) -> Vec<(usize, usize, usize, V)> {
        self.entries(t).into_iter().map(|(i, c)| (i[0], i[1], i[2], c)).collect()
    }

    pub fn entries(&self, t: &T) -> Vec<(Vec<usize>, V)> {
        t.data
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.k.is_zero(c))
            .map(|(f, c)| (self.unflat(f, t.arity), c.clone()))
            .collect()
    }

    /// `γ = Σ S(X̄ᵢYⱼ) α Ȳᵢ Zⱼ₍₁₎ ⊗ S(Xⱼ) α Z̄ᵢ Zⱼ₍₂₎`.
    pub fn gamma(&self) -> T {
        let mut acc = T::zero(&self.k, self.n, 2);
        for (xb, yb, zb, c) in self.triples(&self.phi_inv) {
            for (x, y, z, d) in self.triples(&self.phi) {
                for (zz, e) in self.entries(&self.delta[z]) {
                    let left = self.el_prod(&[
                        &self.s(&self.el_mul(&self.basis(xb), &self.basis(y))),
                        &self.alpha,
                        &self.basis(yb),
                        &self.basis(zz[0]),
                    ]);
                    let right = self.el_prod(&[&self.s(&self.basis(x)), &self.alpha, &self.basis(zb), &self.basis(zz[1])]);
                    let coef = self.k.mul(&self.k.mul(&c, &d), &e);
                    self.add_into(&mut acc, &self.outer(&left, &right), &coef);
                }
            }
        }
        acc
    }

    /// `δ = Σ Xᵢ₍₁₎ X̄ⱼ β S(Zᵢ) ⊗ Xᵢ₍₂₎ Ȳⱼ β S(Yᵢ Z̄ⱼ)`.
    pub fn delta(&self) -> T {
        let mut acc = T::zero(&self.k, self.n, 2);
        for (x, y, z, c) in self.triples(&self.phi) {
            for (xb, yb, zb, d) in self.triples(&self.phi_inv) {
                for (xx, e) in self.entries(&self.delta[x]) {
                    let left = self.el_prod(&[&self.basis(xx[0]), &self.basis(xb), &self.beta, &self.s(&self.basis(z))]);
                    let right = self.el_prod(&[
                        &self.basis(xx[1]),
                        &self.basis(yb),
                        &self.beta,
                        &self.s(&self.el_mul(&self.basis(y), &self.basis(zb))),
                    ]);
                    let coef = self.k.mul(&self.k.mul(&c, &d), &e);
                    self.add_into(&mut acc, &self.outer(&left, &right), &coef);
                }
            }
        }
        acc
    }

    /// `F = Σ (S(X̄₍₂₎) ⊗ S(X̄₍₁₎)) γ Δ(Ȳ β S(Z̄))`.
    pub fn f(&self, gamma: &T) -> T {
        let mut acc = T::zero(&self.k, self.n, 2);
        for (xb, yb, zb, c) in self.triples(&self.phi_inv) {
            let w = self.d(&self.el_prod(&[&self.basis(yb), &self.beta, &self.s(&self.basis(zb))]));
            for (xx, e) in self.entries(&self.delta[xb]) {
                let left = self.outer(&self.s(&self.basis(xx[1])), &self.s(&self.basis(xx[0])));
                let term = self.prod(&[&left, gamma, &w]);
                self.add_into(&mut acc, &term, &self.k.mul(&c, &e));
            }
        }
        acc
    }

    /// `F⁻¹ = Σ Δ(S(X̄) α Ȳ) δ (S(Z̄₍₂₎) ⊗ S(Z̄₍₁₎))`.
    pub fn f_inv(&self, delta: &T) -> T {
        let mut acc = T::zero(&self.k, self.n, 2);
        for (xb, yb, zb, c) in self.triples(&self.phi_inv) {
            let w = self.d(&self.el_prod(&[&self.s(&self.basis(xb)), &self.alpha, &self.basis(yb)]));
            for (zz, e) in self.entries(&self.delta[zb]) {
                let right = self.outer(&self.s(&self.basis(zz[1])), &self.s(&self.basis(zz[0])));
                let term = self.prod(&[&w, delta, &right]);
                self.add_into(&mut acc, &term, &self.k.mul(&c, &e));
            }
        }
        acc
    }

    /// `u = Σ S(Ȳᵢ β S(Z̄ᵢ)) S(t_l) α s_l X̄ᵢ` for `R = Σ s_l ⊗ t_l`.
    pub fn u(&self) -> Option<T> {
        let r = self.r.as_ref()?;
        let mut acc = T::zero(&self.k, self.n, 1);
        for (xb, yb, zb, c) in self.triples(&self.phi_inv) {
            let head = self.s(&self.el_prod(&[&self.basis(yb), &self.beta, &self.s(&self.basis(zb))]));
            for (st, d) in self.entries(r) {
                let term = self.el_prod(&[
                    &head,
                    &self.s(&self.basis(st[1])),
                    &self.alpha,
                    &self.basis(st[0]),
                    &self.basis(xb),
                ]);
                self.add_into(&mut acc, &term, &self.k.mul(&c, &d));
            }
        }
        Some(acc)
    }
}

impl T {
    pub fn zero(k: &K, n: usize, arity: usize) -> T {
        T {
            arity,
            data: vec![k.zero(); n.pow(arity as u32)],
        }
    }

    pub fn scalar(_k: &K, c: V) -> T {
        T { arity: 0, data: vec![c] }
    }

    fn from_json(k: &K, n: usize, t: &TensorJson) -> T {
        let mut out = T::zero(k, n, t.arity);
        for (idx, c) in &t.entries {
            let f = idx.iter().fold(0, |acc, i| acc * n + i);
            out.data[f] = k.parse(c);
        }
        out
    }
}
