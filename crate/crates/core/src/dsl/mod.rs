//! A small language for stating tensor identities against a datum.
//!
//! ```text
//! stmt   := term ('==' term)?
//! term   := factor (('*' | '#') factor)*
//! factor := name | scalar | 'basis(' (int | ident) ')' | 'inv(' term ')'
//!         | 'flip(' term ',' int ',' int ')' | 'map[' legs '](' term ')'
//!         | 'perm[' ints '](' term ')' | 'mul(' term ')'
//!         | 'mul[' ints '](' term ')' | '(' term ')'
//! ```
//!
//! `*` is the product in `A^{⊗k}` (an arity-0 operand scales), `#` is the
//! tensor product. `perm[p₀,…]` puts input leg `pₖ` on output leg `k`.
//! `mul[n₁,…,n_r]` multiplies consecutive runs of `n₁, …, n_r` legs, so a
//! Sweedler-style sum becomes a `perm` followed by a `mul`; plain `mul`
//! multiplies all legs. Products are always taken in the base datum.
//!
//! A name may carry a suffix selecting a derived datum: `_T` (twisted by
//! `T`), `_x` (antipode modified by `x`), `_cop` and `_opcop`. An
//! identifier inside `basis(…)` is a variable ranging over the basis.

mod eval;
mod parse;

pub use eval::{corpus_report, evaluate, evaluate_stmt, run_corpus, CorpusLine, Env, LineStatus, Value};
pub use parse::{parse, parse_term};

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Leg {
    Id,
    S,
    Sinv,
    Eps,
    D,
    Dcop,
}

impl Leg {
    pub fn name(&self) -> &'static str {
        match self {
            Leg::Id => "id",
            Leg::S => "S",
            Leg::Sinv => "Sinv",
            Leg::Eps => "eps",
            Leg::D => "D",
            Leg::Dcop => "Dcop",
        }
    }

    pub fn from_name(s: &str) -> Option<Leg> {
        Some(match s {
            "id" => Leg::Id,
            "S" => Leg::S,
            "Sinv" => Leg::Sinv,
            "eps" => Leg::Eps,
            "D" => Leg::D,
            "Dcop" => Leg::Dcop,
            _ => return None,
        })
    }

    fn out_arity(&self) -> usize {
        match self {
            Leg::Eps => 0,
            Leg::D | Leg::Dcop => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Lit(usize),
    Var(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Name(String),
    Scalar(String),
    Basis(Index),
    Inv(Box<Expr>),
    Flip(Box<Expr>, usize, usize),
    Map(Vec<Leg>, Box<Expr>),
    Perm(Vec<usize>, Box<Expr>),
    /// Leg-group sizes; empty means all legs at once.
    Mul(Vec<usize>, Box<Expr>),
    Prod(Box<Expr>, Box<Expr>),
    Tensor(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stmt {
    pub lhs: Expr,
    pub rhs: Option<Expr>,
}

/// Suffixes selecting a derived datum.
pub const SUFFIXES: [&str; 4] = ["_T", "_x", "_cop", "_opcop"];

/// Splits a name into its base and datum suffix (`""` for the base datum).
pub fn split_suffix(name: &str) -> (&str, &str) {
    for suf in SUFFIXES {
        if let Some(b) = name.strip_suffix(suf) {
            return (b, suf);
        }
    }
    (name, "")
}

/// Arity of a named constant.
pub fn name_arity(name: &str) -> Option<usize> {
    let base = split_suffix(name).0;
    if let Some(k) = base.strip_prefix("one_") {
        return k.parse().ok().filter(|k| (1..=4).contains(k));
    }
    Some(match base {
        "Phi" | "PhiInv" => 3,
        "R" | "Rinv" | "Rp" | "F" | "Finv" | "Fp" | "gamma" | "delta" => 2,
        "T" | "Tinv" if base == name => 2,
        "x" | "xinv" if base == name => 1,
        "alpha" | "beta" | "u" | "uinv" | "uhat" | "uhatinv" | "ucheck" | "ucheckinv" | "utilde" | "ahat" | "bhat"
        | "acheck" | "bcheck" | "v" => 1,
        _ => return None,
    })
}

impl Expr {
    /// Inferred arity; products need equal arities unless one side is a
    /// scalar.
    pub fn arity(&self) -> Result<usize> {
        match self {
            Expr::Name(n) => name_arity(n).ok_or_else(|| Error::UndefinedName(n.clone())),
            Expr::Scalar(_) => Ok(0),
            Expr::Basis(_) => Ok(1),
            Expr::Inv(e) => e.arity(),
            Expr::Flip(e, i, j) => {
                let k = e.arity()?;
                if i == j || *i >= k || *j >= k {
                    return Err(Error::Arity(format!("flip({i},{j}) of an arity-{k} term")));
                }
                Ok(k)
            }
            Expr::Map(legs, e) => {
                let k = e.arity()?;
                if legs.len() != k {
                    return Err(Error::Arity(format!("{} leg maps for an arity-{k} term", legs.len())));
                }
                Ok(legs.iter().map(Leg::out_arity).sum())
            }
            Expr::Perm(p, e) => {
                let k = e.arity()?;
                let mut seen = vec![false; k];
                if p.len() != k || p.iter().any(|&i| i >= k || std::mem::replace(&mut seen[i], true)) {
                    return Err(Error::Arity(format!("perm{p:?} of an arity-{k} term")));
                }
                Ok(k)
            }
            Expr::Mul(groups, e) => {
                let k = e.arity()?;
                if k == 0 {
                    return Err(Error::Arity("mul of a scalar".into()));
                }
                if groups.is_empty() {
                    return Ok(1);
                }
                if groups.contains(&0) || groups.iter().sum::<usize>() != k {
                    return Err(Error::Arity(format!("mul{groups:?} of an arity-{k} term")));
                }
                Ok(groups.len())
            }
            Expr::Prod(a, b) => {
                let (x, y) = (a.arity()?, b.arity()?);
                match (x, y) {
                    (0, k) | (k, 0) => Ok(k),
                    _ if x == y => Ok(x),
                    _ => Err(Error::Arity(format!("product of arity {x} and arity {y}"))),
                }
            }
            Expr::Tensor(a, b) => Ok(a.arity()? + b.arity()?),
        }
    }

    /// Basis variables occurring in the expression.
    pub fn variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Basis(Index::Var(v)) => {
                out.insert(v.clone());
            }
            Expr::Inv(e) | Expr::Flip(e, _, _) | Expr::Map(_, e) | Expr::Perm(_, e) | Expr::Mul(_, e) => e.variables(out),
            Expr::Prod(a, b) | Expr::Tensor(a, b) => {
                a.variables(out);
                b.variables(out);
            }
            _ => {}
        }
    }

    /// Named constants occurring in the expression.
    pub fn names(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Name(n) => {
                out.insert(n.clone());
            }
            Expr::Inv(e) | Expr::Flip(e, _, _) | Expr::Map(_, e) | Expr::Perm(_, e) | Expr::Mul(_, e) => e.names(out),
            Expr::Prod(a, b) | Expr::Tensor(a, b) => {
                a.names(out);
                b.names(out);
            }
            _ => {}
        }
    }
}

impl Stmt {
    /// Arity of both sides, which must agree.
    pub fn arity(&self) -> Result<usize> {
        let k = self.lhs.arity()?;
        if let Some(r) = &self.rhs {
            let m = r.arity()?;
            if k != m {
                return Err(Error::Arity(format!("sides have arity {k} and {m}")));
            }
        }
        Ok(k)
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.lhs.variables(&mut out);
        if let Some(r) = &self.rhs {
            r.variables(&mut out);
        }
        out
    }

    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.lhs.names(&mut out);
        if let Some(r) = &self.rhs {
            r.names(&mut out);
        }
        out
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Name(n) => f.write_str(n),
            Expr::Scalar(s) => f.write_str(s),
            Expr::Basis(Index::Lit(i)) => write!(f, "basis({i})"),
            Expr::Basis(Index::Var(v)) => write!(f, "basis({v})"),
            Expr::Inv(e) => write!(f, "inv({e})"),
            Expr::Flip(e, i, j) => write!(f, "flip({e},{i},{j})"),
            Expr::Map(legs, e) => {
                let names: Vec<&str> = legs.iter().map(Leg::name).collect();
                write!(f, "map[{}]({e})", names.join(","))
            }
            Expr::Perm(p, e) => write!(f, "perm[{}]({e})", join(p)),
            Expr::Mul(g, e) if g.is_empty() => write!(f, "mul({e})"),
            Expr::Mul(g, e) => write!(f, "mul[{}]({e})", join(g)),
            Expr::Prod(a, b) | Expr::Tensor(a, b) => {
                let op = if matches!(self, Expr::Prod(..)) { "*" } else { "#" };
                write!(f, "{a} {op} ")?;
                if matches!(**b, Expr::Prod(..) | Expr::Tensor(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lhs)?;
        if let Some(r) = &self.rhs {
            write!(f, " == {r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_inference() {
        assert_eq!(parse("map[eps,id](R) == one_1").unwrap().arity().unwrap(), 1);
        assert_eq!(parse("R # R").unwrap().arity().unwrap(), 4);
        assert!(matches!(parse("R * Phi").unwrap().arity(), Err(Error::Arity(_))));
        assert!(matches!(parse("map[S](R)").unwrap().arity(), Err(Error::Arity(_))));
        assert_eq!(parse("2 * u").unwrap().arity().unwrap(), 1);
        assert_eq!(parse("map[D,id](R)").unwrap().arity().unwrap(), 3);
        assert_eq!(parse("mul[2,1](Phi)").unwrap().arity().unwrap(), 2);
        assert!(matches!(parse("mul[2,2](Phi)").unwrap().arity(), Err(Error::Arity(_))));
        assert!(matches!(parse("perm[0,0,1](Phi)").unwrap().arity(), Err(Error::Arity(_))));
        assert_eq!(parse("perm[2,0,1](Phi)").unwrap().arity().unwrap(), 3);
    }

    #[test]
    fn printing_round_trips() {
        for src in [
            "map[S,S](R) == Fp * R * inv(F)",
            "a # (b * c)",
            "flip(Phi,0,2) * basis(i) # one_1",
            "mul(map[S,id](map[D](basis(3))) # alpha) == -1/2 * alpha",
            "mul[2,1](perm[2,0,1](Phi_cop)) == F_x * one_1 # x",
        ] {
            let s = parse(src).unwrap();
            assert_eq!(parse(&s.to_string()).unwrap(), s, "{src}");
        }
    }

    #[test]
    fn twisted_names() {
        assert_eq!(name_arity("F_T"), Some(2));
        assert_eq!(name_arity("T"), Some(2));
        assert_eq!(name_arity("T_T"), None);
        assert_eq!(name_arity("one_5"), None);
        assert_eq!(name_arity("u_opcop"), Some(1));
        assert_eq!(name_arity("x_T"), None);
        assert_eq!(split_suffix("Phi_cop"), ("Phi", "_cop"));
    }
}
