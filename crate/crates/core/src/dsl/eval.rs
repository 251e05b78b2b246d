use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use super::{parse, split_suffix, Expr, Index, Leg, Stmt};
use crate::datum::QuasiHopf;
use crate::derived::{big_f, coopposite, modify_antipode, op_cop};
use crate::error::{Error, Result};
use crate::quasitriangular::drinfeld_u;
use crate::report::{CheckReport, Status, Witness};
use crate::ribbon::rtwist_elements;
use crate::tensor::{self, LegMap, SparseTensor};
use crate::twisting::{twist, Twist};

type Lazy = OnceLock<std::result::Result<QuasiHopf, Error>>;

/// What a datum, an optional twist and an optional antipode modifier give
/// names to.
pub struct Env<'a> {
    q: &'a QuasiHopf,
    twist: Option<Twist>,
    modifier: Option<(SparseTensor, SparseTensor)>,
    twisted: Lazy,
    modified: Lazy,
    cop: Lazy,
    opcop: Lazy,
}

impl<'a> Env<'a> {
    pub fn new(q: &'a QuasiHopf) -> Self {
        Env {
            q,
            twist: None,
            modifier: None,
            twisted: OnceLock::new(),
            modified: OnceLock::new(),
            cop: OnceLock::new(),
            opcop: OnceLock::new(),
        }
    }

    /// Makes `T`, `Tinv` and every `…_T` name available.
    pub fn with_twist(mut self, tw: Twist) -> Self {
        self.twist = Some(tw);
        self.twisted = OnceLock::new();
        self
    }

    /// Makes `x`, `xinv` and every `…_x` name available. `x` must be
    /// invertible.
    pub fn with_modifier(mut self, x: SparseTensor) -> Result<Self> {
        let x_inv = self.q.invert(&x)?;
        self.modifier = Some((x, x_inv));
        self.modified = OnceLock::new();
        Ok(self)
    }

    pub fn datum(&self) -> &QuasiHopf {
        self.q
    }

    fn derived(&self, suffix: &str) -> Result<&QuasiHopf> {
        let q = self.q;
        let cell = match suffix {
            "" => return Ok(q),
            "_T" => {
                let tw = self.twist.as_ref().ok_or_else(|| Error::UndefinedName("twisted datum".into()))?;
                self.twisted.get_or_init(|| twist(q, tw))
            }
            "_x" => {
                let (x, _) = self.modifier.as_ref().ok_or_else(|| Error::UndefinedName("modified datum".into()))?;
                self.modified.get_or_init(|| modify_antipode(q, x))
            }
            "_cop" => self.cop.get_or_init(|| coopposite(q)),
            "_opcop" => self.opcop.get_or_init(|| op_cop(q)),
            _ => unreachable!("unknown suffix {suffix}"),
        };
        cell.as_ref().map_err(Clone::clone)
    }

    fn lookup(&self, name: &str) -> Result<SparseTensor> {
        let undefined = || Error::UndefinedName(name.to_string());
        let (base, suffix) = split_suffix(name);
        let q = self.derived(suffix).map_err(|e| match e {
            Error::UndefinedName(_) => undefined(),
            e => e,
        })?;
        if let Some(k) = base.strip_prefix("one_") {
            return match k.parse::<usize>() {
                Ok(k) if (1..=4).contains(&k) => Ok(q.one(k)),
                _ => Err(undefined()),
            };
        }
        let plain = suffix.is_empty();
        Ok(match base {
            "Phi" => q.phi().clone(),
            "PhiInv" => q.phi_inv()?.clone(),
            "R" => q.r()?.clone(),
            "Rinv" => q.r_inv()?.clone(),
            "Rp" => tensor::flip(q.r()?, 0, 1)?,
            "F" => big_f(q)?.f.clone(),
            "Finv" => big_f(q)?.f_inv.clone(),
            "Fp" => tensor::flip(&big_f(q)?.f, 0, 1)?,
            "gamma" => big_f(q)?.gamma.clone(),
            "delta" => big_f(q)?.delta.clone(),
            "alpha" => q.alpha().clone(),
            "beta" => q.beta().clone(),
            "u" => drinfeld_u(q)?.u.clone(),
            "uinv" => drinfeld_u(q)?.u_inv.clone(),
            "utilde" => drinfeld_u(q)?
                .u_tilde
                .clone()
                .ok_or_else(|| Error::InternalInconsistency("ũ missing".into()))?,
            "uhat" => rtwist_elements(q)?.u_hat.clone(),
            "uhatinv" => rtwist_elements(q)?.u_hat_inv.clone(),
            "ucheck" => rtwist_elements(q)?.u_check.clone(),
            "ucheckinv" => rtwist_elements(q)?.u_check_inv.clone(),
            "ahat" => rtwist_elements(q)?.alpha_hat.clone(),
            "bhat" => rtwist_elements(q)?.beta_hat.clone(),
            "acheck" => rtwist_elements(q)?.alpha_check.clone(),
            "bcheck" => rtwist_elements(q)?.beta_check.clone(),
            "v" => q.v()?.clone(),
            "T" if plain => self.twist.as_ref().ok_or_else(undefined)?.t.clone(),
            "Tinv" if plain => self.twist.as_ref().ok_or_else(undefined)?.t_inv.clone(),
            "x" if plain => self.modifier.as_ref().ok_or_else(undefined)?.0.clone(),
            "xinv" if plain => self.modifier.as_ref().ok_or_else(undefined)?.1.clone(),
            _ => return Err(undefined()),
        })
    }

    fn eval(&self, e: &Expr, vars: &BTreeMap<String, usize>) -> Result<SparseTensor> {
        let q = self.q;
        let field = q.field();
        let n = q.dim();
        match e {
            Expr::Name(name) => self.lookup(name),
            Expr::Scalar(s) => Ok(q.scalar(field.parse(s)?)),
            Expr::Basis(idx) => {
                let i = match idx {
                    Index::Lit(i) => *i,
                    Index::Var(v) => *vars.get(v).ok_or_else(|| Error::UndefinedName(v.clone()))?,
                };
                if i >= n {
                    return Err(Error::Shape(format!("basis({i}) in dimension {n}")));
                }
                Ok(q.basis(i))
            }
            Expr::Inv(e) => {
                let t = self.eval(e, vars)?;
                if t.arity() == 0 {
                    Ok(q.scalar(t.as_scalar(field).inv()?))
                } else {
                    q.invert(&t)
                }
            }
            Expr::Flip(inner, i, j) => {
                e.arity()?;
                tensor::flip(&self.eval(inner, vars)?, *i, *j)
            }
            Expr::Map(legs, inner) => {
                e.arity()?;
                let t = self.eval(inner, vars)?;
                let maps: Vec<LegMap> = legs
                    .iter()
                    .map(|l| match l {
                        Leg::Id => LegMap::Identity,
                        Leg::S => LegMap::Antipode,
                        Leg::Sinv => LegMap::AntipodeInverse,
                        Leg::Eps => LegMap::Counit,
                        Leg::D => LegMap::Coproduct,
                        Leg::Dcop => LegMap::CoproductCop,
                    })
                    .collect();
                q.apply_legs(&t, &maps)
            }
            Expr::Perm(p, inner) => {
                e.arity()?;
                self.eval(inner, vars)?.permute(p)
            }
            Expr::Mul(groups, inner) => {
                e.arity()?;
                let t = self.eval(inner, vars)?;
                let sizes = if groups.is_empty() { vec![t.arity()] } else { groups.clone() };
                let mut start = 0;
                let legs: Vec<Vec<usize>> = sizes
                    .iter()
                    .map(|&k| {
                        start += k;
                        (start - k..start).collect()
                    })
                    .collect();
                let refs: Vec<&[usize]> = legs.iter().map(Vec::as_slice).collect();
                q.contract(&[&t], &refs)
            }
            Expr::Prod(a, b) => {
                e.arity()?;
                let (x, y) = (self.eval(a, vars)?, self.eval(b, vars)?);
                match (x.arity(), y.arity()) {
                    (0, _) => Ok(y.scale(&x.as_scalar(field))),
                    (_, 0) => Ok(x.scale(&y.as_scalar(field))),
                    _ => q.mult(&x, &y),
                }
            }
            Expr::Tensor(a, b) => self.eval(a, vars)?.tensor(&self.eval(b, vars)?),
        }
    }
}

/// Result of evaluating a statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Tensor(SparseTensor),
    Verdict { holds: bool, witness: Option<Witness> },
}

/// Value of a closed term.
pub fn evaluate(env: &Env, e: &Expr) -> Result<SparseTensor> {
    e.arity()?;
    let mut vars = BTreeSet::new();
    e.variables(&mut vars);
    if let Some(v) = vars.into_iter().next() {
        return Err(Error::Precondition(format!("free basis variable {v} in a term")));
    }
    env.eval(e, &BTreeMap::new())
}

/// A term evaluates to a tensor; an equation to a verdict, checked for
/// every assignment of its basis variables.
pub fn evaluate_stmt(env: &Env, s: &Stmt) -> Result<Value> {
    s.arity()?;
    let Some(rhs) = &s.rhs else {
        return evaluate(env, &s.lhs).map(Value::Tensor);
    };
    let vars: Vec<String> = s.variables().into_iter().collect();
    let n = env.q.dim();
    let field = env.q.field();
    let total = n.checked_pow(vars.len() as u32).ok_or(Error::BudgetExceeded {
        required: format!("{n}^{}", vars.len()),
        budget: u64::MAX,
    })?;
    for mut k in 0..total {
        let mut assign = BTreeMap::new();
        for v in vars.iter().rev() {
            assign.insert(v.clone(), k % n);
            k /= n;
        }
        let l = env.eval(&s.lhs, &assign)?;
        let r = env.eval(rhs, &assign)?;
        if let Some((idx, a, b)) = l.first_difference(&r, field) {
            let note = (!assign.is_empty()).then(|| {
                let parts: Vec<String> = assign.iter().map(|(v, i)| format!("{v}={i}")).collect();
                parts.join(", ")
            });
            return Ok(Value::Verdict {
                holds: false,
                witness: Some(Witness {
                    index: Some(idx),
                    left: Some(a.to_string()),
                    right: Some(b.to_string()),
                    note,
                }),
            });
        }
    }
    Ok(Value::Verdict {
        holds: true,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineStatus {
    Pass,
    Fail(Witness),
    /// A name the datum does not define, e.g. `R` on a quasi-Hopf algebra
    /// without R-matrix.
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusLine {
    pub line: usize,
    pub source: String,
    pub status: LineStatus,
}

impl CorpusLine {
    pub fn status(&self) -> Status {
        match self.status {
            LineStatus::Pass => Status::Pass,
            LineStatus::Fail(_) => Status::Fail,
            LineStatus::Skipped(_) => Status::Skipped,
        }
    }
}

fn run_line(env: &Env, stmt: &Stmt) -> Result<LineStatus> {
    match evaluate_stmt(env, stmt) {
        Ok(Value::Verdict { holds: true, .. }) => Ok(LineStatus::Pass),
        Ok(Value::Verdict { witness, .. }) => Ok(LineStatus::Fail(witness.unwrap_or_else(|| Witness::note("unequal")))),
        Ok(Value::Tensor(_)) => Ok(LineStatus::Fail(Witness::note("not an equation"))),
        Err(e @ (Error::UndefinedName(_) | Error::MissingR | Error::MissingV)) => Ok(LineStatus::Skipped(e.to_string())),
        Err(e @ (Error::Arity(_) | Error::Parse { .. })) => Err(e),
        Err(e) => Ok(LineStatus::Fail(Witness::note(e.to_string()))),
    }
}

/// Parses a corpus (one equation per line, `#` comments) and evaluates every
/// line, spreading lines over `jobs` threads. Parse and arity errors abort.
pub fn run_corpus(env: &Env, text: &str, jobs: usize) -> Result<Vec<CorpusLine>> {
    let mut stmts = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let src = raw.trim();
        if src.is_empty() || src.starts_with('#') {
            continue;
        }
        let stmt = parse(src).map_err(|e| match e {
            Error::Parse { column, reason, .. } => Error::Parse {
                line: k + 1,
                column: column + (raw.len() - raw.trim_start().len()),
                reason,
            },
            e => e,
        })?;
        stmt.arity().map_err(|e| match e {
            Error::Arity(m) => Error::Arity(format!("line {}: {m}", k + 1)),
            e => e,
        })?;
        stmts.push((k + 1, src.to_string(), stmt));
    }
    let jobs = jobs.max(1).min(stmts.len().max(1));
    let mut results: Vec<Option<Result<LineStatus>>> = vec![None; stmts.len()];
    std::thread::scope(|scope| {
        let chunks = results.chunks_mut(stmts.len().div_ceil(jobs).max(1));
        for (c, slot) in chunks.enumerate() {
            let stmts = &stmts;
            let base = c * stmts.len().div_ceil(jobs).max(1);
            scope.spawn(move || {
                for (off, out) in slot.iter_mut().enumerate() {
                    *out = Some(run_line(env, &stmts[base + off].2));
                }
            });
        }
    });
    stmts
        .into_iter()
        .zip(results)
        .map(|((line, source, _), r)| {
            Ok(CorpusLine {
                line,
                source,
                status: r.expect("every line evaluated")?,
            })
        })
        .collect()
}

/// A corpus run as a check report, one check per line.
pub fn corpus_report(lines: &[CorpusLine]) -> CheckReport {
    let mut rep = CheckReport::new();
    for l in lines {
        let name = format!("corpus:{}", l.line);
        match &l.status {
            LineStatus::Pass => rep.pass(name),
            LineStatus::Fail(w) => {
                let mut w = w.clone();
                w.note = Some(match w.note {
                    Some(n) => format!("{}: {n}", l.source),
                    None => l.source.clone(),
                });
                rep.fail(name, w)
            }
            LineStatus::Skipped(why) => rep.skip(name, why.clone()),
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::sweedler;
    use crate::dsl::parse_term;

    #[test]
    fn units_and_scalars() {
        let q = QuasiHopf::new(sweedler().unwrap()).unwrap();
        let env = Env::new(&q);
        assert_eq!(evaluate(&env, &parse_term("one_2 * one_2").unwrap()).unwrap(), q.one(2));
        let half = evaluate(&env, &parse_term("1/2 * alpha * 2").unwrap()).unwrap();
        assert_eq!(&half, q.alpha());
    }

    #[test]
    fn undefined_names() {
        let q = QuasiHopf::new(sweedler().unwrap()).unwrap();
        let env = Env::new(&q);
        assert!(matches!(evaluate(&env, &parse_term("F_T").unwrap()), Err(Error::UndefinedName(_))));
        assert!(matches!(evaluate(&env, &parse_term("T").unwrap()), Err(Error::UndefinedName(_))));
        assert!(matches!(evaluate(&env, &parse_term("Q").unwrap()), Err(Error::UndefinedName(_))));
        assert!(matches!(evaluate(&env, &parse_term("alpha_x").unwrap()), Err(Error::UndefinedName(_))));
    }

    #[test]
    fn perm_and_grouped_mul() {
        let q = QuasiHopf::new(sweedler().unwrap()).unwrap();
        let env = Env::new(&q);
        let holds = |src: &str| matches!(evaluate_stmt(&env, &parse(src).unwrap()).unwrap(), Value::Verdict { holds: true, .. });
        assert!(holds("perm[1,0](R) == Rp"));
        assert!(holds("perm[2,0,1](perm[1,2,0](Phi)) == Phi"));
        assert!(holds("mul[1,1](R) == R"));
        assert!(holds("mul[2](basis(1) # basis(2)) == basis(1) * basis(2)"));
        assert!(holds("mul[2,1](basis(i) # basis(j) # basis(1)) == (basis(i) * basis(j)) # basis(1)"));
    }

    #[test]
    fn derived_data() {
        let q = QuasiHopf::new(sweedler().unwrap()).unwrap();
        let env = Env::new(&q).with_modifier(q.basis(0)).unwrap();
        let holds = |src: &str| matches!(evaluate_stmt(&env, &parse(src).unwrap()).unwrap(), Value::Verdict { holds: true, .. });
        assert!(holds("alpha_x == alpha"));
        assert!(holds("x * xinv == one_1"));
        assert!(holds("Phi_cop == perm[2,1,0](PhiInv)"));
        assert!(holds("R_opcop == R"));
    }

    #[test]
    fn verdict_with_witness() {
        let q = QuasiHopf::new(sweedler().unwrap()).unwrap();
        let env = Env::new(&q);
        let v = evaluate_stmt(&env, &parse("basis(i) == basis(0)").unwrap()).unwrap();
        match v {
            Value::Verdict { holds: false, witness: Some(w) } => assert_eq!(w.note.as_deref(), Some("i=1")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn corpus_skips_comments_and_reports_lines() {
        let q = QuasiHopf::new(sweedler().unwrap()).unwrap();
        let env = Env::new(&q);
        let text = "# header\n\n  one_1 == one_1\n  # indented comment\nR_T == R\n";
        let lines = run_corpus(&env, text, 2).unwrap();
        assert_eq!(lines.len(), 2);
        assert_eq!((lines[0].line, &lines[0].status), (3, &LineStatus::Pass));
        assert!(matches!(lines[1].status, LineStatus::Skipped(_)));
        match run_corpus(&env, "one_1 == one_1\n  R * ", 1) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
