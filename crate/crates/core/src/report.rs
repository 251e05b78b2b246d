//! Named identity checks with pass/fail/skipped status and a first witness.

use serde::Serialize;

use crate::error::Error;
use crate::scalar::{Field, Scalar};
use crate::tensor::SparseTensor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// First differing coordinate of a failed equality, or a free-form reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub left: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub right: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Witness {
    pub fn note(s: impl Into<String>) -> Self {
        Witness {
            index: None,
            left: None,
            right: None,
            note: Some(s.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn status(&self, name: &str) -> Option<Status> {
        self.get(name).map(|c| c.status)
    }

    pub fn push(&mut self, name: impl Into<String>, status: Status, witness: Option<Witness>) {
        self.checks.push(Check {
            name: name.into(),
            status,
            witness,
        });
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.push(name, Status::Pass, None);
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: Witness) {
        self.push(name, Status::Fail, Some(witness));
    }

    pub fn skip(&mut self, name: impl Into<String>, reason: impl Into<String>) {
        self.push(name, Status::Skipped, Some(Witness::note(reason)));
    }

    pub fn bool(&mut self, name: impl Into<String>, ok: bool, why: impl FnOnce() -> Witness) {
        if ok {
            self.pass(name)
        } else {
            self.fail(name, why())
        }
    }

    /// Records exact equality of two tensors, with the first differing
    /// multi-index as witness.
    pub fn equal(&mut self, name: impl Into<String>, left: &SparseTensor, right: &SparseTensor, field: Field) {
        match left.first_difference(right, field) {
            None => self.pass(name),
            Some((idx, l, r)) => self.fail(
                name,
                Witness {
                    index: Some(idx),
                    left: Some(l.to_string()),
                    right: Some(r.to_string()),
                    note: None,
                },
            ),
        }
    }

    pub fn equal_scalars(&mut self, name: impl Into<String>, left: &Scalar, right: &Scalar) {
        if left == right {
            self.pass(name)
        } else {
            self.fail(
                name,
                Witness {
                    index: None,
                    left: Some(left.to_string()),
                    right: Some(right.to_string()),
                    note: None,
                },
            )
        }
    }

    /// Records the outcome of a fallible computation: an error becomes a
    /// failure with the error message as note.
    pub fn record(&mut self, name: &str, result: Result<(), Error>) {
        if let Err(e) = result {
            self.fail(name, Witness::note(e.to_string()));
        }
    }

    /// Every basis-quantified identity: passes when all instances pass,
    /// otherwise reports the first failing basis element.
    pub fn for_basis(
        &mut self,
        name: &str,
        dim: usize,
        field: Field,
        mut sides: impl FnMut(usize) -> Result<(SparseTensor, SparseTensor), Error>,
    ) {
        for i in 0..dim {
            match sides(i) {
                Err(e) => {
                    self.fail(name, Witness::note(format!("basis element {i}: {e}")));
                    return;
                }
                Ok((l, r)) => {
                    if let Some((idx, a, b)) = l.first_difference(&r, field) {
                        self.fail(
                            name,
                            Witness {
                                index: Some(idx),
                                left: Some(a.to_string()),
                                right: Some(b.to_string()),
                                note: Some(format!("basis element {i}")),
                            },
                        );
                        return;
                    }
                }
            }
        }
        self.pass(name)
    }

    /// Runs a block of checks; an error aborts the block and is recorded as a
    /// failure under `name`.
    pub fn guarded(&mut self, name: &str, body: impl FnOnce(&mut CheckReport) -> Result<(), Error>) {
        if let Err(e) = body(self) {
            self.fail(name, Witness::note(e.to_string()));
        }
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }

    /// Prefixes every check name.
    pub fn prefixed(mut self, prefix: &str) -> CheckReport {
        for c in &mut self.checks {
            c.name = format!("{prefix}{}", c.name);
        }
        self
    }

    /// Marks every listed check as skipped with a reason.
    pub fn skip_all(&mut self, names: &[&str], reason: &str) {
        for n in names {
            self.skip(*n, reason);
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            out.push_str(&format!("{tag:4}  {}", c.name));
            if let Some(w) = &c.witness {
                if let Some(idx) = &w.index {
                    out.push_str(&format!("  at {idx:?}"));
                }
                if let (Some(l), Some(r)) = (&w.left, &w.right) {
                    out.push_str(&format!("  {l} != {r}"));
                }
                if let Some(n) = &w.note {
                    out.push_str(&format!("  ({n})"));
                }
            }
            out.push('\n');
        }
        out
    }
}
