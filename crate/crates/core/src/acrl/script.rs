//! JSON forms of scenarios and derivation scripts.

use serde::{Deserialize, Serialize};

use super::{Assertion, Judgment, Logic};
use crate::domains::{ExtendedValue, Grade};
use crate::error::{Error, Pos, Result};

pub const SCENARIO_SCHEMA: &str = "divlog.scenario/1";
pub const SCRIPT_SCHEMA: &str = "divlog.derivation/1";

/// Program text, inline or as a list of lines.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Source {
    Text(String),
    Lines(Vec<String>),
}

impl Source {
    pub fn text(&self) -> String {
        match self {
            Source::Text(s) => s.clone(),
            Source::Lines(ls) => ls.join("\n"),
        }
    }
}

fn default_true() -> String {
    "true".into()
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AssertSpec {
    #[serde(default)]
    pub left: Vec<(String, String)>,
    #[serde(default)]
    pub right: Vec<(String, String)>,
    #[serde(default = "default_true")]
    pub assert: String,
}

impl Default for AssertSpec {
    fn default() -> Self {
        AssertSpec { left: Vec::new(), right: Vec::new(), assert: default_true() }
    }
}

/// A grade together with a budget, both as text.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GradeSpec {
    pub m: String,
    pub v: String,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct JudgmentSpec {
    #[serde(default)]
    pub pre: AssertSpec,
    pub left: String,
    pub right: String,
    pub post: String,
    /// When present, `post` is lifted at this grade and budget.
    #[serde(default)]
    pub grade: Option<GradeSpec>,
}

/// A single judgment to be checked semantically.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    pub program: Source,
    pub divergence: String,
    pub judgment: JudgmentSpec,
    #[serde(default)]
    pub limit: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Fundamental property on two computations (the effectful-operation axiom).
    Effect,
    /// Shift invariance of reflexive divergences.
    Slide,
    /// A judgment checked directly against its definition.
    Semantic,
    /// Replacing terms by semantically equal ones.
    Equiv,
    /// Strengthening the precondition, weakening the postcondition.
    Consequence,
    /// Raising grade and budget.
    Weaken,
    Return,
    Bind,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub id: String,
    pub rule: Rule,
    #[serde(default)]
    pub from: Vec<String>,
    #[serde(default)]
    pub pre: Option<AssertSpec>,
    #[serde(default)]
    pub left: Option<String>,
    #[serde(default)]
    pub right: Option<String>,
    #[serde(default)]
    pub post: Option<String>,
    /// Grade for `effect`.
    #[serde(default)]
    pub m: Option<String>,
    /// Shift for `slide`.
    #[serde(default)]
    pub shift: Option<String>,
    /// Bound variables for `bind`.
    #[serde(default)]
    pub binders: Option<(String, String)>,
    /// Target for `weaken`.
    #[serde(default)]
    pub to: Option<GradeSpec>,
    /// A claimed conclusion grade; the checker recomputes and compares.
    #[serde(default)]
    pub grade: Option<GradeSpec>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Script {
    pub schema: String,
    pub program: Source,
    pub divergence: String,
    pub steps: Vec<Step>,
    #[serde(default)]
    pub goal: Option<JudgmentSpec>,
}

fn from_json<T: for<'de> Deserialize<'de>>(src: &str, schema: &str, get: impl Fn(&T) -> &str) -> Result<T> {
    let v: T = serde_json::from_str(src).map_err(|e| Error::Parse { pos: Pos { line: e.line(), col: e.column() }, msg: e.to_string() })?;
    if get(&v) != schema {
        return Err(Error::Parse { pos: Pos::default(), msg: format!("expected schema `{schema}`, found `{}`", get(&v)) });
    }
    Ok(v)
}

impl Scenario {
    pub fn from_json(src: &str) -> Result<Scenario> {
        from_json(src, SCENARIO_SCHEMA, |s: &Scenario| &s.schema)
    }

    pub fn logic(&self) -> Result<Logic> {
        Logic::parse(&self.program.text(), &self.divergence)
    }
}

impl Script {
    pub fn from_json(src: &str) -> Result<Script> {
        from_json(src, SCRIPT_SCHEMA, |s: &Script| &s.schema)
    }

    pub fn logic(&self) -> Result<Logic> {
        Logic::parse(&self.program.text(), &self.divergence)
    }
}

impl Logic {
    pub fn assert_spec(&self, a: &AssertSpec) -> Result<Assertion> {
        let (l, r) = (self.context(&a.left)?, self.context(&a.right)?);
        self.assertion(&l, &r, &a.assert)
    }

    pub fn grade_spec(&self, g: &GradeSpec) -> Result<(Grade, ExtendedValue)> {
        let m = self.spec.grading.parse(&g.m)?;
        let v = ExtendedValue::parse(&g.v).ok_or_else(|| Error::Parse { pos: Pos::default(), msg: format!("bad budget `{}`", g.v) })?;
        if !self.spec.domain.contains(&v) {
            return Err(Error::DomainMismatch { domain: self.spec.domain.name(), value: v.to_string() });
        }
        Ok((m, v))
    }

    pub fn judgment_spec(&self, j: &JudgmentSpec) -> Result<Judgment> {
        let pre = self.assert_spec(&j.pre)?;
        let post = if j.grade.is_some() { "true" } else { j.post.as_str() };
        let mut out = self.judgment(pre, &j.left, &j.right, post)?;
        if let Some(g) = &j.grade {
            let (m, v) = self.grade_spec(g)?;
            let (super::Ty::T(a), super::Ty::T(b)) = (out.left_ty.clone(), out.right_ty.clone()) else {
                return Err(Error::PreconditionFailed("a graded postcondition needs computations on both sides".into()));
            };
            let inner = self.assertion(&[("u".into(), (*a).clone())], &[("d".into(), (*b).clone())], &j.post)?;
            out.post.form = self.make_lift(m, v, inner.form, (*a, *b), ("u".into(), "d".into()))?;
        }
        Ok(out)
    }
}
