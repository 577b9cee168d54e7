//! Bundled demonstrations over library instances.

use divlog_core::acrl;
use divlog_core::divergences::{composability_on, BasicEndorelation, DivergenceSpec};
use divlog_core::domains::{ExtendedValue, Grade};
use divlog_core::instances::{isort, list, pointwise_counterexample, qsort};
use divlog_core::monads::{Carrier, Comp, KleisliTriple, Monad};
use divlog_core::report::Verdict;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use crate::report::{Report, Status};
use crate::{CliResult, Config};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Demo {
    /// Pointwise DP fails composability under postprocessing.
    PointwiseDp,
    /// The cost divergence between quicksort and insertion sort.
    SortCost,
}

pub const SORT_INPUTS: [[i64; 5]; 3] = [[1, 2, 3, 4, 5], [5, 4, 3, 2, 1], [3, 1, 4, 5, 2]];

pub fn run(demo: Demo, cfg: &Config, out: &mut Report) -> CliResult<()> {
    match demo {
        Demo::PointwiseDp => pointwise_dp(cfg, out),
        Demo::SortCost => sort_cost(cfg, out),
    }
}

/// `n/100` when the value has such a form, else the reduced fraction.
fn hundredths(v: &ExtendedValue) -> String {
    match v {
        ExtendedValue::Rational(q) => {
            let h = q * BigRational::from_integer(BigInt::from(100));
            if h.is_integer() {
                format!("{}/100", h.numer())
            } else {
                v.to_string()
            }
        }
        _ => v.to_string(),
    }
}

fn pointwise_dp(cfg: &Config, out: &mut Report) -> CliResult<()> {
    let spec = cfg.tune(DivergenceSpec::pw());
    let (mu1, mu2, f) = pointwise_counterexample();
    let (three, two) = (Carrier::numeric(3), Carrier::numeric(2));
    let m = Grade(ExtendedValue::int(2));
    let before = spec.eval(&m, &three, &mu1, &mu2)?;
    let (p1, p2) = (spec.monad.bind(&mu1, &|x| f.apply(x))?, spec.monad.bind(&mu2, &|x| f.apply(x))?);
    let after = spec.eval(&m, &two, &p1, &p2)?;
    out.add("pw_before", Status::Pass, format!("Δ^PW_ln2(μ₁, μ₂) = {before}"), json!({ "grade": m, "lhs": mu1, "rhs": mu2, "value": before }));
    out.add(
        "pw_after",
        Status::Pass,
        format!("Δ^PW_ln2(f♯μ₁, f♯μ₂) = {}", hundredths(&after)),
        json!({ "grade": m, "lhs": p1, "rhs": p2, "value": after }),
    );
    let grades = [(m, spec.grading.unit())];
    let (v, violations) = composability_on(&spec, &BasicEndorelation::Eq, &three, &two, &grades, &[mu1, mu2], &[f])?;
    let (status, summary) = match &v {
        Verdict::Refuted { witness, .. } => {
            (Status::Pass, format!("Eq-composability refuted: {} > {} + {}", hundredths(&witness.lhs), witness.rhs_first, witness.rhs_sup))
        }
        _ => (Status::Fail, "Eq-composability was not refuted".to_string()),
    };
    out.add("counterexample", status, summary, json!({ "verdict": v, "violations": violations }));
    Ok(())
}

fn cost_of(c: &Comp) -> String {
    match c {
        Comp::Cost(cc) => cc.cost.to_string(),
        other => other.to_string(),
    }
}

fn sort_cost(cfg: &Config, out: &mut Report) -> CliResult<()> {
    let spec = cfg.tune(DivergenceSpec::cost());
    for xs in SORT_INPUTS {
        let input = list(&xs);
        let (q, i) = (qsort(&input)?, isort(&input)?);
        let carrier = acrl::support(&Monad::Cost, &[&q, &i]);
        let v = spec.eval(&spec.grading.unit(), &carrier, &q, &i)?;
        let name = format!("sort_cost{xs:?}").replace(' ', "");
        let summary = format!("qsort {} comparisons, isort {}, C = {v}", cost_of(&q), cost_of(&i));
        out.add(name, Status::Pass, summary, json!({ "input": input, "qsort": q, "isort": i, "value": v }));
    }
    Ok(())
}
