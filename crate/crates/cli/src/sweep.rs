//! One-parameter sweeps over two-group scenarios.
//!
//! Grid points whose search space fits the caps are enumerated; the rest
//! fall back to the closed-form regime prediction, which carries no welfare
//! figures.

use std::fmt;

use netform_core::search::{SearchError, Survey};
use netform_core::thresholds::{classify_two_group_efficient, classify_two_group_stable};
use netform_core::Society;
use rayon::prelude::*;

use crate::error::CliError;
use crate::io::csv_string;
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    F12,
    S1,
    Delta,
    Cost,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::F12 => "F12",
            SweepParam::S1 => "s1",
            SweepParam::Delta => "delta",
            SweepParam::Cost => "cost",
        }
    }
}

impl std::str::FromStr for SweepParam {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "F12" | "f12" => Ok(SweepParam::F12),
            "s1" => Ok(SweepParam::S1),
            "delta" => Ok(SweepParam::Delta),
            "cost" => Ok(SweepParam::Cost),
            other => Err(CliError::Invalid(format!(
                "sweep parameter must be one of F12, s1, delta, cost; got {other:?}"
            ))),
        }
    }
}

/// Inclusive grid `from, from + step, ..., <= to`, values rounded to 12
/// decimals so that accumulated error never reaches the output.
pub fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if step.is_nan() || step <= 0.0 || !from.is_finite() || !to.is_finite() || to < from {
        return Err(CliError::Invalid(format!(
            "bad grid {from}..{to} step {step}"
        )));
    }
    let k = ((to - from) / step + 1e-9).floor() as usize;
    if k > 1_000_000 {
        return Err(CliError::Invalid(format!("grid has {k} points")));
    }
    Ok((0..=k)
        .map(|i| ((from + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Count {
    Exact(usize),
    Range(usize, usize),
}

impl Count {
    fn of(lo: usize, hi: usize) -> Self {
        if lo == hi {
            Count::Exact(lo)
        } else {
            Count::Range(lo, hi)
        }
    }

    fn span(counts: impl Iterator<Item = usize>) -> Option<Self> {
        counts
            .fold(None, |acc, k| match acc {
                None => Some((k, k)),
                Some((lo, hi)) => Some((lo.min(k), hi.max(k))),
            })
            .map(|(lo, hi)| Count::of(lo, hi))
    }

    pub fn bounds(&self) -> (usize, usize) {
        match *self {
            Count::Exact(k) => (k, k),
            Count::Range(lo, hi) => (lo, hi),
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Exact(k) => write!(f, "{k}"),
            Count::Range(lo, hi) => write!(f, "{lo}..{hi}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Enumerated,
    Predicted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub stable: Option<Count>,
    pub efficient: Option<Count>,
    pub stable_min_welfare: Option<f64>,
    pub efficient_welfare: Option<f64>,
    pub poa: Option<f64>,
    pub mode: Mode,
}

fn variant(base: &Scenario, param: SweepParam, value: f64) -> Result<Scenario, CliError> {
    let mut s = base.clone();
    match param {
        SweepParam::F12 => {
            if s.group_sizes.len() != 2 {
                return Err(CliError::Invalid(
                    "F12 sweeps need exactly two groups".into(),
                ));
            }
            s.f = vec![value];
        }
        SweepParam::S1 => {
            if s.group_sizes.len() != 2 || value.fract() != 0.0 || value < 0.0 {
                return Err(CliError::Invalid(
                    "s1 sweeps need two groups and integer sizes".into(),
                ));
            }
            let n = s.n();
            let s1 = value as usize;
            if s1 + 3 > n {
                return Err(CliError::Invalid(format!(
                    "s1 = {s1} leaves s2 = n - s1 below 3 (n = {n})"
                )));
            }
            s.group_sizes = vec![s1, n - s1];
        }
        SweepParam::Delta => s.delta = value,
        SweepParam::Cost => s.cost = value,
    }
    s.validate()?;
    Ok(s)
}

/// Enumerates or predicts one point.
pub fn evaluate(scenario: &Scenario) -> Result<SweepRow, CliError> {
    let society = scenario.society()?;
    match Survey::run(&scenario.search_space(), &society) {
        Ok(survey) => Ok(enumerated(&society, &survey)),
        Err(cap @ SearchError::CapExceeded { .. }) => predicted(scenario).ok_or(CliError::Cap(cap)),
    }
}

fn enumerated(society: &Society, survey: &Survey) -> SweepRow {
    let stable = survey.stable();
    SweepRow {
        value: f64::NAN,
        stable: Count::span(stable.iter().map(|(n, _)| society.inter_count(n))),
        efficient: Count::span(survey.argmax().iter().map(|n| society.inter_count(n))),
        stable_min_welfare: survey.min_stable_welfare(),
        efficient_welfare: Some(survey.best_welfare()),
        poa: survey.price_of_anarchy().ok().map(|p| p.value),
        mode: Mode::Enumerated,
    }
}

fn predicted(scenario: &Scenario) -> Option<SweepRow> {
    let (s1, s2, f12) = scenario.two_groups()?;
    let params = scenario.params().ok()?;
    let count = |p: netform_core::RegimePrediction| {
        let (lo, hi) = p.interconnections(s1, s2);
        Count::of(lo, hi)
    };
    Some(SweepRow {
        value: f64::NAN,
        stable: classify_two_group_stable(s1, s2, &params, f12)
            .ok()
            .map(count),
        efficient: classify_two_group_efficient(s1, s2, &params, f12)
            .ok()
            .map(count),
        stable_min_welfare: None,
        efficient_welfare: None,
        poa: None,
        mode: Mode::Predicted,
    })
}

/// Rows in grid order; points run in parallel.
pub fn sweep(
    base: &Scenario,
    param: SweepParam,
    values: &[f64],
) -> Result<Vec<SweepRow>, CliError> {
    values
        .par_iter()
        .map(|&v| {
            let mut row = evaluate(&variant(base, param, v)?)?;
            row.value = v;
            Ok(row)
        })
        .collect()
}

fn opt<T: fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

pub fn sweep_csv(param: SweepParam, rows: &[SweepRow]) -> Result<String, CliError> {
    let mut out = vec![[
        param.name(),
        "stable_count",
        "efficient_count",
        "stable_min_welfare",
        "efficient_welfare",
        "poa",
        "mode",
    ]
    .map(String::from)
    .to_vec()];
    for r in rows {
        out.push(vec![
            r.value.to_string(),
            opt(r.stable),
            opt(r.efficient),
            opt(r.stable_min_welfare),
            opt(r.efficient_welfare),
            opt(r.poa),
            match r.mode {
                Mode::Enumerated => "enumerated".into(),
                Mode::Predicted => "predicted".into(),
            },
        ]);
    }
    csv_string(&out)
}

/// Static line chart of the two count columns; ranges plot at their midpoint.
pub fn sweep_svg(param: SweepParam, rows: &[SweepRow]) -> String {
    let (w, h, pad) = (640.0, 400.0, 48.0);
    let mid = |c: Option<Count>| {
        c.map(|c| {
            let (lo, hi) = c.bounds();
            (lo + hi) as f64 / 2.0
        })
    };
    let xs: Vec<f64> = rows.iter().map(|r| r.value).collect();
    let (x0, x1) = (
        xs.first().copied().unwrap_or(0.0),
        xs.last().copied().unwrap_or(1.0),
    );
    let ymax = rows
        .iter()
        .flat_map(|r| [mid(r.stable), mid(r.efficient)])
        .flatten()
        .fold(1.0, f64::max);
    let sx = |x: f64| pad + (x - x0) / (x1 - x0).max(1e-12) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - y / ymax * (h - 2.0 * pad);
    let line = |pick: &dyn Fn(&SweepRow) -> Option<f64>, colour: &str| {
        let pts: Vec<String> = rows
            .iter()
            .filter_map(|r| pick(r).map(|y| format!("{:.2},{:.2}", sx(r.value), sy(y))))
            .collect();
        format!(
            "<polyline fill=\"none\" stroke=\"{colour}\" stroke-width=\"2\" points=\"{}\"/>\n",
            pts.join(" ")
        )
    };
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <line x1=\"{pad}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{pad}\" y1=\"{pad}\" x2=\"{pad}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <text x=\"{cx}\" y=\"{ty}\" text-anchor=\"middle\">{name}</text>\n\
         <text x=\"{pad}\" y=\"{ly}\">interconnections (max {ymax})</text>\n",
        b = h - pad,
        r = w - pad,
        cx = w / 2.0,
        ty = h - 12.0,
        ly = pad - 12.0,
        name = param.name(),
    );
    svg += &line(&|r| mid(r.stable), "#1f77b4");
    svg += &line(&|r| mid(r.efficient), "#d62728");
    svg += "</svg>\n";
    svg
}
