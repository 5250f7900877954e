//! Subcommand bodies. Each returns the text it would print so that tests
//! can check reports without spawning the binary.

use std::fmt::Write as _;
use std::path::Path;

use netform_core::dynamics::{run, DynamicsError};
use netform_core::search::Survey;
use netform_core::stability::StabilityError;
use netform_core::thresholds::{
    classify_two_group_efficient, classify_two_group_stable, efficient_boundaries,
    minimally_connected_sufficient, overlap_intervals, stability_efficiency_overlap,
    stable_boundaries, GroupGraph, RegimePrediction, ThresholdError,
};
use netform_core::{
    efficient_search, enumerate_stable, DynamicsTrace, Network, PairSelector, Society,
};

use crate::error::CliError;
use crate::io::{csv_string, edge_list, write_text};
use crate::scenario::Scenario;

fn fmt_list(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.6}"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn eval(scenario: &Scenario, net: &Network) -> Result<String, CliError> {
    let society = scenario.society()?;
    let mut out = String::from("node,group,degree,payoff\n");
    for (i, u) in society.payoffs(net).iter().enumerate() {
        writeln!(
            out,
            "{i},{},{},{u}",
            society.partition().group_of(i),
            net.degree(i)
        )
        .unwrap();
    }
    writeln!(out, "welfare,{}", society.welfare(net)).unwrap();
    writeln!(
        out,
        "intra_links,{}\ninter_links,{}",
        society.intra_count(net),
        society.inter_count(net)
    )
    .unwrap();
    Ok(out)
}

fn describe(p: &RegimePrediction) -> String {
    match p.tie {
        Some((a, b)) => format!(
            "{} at {:.6} ({} | {})",
            p.kind.label(),
            p.lower,
            a.label(),
            b.label()
        ),
        None => format!("{} on ({:.6}, {:.6})", p.kind.label(), p.lower, p.upper),
    }
}

fn scope(e: ThresholdError) -> CliError {
    CliError::Invalid(format!("outside the closed-form regimes: {e}"))
}

/// Two groups: both regimes, the overlap verdict and every boundary.
/// More groups: which star centres satisfy the minimal-connectivity check.
pub fn classify(scenario: &Scenario) -> Result<String, CliError> {
    let params = scenario.params()?;
    let mut out = String::new();
    if let Some((s1, s2, f12)) = scenario.two_groups() {
        let stable = classify_two_group_stable(s1, s2, &params, f12).map_err(scope)?;
        let efficient = classify_two_group_efficient(s1, s2, &params, f12).map_err(scope)?;
        writeln!(
            out,
            "groups: {s1} {s2}  F12 = {f12}  delta = {}  cost = {}",
            params.delta, params.cost
        )
        .unwrap();
        writeln!(out, "stable: {}", describe(&stable)).unwrap();
        writeln!(out, "efficient: {}", describe(&efficient)).unwrap();
        let overlap = stability_efficiency_overlap(s1, s2, &params, f12).map_err(scope)?;
        writeln!(
            out,
            "efficient structure known stable: {}",
            if overlap { "yes" } else { "no" }
        )
        .unwrap();
        let sb = stable_boundaries(s1, s2, &params).map_err(scope)?;
        let eb = efficient_boundaries(s1, s2, &params).map_err(scope)?;
        writeln!(out, "stable boundaries: {}", fmt_list(&sb)).unwrap();
        writeln!(out, "efficient boundaries: {}", fmt_list(&eb)).unwrap();
        let ov: Vec<String> = overlap_intervals(s1, s2, &params)
            .map_err(scope)?
            .iter()
            .map(|(a, b)| format!("[{a:.6}, {b:.6}]"))
            .collect();
        writeln!(out, "overlap intervals: {}", ov.join(" ")).unwrap();
        return Ok(out);
    }
    let society = scenario.society()?;
    let m = society.partition().m();
    if m < 2 {
        return Err(CliError::Invalid(
            "classification needs at least two groups".into(),
        ));
    }
    writeln!(out, "groups: {:?}", scenario.group_sizes).unwrap();
    for centre in 0..m {
        let star = GroupGraph::star(m, centre).map_err(CliError::invalid)?;
        let ok = minimally_connected_sufficient(
            &star,
            society.coordination(),
            society.partition(),
            &params,
        )
        .map_err(scope)?;
        writeln!(
            out,
            "star centred on group {centre}: {}",
            if ok { "stable" } else { "not certified" }
        )
        .unwrap();
    }
    Ok(out)
}

pub fn dynamics(
    scenario: &Scenario,
    society: &Society,
    e0: &Network,
    selector: &PairSelector,
) -> Result<DynamicsTrace, CliError> {
    run(
        e0,
        selector,
        society,
        scenario.max_steps,
        scenario.convergence_window,
    )
    .map_err(|e| match e {
        DynamicsError::InvalidPair(i, j) => {
            CliError::Invalid(format!("script pair ({i}, {j}) out of range"))
        }
        other => CliError::invalid(other),
    })
}

pub fn dynamics_summary(society: &Society, trace: &DynamicsTrace) -> String {
    let fin = &trace.final_network;
    let mut out = String::new();
    writeln!(out, "steps: {}", trace.steps.len()).unwrap();
    match trace.steps_to_convergence {
        Some(k) => writeln!(out, "converged: yes after {k} steps").unwrap(),
        None => writeln!(out, "converged: no").unwrap(),
    }
    writeln!(
        out,
        "final: {} intra links, {} interconnections, welfare {}",
        society.intra_count(fin),
        society.inter_count(fin),
        society.welfare(fin)
    )
    .unwrap();
    out
}

/// Writes `network_NNNN.txt` per network and `summary.csv` into `dir`.
pub fn write_networks(dir: &Path, society: &Society, nets: &[Network]) -> Result<(), CliError> {
    let mut rows = vec![["index", "edge_count", "inter_count", "welfare", "file"]
        .map(String::from)
        .to_vec()];
    for (k, net) in nets.iter().enumerate() {
        let file = format!("network_{k:04}.txt");
        write_text(&dir.join(&file), &edge_list(net))?;
        rows.push(vec![
            k.to_string(),
            net.edge_count().to_string(),
            society.inter_count(net).to_string(),
            society.welfare(net).to_string(),
            file,
        ]);
    }
    write_text(&dir.join("summary.csv"), &csv_string(&rows)?)
}

fn count_report(kind: &str, space: &str, society: &Society, nets: &[Network]) -> String {
    let mut counts: Vec<usize> = nets.iter().map(|n| society.inter_count(n)).collect();
    counts.sort_unstable();
    counts.dedup();
    format!(
        "{kind} networks in the {space} space: {}\ninterconnection counts: {counts:?}\n",
        nets.len()
    )
}

pub fn stable(scenario: &Scenario, out: Option<&Path>) -> Result<String, CliError> {
    let society = scenario.society()?;
    let space = scenario.search_space();
    let nets = enumerate_stable(&space, &society)?;
    if let Some(dir) = out {
        write_networks(dir, &society, &nets)?;
    }
    Ok(count_report("stable", space.label(), &society, &nets))
}

pub fn efficient(scenario: &Scenario, out: Option<&Path>) -> Result<String, CliError> {
    let society = scenario.society()?;
    let space = scenario.search_space();
    let set = efficient_search(&space, &society)?;
    if let Some(dir) = out {
        write_networks(dir, &society, &set.argmax)?;
    }
    Ok(format!(
        "{}maximum welfare: {}\n",
        count_report("efficient", space.label(), &society, &set.argmax),
        set.best_welfare
    ))
}

pub fn poa(scenario: &Scenario) -> Result<String, CliError> {
    let society = scenario.society()?;
    let survey = Survey::run(&scenario.search_space(), &society)?;
    let p = survey.price_of_anarchy().map_err(|e| match e {
        StabilityError::Search(s) => CliError::Cap(s),
        other => CliError::invalid(other),
    })?;
    Ok(format!(
        "space: {}\nnetworks explored: {}\nstable networks: {}\nmax welfare: {}\nmin stable welfare: {}\nprice of anarchy: {}\n",
        survey.space_label(),
        survey.explored(),
        p.stable_count,
        p.max_welfare,
        p.min_stable_welfare,
        p.value
    ))
}
