use std::io::Write;
use std::path::{Path, PathBuf};

use apcascade::graph::{
    generate_complete, generate_sbm, homophily_estimate, load_network, network_for, network_paths, save_network,
    Network,
};
use apcascade::meanfield::{find_stationary, integrate, stability_probe, sup_distance, IntegrationConfig};
use apcascade::model::{
    classify_regime, consensus_reachable, effective_couplings, predict_limit_symmetric, tipping_boundaries,
    ModelParams, PopulationState, Regime,
};
use apcascade::scenario::{load_scenario, scenario_names, ScenarioOptions};
use apcascade::seed::{self, ROLE_GRAPH, ROLE_SIM};
use apcascade::sim::{ensemble_seeds, run_ensemble_with_seeds, EnsembleConfig, InitMode, Simulation};
use apcascade::sweep::{
    homophily_scan, phase_sweep, regime_changes, scan_to_csv_string, ScanOptions, SweepAxis, SweepParam, SweepSpec,
};
use apcascade::trajectory::Trajectory;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::*;
use crate::config::{check_unit, default_out, ensure_dir, resolve, write_file, write_meta, Overrides};
use crate::error::{usage, CliError, CliResult};
use crate::svg::{category_heatmap, line_chart, Series};

const BLUE: &str = "#1f5fbf";
const RED: &str = "#c8352b";

pub fn dispatch(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Simulate(a) => simulate(a, out),
        Command::Integrate(a) => integrate_cmd(a, out),
        Command::Classify(a) => classify(a, out),
        Command::ConsensusCheck(a) => consensus_check(a, out),
        Command::Sweep(a) => sweep(a, out),
        Command::Compare(a) => compare(a, out),
        Command::Scenario(a) => scenario(a, out),
        Command::GenGraph(a) => gen_graph(a, out),
        Command::InspectGraph(a) => inspect_graph(a, out),
    }
}

fn say(out: &mut dyn Write, line: impl AsRef<str>) -> CliResult<()> {
    writeln!(out, "{}", line.as_ref()).map_err(CliError::from)
}

fn out_default(command: &'static str) -> (&'static [&'static str], Value) {
    (&["out"], json!(default_out(command)))
}

fn check_theta(prefix: &str, s: &PopulationState) -> CliResult<()> {
    check_unit(&format!("{prefix}.theta_b"), s.theta_b)?;
    check_unit(&format!("{prefix}.theta_r"), s.theta_r)
}

fn trajectory_svg(title: &str, series: &[(&Trajectory, &str)]) -> String {
    let mut lines = Vec::new();
    for (traj, tag) in series {
        let dashed = !tag.is_empty();
        for (color, group, pick) in [
            (BLUE, "blue", 0usize),
            (RED, "red", 1usize),
        ] {
            lines.push((
                if tag.is_empty() { group.to_string() } else { format!("{group} {tag}") },
                color,
                dashed,
                traj.samples.iter().map(|s| (s.t, s.state.as_array()[pick])).collect::<Vec<_>>(),
            ));
        }
    }
    let series: Vec<Series> = lines
        .iter()
        .map(|(label, color, dashed, points)| Series {
            label,
            color,
            dashed: *dashed,
            points: points.clone(),
        })
        .collect();
    line_chart(title, "t", "fraction holding choice 1", &series)
}

// ---------------------------------------------------------------- simulate

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFiles {
    pub edges: PathBuf,
    pub parties: PathBuf,
}

fn default_n() -> usize {
    1000
}

fn default_horizon() -> f64 {
    30.0
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSettings {
    pub params: ModelParams,
    pub theta0: PopulationState,
    #[serde(default = "default_n")]
    pub n_nodes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphFiles>,
    #[serde(default)]
    pub init_mode: InitMode,
    #[serde(default = "default_horizon")]
    pub horizon_t: f64,
    #[serde(default)]
    pub record_stride: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub replicas: usize,
    pub out: PathBuf,
}

fn simulate(a: SimulateArgs, out: &mut dyn Write) -> CliResult<()> {
    let mut o = Overrides::default();
    a.params.apply(&mut o, &["params"]);
    apply_theta0(&mut o, &["theta0"], &a.theta0);
    o.set_opt(&["n_nodes"], a.n_nodes);
    if let (Some(e), Some(p)) = (&a.edges, &a.parties) {
        o.set(&["graph"], GraphFiles { edges: e.clone(), parties: p.clone() });
    }
    o.set_opt(&["init_mode"], a.init.map(InitArg::key));
    o.set_opt(&["horizon_t"], a.horizon);
    o.set_opt(&["record_stride"], a.stride);
    o.set_opt(&["seed"], a.seed);
    o.set_opt(&["replicas"], a.replicas);
    o.set_opt(&["out"], a.out);
    let mut s: SimulateSettings = resolve(a.config.as_deref(), "simulate", &[out_default("simulate")], o)?;
    check_theta("theta0", &s.theta0)?;
    if !(s.horizon_t > 0.0 && s.horizon_t.is_finite()) {
        return Err(usage(format!("config key `horizon_t`: {} must be positive", s.horizon_t)));
    }
    if s.replicas == 0 {
        return Err(usage("config key `replicas`: must be at least 1"));
    }

    let graph_seed = seed::derive(s.seed, ROLE_GRAPH);
    let net = match &s.graph {
        Some(g) => load_network(&g.edges, &g.parties)?,
        None => {
            if s.n_nodes < 2 {
                return Err(usage(format!("config key `n_nodes`: {} must be at least 2", s.n_nodes)));
            }
            network_for(&s.params, s.n_nodes, graph_seed)?
        }
    };
    s.n_nodes = net.len();
    let stride = s.record_stride.unwrap_or((net.len() as u64 / 100).max(1)).max(1);
    s.record_stride = Some(stride);
    ensure_dir(&s.out)?;

    let sim_seed = seed::derive(s.seed, ROLE_SIM);
    let mut seeds = json!({ "base": s.seed });
    if s.graph.is_none() && !net.is_complete() {
        seeds["graph"] = json!(graph_seed);
    }
    if s.replicas == 1 {
        let mut sim = Simulation::new(&net, s.params, s.theta0, s.init_mode, sim_seed);
        let traj = sim.run(s.horizon_t, stride);
        traj.write_with_sidecar(&s.out.join("trajectory.csv"))?;
        write_file(&s.out.join("trajectory.svg"), trajectory_svg("agent trajectory", &[(&traj, "")]).as_bytes())?;
        seeds["simulation"] = json!(sim_seed);
        let end = traj.terminal().unwrap();
        say(out, json!({ "out": s.out, "terminal": end, "samples": traj.len() }).to_string())?;
    } else {
        let cfg = EnsembleConfig {
            params: s.params,
            theta0: s.theta0,
            init_mode: s.init_mode,
            horizon_t: s.horizon_t,
            record_stride: stride,
        };
        let replica_seeds = ensemble_seeds(s.seed, s.replicas);
        let env = run_ensemble_with_seeds(&net, &cfg, &replica_seeds);
        write_file(&s.out.join("envelope.csv"), env.to_csv_string().as_bytes())?;
        let mut ends = String::from("seed,theta_b,theta_r\n");
        for (sd, e) in env.seeds.iter().zip(&env.endpoints) {
            ends.push_str(&format!("{sd},{},{}\n", e.theta_b, e.theta_r));
        }
        write_file(&s.out.join("endpoints.csv"), ends.as_bytes())?;
        let mean_b: Vec<_> = env.t.iter().zip(&env.mean).map(|(t, m)| (*t, m[0])).collect();
        let mean_r: Vec<_> = env.t.iter().zip(&env.mean).map(|(t, m)| (*t, m[1])).collect();
        let svg = line_chart(
            "ensemble mean",
            "t",
            "fraction holding choice 1",
            &[
                Series { label: "blue mean", color: BLUE, dashed: false, points: mean_b },
                Series { label: "red mean", color: RED, dashed: false, points: mean_r },
            ],
        );
        write_file(&s.out.join("envelope.svg"), svg.as_bytes())?;
        seeds["replicas"] = json!(replica_seeds);
        say(out, json!({ "out": s.out, "replicas": s.replicas }).to_string())?;
    }
    write_meta(&s.out, "simulate", &s, seeds)
}

// --------------------------------------------------------------- integrate

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrateSettings {
    pub params: ModelParams,
    pub theta0: PopulationState,
    #[serde(default)]
    pub integration: IntegrationConfig,
    #[serde(default)]
    pub probe: bool,
    pub out: PathBuf,
}

fn integrate_cmd(a: IntegrateArgs, out: &mut dyn Write) -> CliResult<()> {
    let mut o = Overrides::default();
    a.params.apply(&mut o, &["params"]);
    apply_theta0(&mut o, &["theta0"], &a.theta0);
    o.set_opt(&["integration", "step_h"], a.step);
    o.set_opt(&["integration", "horizon_t"], a.horizon);
    o.set_opt(&["integration", "record_every"], a.record_every);
    if a.probe {
        o.set(&["probe"], true);
    }
    o.set_opt(&["out"], a.out);
    let s: IntegrateSettings = resolve(a.config.as_deref(), "integrate", &[out_default("integrate")], o)?;
    check_theta("theta0", &s.theta0)?;
    s.integration.validate()?;
    ensure_dir(&s.out)?;

    let traj = integrate(s.theta0, &s.params, &s.integration)?;
    traj.write_with_sidecar(&s.out.join("trajectory.csv"))?;
    write_file(&s.out.join("trajectory.svg"), trajectory_svg("mean-field trajectory", &[(&traj, "")]).as_bytes())?;
    let mut report = find_stationary(&traj, &s.params, &s.integration)?;
    if s.probe && report.reached_at.is_some() {
        report.stability = Some(stability_probe(&report.point, &s.params, 1e-3)?);
    }
    let text = serde_json::to_string_pretty(&report).expect("report serialises") + "\n";
    write_file(&s.out.join("stationary.json"), text.as_bytes())?;
    write_meta(&s.out, "integrate", &s, json!({}))?;
    say(out, json!({ "out": s.out, "terminal": report.point, "reached_at": report.reached_at, "stability": report.stability }).to_string())
}

// ---------------------------------------------------------------- classify

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsOnly {
    params: ModelParams,
}

fn params_from_flags(p: &ParamArgs) -> CliResult<ModelParams> {
    let mut o = Overrides::default();
    p.apply(&mut o, &["params"]);
    let ParamsOnly { params } = resolve(None, "", &[], o)?;
    Ok(params)
}

fn limit_json(theta0: f64, p: &ModelParams) -> Value {
    predict_limit_symmetric(theta0, p).map_or(Value::Null, |s| json!(s))
}

fn classify(a: ClassifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let p = params_from_flags(&a.params)?;
    let regime = classify_regime(&p, a.tol)?;
    let c = effective_couplings(&p);
    let mut doc = json!({
        "regime": regime.label(),
        "params": p,
        "effective": c,
        "limits": {
            "theta0_above_half": limit_json(0.75, &p),
            "theta0_below_half": limit_json(0.25, &p),
        },
        "tipping_lines": tipping_boundaries(&p),
    });
    if let Some(t) = &a.theta0 {
        if t.len() == 2 && t[0] != t[1] {
            return Err(usage("--theta0: the predicted limit needs a symmetric start; use consensus-check otherwise"));
        }
        check_unit("theta0", t[0])?;
        doc["theta0"] = json!(t[0]);
        doc["predicted_limit"] = match regime {
            Regime::Boundary => Value::Null,
            _ => json!(predict_limit_symmetric(t[0], &p)?),
        };
    }
    say(out, doc.to_string())
}

fn consensus_check(a: ConsensusArgs, out: &mut dyn Write) -> CliResult<()> {
    let p = params_from_flags(&a.params)?;
    let s = PopulationState {
        theta_b: a.theta0[0],
        theta_r: a.theta0[1],
    };
    check_theta("theta0", &s)?;
    let ok = consensus_reachable(&s, &p)?;
    let regime = classify_regime(&p, apcascade::model::DEFAULT_REGIME_TOL)?;
    say(out, json!({ "consensus_reachable": ok, "regime": regime.label(), "theta0": s }).to_string())
}

// ------------------------------------------------------------------- sweep

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSettings {
    pub spec: SweepSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_values: Option<Vec<f64>>,
    pub out: PathBuf,
}

fn parse_axis(text: &str) -> CliResult<SweepAxis> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || usage(format!("--axis `{text}`: expected param:min:max:steps"));
    if parts.len() != 4 {
        return Err(bad());
    }
    let param: SweepParam =
        serde_json::from_value(json!(parts[0])).map_err(|_| usage(format!("--axis `{text}`: unknown parameter `{}`", parts[0])))?;
    let min = parts[1].parse().map_err(|_| bad())?;
    let max = parts[2].parse().map_err(|_| bad())?;
    let steps = parts[3].parse().map_err(|_| bad())?;
    Ok(SweepAxis::new(param, min, max, steps))
}

const REGIME_COLORS: [(&str, &str); 5] = [
    ("Case1", "#4daf4a"),
    ("Case2", "#e41a1c"),
    ("Case3", "#377eb8"),
    ("Case4", "#984ea3"),
    ("Boundary", "#222222"),
];

fn regime_index(r: Regime) -> usize {
    match r {
        Regime::Case1Consensus => 0,
        Regime::Case2RedMajorityPolarization => 1,
        Regime::Case3BlueMajorityPolarization => 2,
        Regime::Case4NonPartisan => 3,
        Regime::Boundary => 4,
    }
}

fn sweep(a: SweepArgs, out: &mut dyn Write) -> CliResult<()> {
    let mut o = Overrides::default();
    a.params.apply(&mut o, &["spec", "params"]);
    apply_theta0(&mut o, &["spec", "theta0"], &a.theta0);
    if !a.axes.is_empty() {
        let axes = a.axes.iter().map(|t| parse_axis(t)).collect::<CliResult<Vec<_>>>()?;
        o.set(&["spec", "axes"], axes);
    }
    o.set_opt(&["spec", "mode"], a.mode.map(ModeArg::key));
    o.set_opt(&["spec", "sim", "n_nodes"], a.n_nodes);
    o.set_opt(&["spec", "sim", "horizon_t"], a.horizon);
    o.set_opt(&["spec", "integration", "horizon_t"], a.horizon);
    o.set_opt(&["spec", "seed"], a.seed);
    o.set_opt(&["spec", "regime_tol"], a.tol);
    o.set_opt(&["rho_values"], a.rho_values);
    o.set_opt(&["out"], a.out);
    let defaults = [
        out_default("sweep"),
        (&["spec", "mode"][..], json!("classify")),
        (&["spec", "theta0"][..], json!(PopulationState::symmetric(0.7))),
    ];
    let s: SweepSettings = resolve(a.config.as_deref(), "sweep", &defaults, o)?;
    s.spec.validate()?;
    ensure_dir(&s.out)?;

    if let Some(rhos) = &s.rho_values {
        for (i, &r) in rhos.iter().enumerate() {
            if !(r > 0.0 && r < 1.0) {
                return Err(usage(format!("config key `rho_values[{i}]`: {r} is outside its legal range (0, 1)")));
            }
        }
        let opts = ScanOptions {
            sim: s.spec.sim,
            integration: s.spec.integration,
            seed: s.spec.seed,
        };
        let points = homophily_scan(&s.spec.params, rhos, s.spec.theta0, s.spec.mode, &opts);
        write_file(&s.out.join("scan.csv"), scan_to_csv_string(&points).as_bytes())?;
        let changes: Vec<Value> = regime_changes(&points)
            .into_iter()
            .map(|(a, b, ra, rb)| json!({ "between": [a, b], "from": ra.label(), "to": rb.label() }))
            .collect();
        let manifest = json!({ "csv": "scan.csv", "points": points.len(), "regime_changes": changes });
        write_file(&s.out.join("manifest.json"), (serde_json::to_string_pretty(&manifest).unwrap() + "\n").as_bytes())?;
        if s.spec.mode != apcascade::sweep::SweepMode::Classify {
            let pick = |k: usize| -> Vec<(f64, f64)> {
                points.iter().filter_map(|p| p.endpoint.map(|e| (p.rho, e.as_array()[k]))).collect()
            };
            let svg = line_chart(
                "endpoint against homophily",
                "rho",
                "terminal fraction holding choice 1",
                &[
                    Series { label: "blue", color: BLUE, dashed: false, points: pick(0) },
                    Series { label: "red", color: RED, dashed: false, points: pick(1) },
                ],
            );
            write_file(&s.out.join("scan.svg"), svg.as_bytes())?;
        }
        write_meta(&s.out, "sweep", &s, json!({ "base": s.spec.seed }))?;
        return say(out, manifest.to_string());
    }

    let res = phase_sweep(&s.spec)?;
    write_file(&s.out.join("sweep.csv"), res.to_csv_string().as_bytes())?;
    let manifest = res.manifest("sweep.csv");
    write_file(&s.out.join("manifest.json"), (serde_json::to_string_pretty(&manifest).unwrap() + "\n").as_bytes())?;
    if let Some(grid) = res.regime_grid() {
        let cells: Vec<Vec<Option<usize>>> =
            grid.iter().map(|col| col.iter().map(|r| r.map(regime_index)).collect()).collect();
        let (ax, ay) = (&s.spec.axes[0], &s.spec.axes[1]);
        let svg = category_heatmap(
            "regimes",
            (ax.param.name(), ax.min, ax.max),
            (ay.param.name(), ay.min, ay.max),
            &cells,
            &REGIME_COLORS,
        );
        write_file(&s.out.join("heatmap.svg"), svg.as_bytes())?;
    }
    let seeds = json!({ "base": s.spec.seed, "cells": "derive(derive(base, 4), index)" });
    write_meta(&s.out, "sweep", &s, seeds)?;
    say(
        out,
        json!({ "out": s.out, "cells": res.cells.len(), "failures": res.failures(), "regime_counts": res.regime_counts() })
            .to_string(),
    )
}

// ----------------------------------------------------------------- compare

fn compare(a: CompareArgs, out: &mut dyn Write) -> CliResult<()> {
    let ta = Trajectory::read_csv(&a.a)?;
    let tb = Trajectory::read_csv(&a.b)?;
    let d = sup_distance(&ta, &tb)?;
    say(out, format!("{d:?}"))
}

// ---------------------------------------------------------------- scenario

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSettings {
    pub name: String,
    #[serde(default)]
    pub options: ScenarioOptions,
    pub out: PathBuf,
}

fn scenario(a: ScenarioArgs, out: &mut dyn Write) -> CliResult<()> {
    if a.list {
        for n in scenario_names() {
            say(out, n)?;
        }
        return Ok(());
    }
    let mut o = Overrides::default();
    o.set_opt(&["name"], a.name.clone());
    o.set_opt(&["options", "n_nodes"], a.n_nodes);
    o.set_opt(&["options", "seed"], a.seed);
    if a.mean_field_only {
        o.set(&["options", "mean_field_only"], true);
    }
    o.set_opt(&["out"], a.out);
    let s: ScenarioSettings = resolve(a.config.as_deref(), "scenario", &[out_default("scenario")], o)?;
    let def = load_scenario(&s.name)?;
    let bundle = def.run(&s.options)?;
    ensure_dir(&s.out)?;
    let text = serde_json::to_string_pretty(&def).unwrap() + "\n";
    write_file(&s.out.join("scenario.json"), text.as_bytes())?;
    let base = s.options.seed.unwrap_or(def.seed);
    let mut run_seeds = Vec::new();
    let mut summary = Vec::new();
    for (i, run) in bundle.runs.iter().enumerate() {
        let label = &run.spec.label;
        run.mean_field.write_with_sidecar(&s.out.join(format!("{label}_mean_field.csv")))?;
        let mut plotted = Vec::new();
        if let Some(st) = &run.stochastic {
            st.write_with_sidecar(&s.out.join(format!("{label}_stochastic.csv")))?;
            plotted.push((st, ""));
            let rs = def.run_seed(base, i);
            run_seeds.push(json!({ "run": label, "seed": rs, "graph": seed::derive(rs, ROLE_GRAPH), "simulation": seed::derive(rs, ROLE_SIM) }));
        }
        plotted.push((&run.mean_field, "mean field"));
        let svg = trajectory_svg(&format!("{} / {label}", def.name), &plotted);
        write_file(&s.out.join(format!("{label}.svg")), svg.as_bytes())?;
        summary.push(json!({
            "run": label,
            "mean_field_terminal": run.mean_field.terminal(),
            "stochastic_terminal": run.stochastic.as_ref().and_then(Trajectory::terminal),
            "expected_limit": run.spec.expected_limit,
        }));
    }
    write_meta(&s.out, "scenario", &s, json!({ "base": base, "runs": run_seeds }))?;
    say(out, json!({ "out": s.out, "scenario": def.name, "runs": summary }).to_string())
}

// --------------------------------------------------------------- gen-graph

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKindSetting {
    Complete,
    Sbm,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenGraphSettings {
    pub kind: GraphKindSetting,
    pub n_blue: usize,
    pub n_red: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    pub out: PathBuf,
}

fn gen_graph(a: GenGraphArgs, out: &mut dyn Write) -> CliResult<()> {
    let mut o = Overrides::default();
    o.set_opt(
        &["kind"],
        a.kind.map(|k| match k {
            GraphKind::Complete => "complete",
            GraphKind::Sbm => "sbm",
        }),
    );
    o.set_opt(&["n_blue"], a.n_blue);
    o.set_opt(&["n_red"], a.n_red);
    o.set_opt(&["rho"], a.rho);
    o.set_opt(&["seed"], a.seed);
    o.set_opt(&["out"], a.out);
    let s: GenGraphSettings = resolve(a.config.as_deref(), "gen-graph", &[out_default("gen-graph")], o)?;
    let graph_seed = seed::derive(s.seed, ROLE_GRAPH);
    let net = match s.kind {
        GraphKindSetting::Complete => generate_complete(s.n_blue, s.n_red)?,
        GraphKindSetting::Sbm => {
            let rho = s.rho.ok_or_else(|| usage("config key `rho`: required for kind `sbm`"))?;
            if !(rho > 0.0 && rho < 1.0) {
                return Err(usage(format!("config key `rho`: {rho} is outside its legal range (0, 1)")));
            }
            generate_sbm(s.n_blue, s.n_red, rho, graph_seed)?
        }
    };
    ensure_dir(&s.out)?;
    let (e, p) = network_paths(&s.out);
    save_network(&net, &e, &p)?;
    let seeds = match s.kind {
        GraphKindSetting::Sbm => json!({ "base": s.seed, "graph": graph_seed }),
        GraphKindSetting::Complete => json!({ "base": s.seed }),
    };
    write_meta(&s.out, "gen-graph", &s, seeds)?;
    say(out, summary(&net, &s.out.join("edges.txt")).to_string())
}

fn summary(net: &Network, source: &Path) -> Value {
    let degrees: Vec<usize> = (0..net.len()).map(|v| net.degree(v)).collect();
    let (e_in, e_cross) = net.edge_split();
    json!({
        "source": source,
        "nodes": net.len(),
        "n_blue": net.n_blue(),
        "n_red": net.n_red(),
        "edges": e_in + e_cross,
        "in_group_edges": e_in,
        "cross_group_edges": e_cross,
        "homophily_estimate": homophily_estimate(net).ok(),
        "min_degree": degrees.iter().min(),
        "max_degree": degrees.iter().max(),
        "mean_degree": degrees.iter().sum::<usize>() as f64 / net.len() as f64,
        "isolated_nodes": degrees.iter().filter(|&&d| d == 0).count(),
    })
}

fn inspect_graph(a: InspectGraphArgs, out: &mut dyn Write) -> CliResult<()> {
    let net = load_network(&a.edges, &a.parties)?;
    say(out, summary(&net, &a.edges).to_string())
}
