//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use apcascade::graph::generate_complete;
use apcascade::meanfield::{integrate, stability_probe, sup_distance, IntegrationConfig, Stability};
use apcascade::model::{
    classify_regime, consensus_reachable, effective_couplings, predict_limit_symmetric, ModelParams, PopulationState,
    Regime, Topology, DEFAULT_REGIME_TOL,
};
use apcascade::scenario::{has_interior_maximum, load_scenario, ScenarioOptions};
use apcascade::seed;
use apcascade::sim::{InitMode, Simulation};
use apcascade::sweep::{phase_sweep, SweepAxis, SweepMode, SweepParam, SweepSpec};
use rand::Rng;

type Outcome = Result<String, String>;

const MARGIN: f64 = 1e-3;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Independent regime from the signs of the two symmetric-start indicator
/// slopes. `None` within `MARGIN` of a boundary.
fn regime_of(p: &ModelParams) -> Option<Regime> {
    let e = effective_couplings(p);
    let r = p.red_fraction();
    let blue = e.alpha_eff * (1.0 - r) - e.beta_eff * r;
    let red = e.alpha_eff * r - e.beta_eff * (1.0 - r);
    if blue.abs() < MARGIN || red.abs() < MARGIN {
        return None;
    }
    Some(match (blue > 0.0, red > 0.0) {
        (true, true) => Regime::Case1Consensus,
        (false, true) => Regime::Case2RedMajorityPolarization,
        (true, false) => Regime::Case3BlueMajorityPolarization,
        (false, false) => Regime::Case4NonPartisan,
    })
}

fn random_params(rng: &mut impl Rng) -> ModelParams {
    let alpha = rng.gen_range(0.0..=1.0);
    let beta = rng.gen_range(0.0..=1.0);
    let r = rng.gen_range(0.02..0.98);
    if rng.gen_bool(0.5) {
        ModelParams::fully_connected(alpha, beta, r).unwrap()
    } else {
        ModelParams::stochastic_block(alpha, beta, r, rng.gen_range(0.05..0.95)).unwrap()
    }
}

fn random_theta(rng: &mut impl Rng) -> f64 {
    loop {
        let t: f64 = rng.gen_range(0.01..0.99);
        if (t - 0.5).abs() >= MARGIN {
            return t;
        }
    }
}

fn symmetric_limits() -> Outcome {
    const PER_CASE: usize = 1000;
    let mut rng = seed::rng(101);
    let cfg = IntegrationConfig::default();
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut worst = 0.0f64;
    while counts.values().sum::<usize>() < 4 * PER_CASE {
        let p = random_params(&mut rng);
        let Some(regime) = regime_of(&p) else { continue };
        let n = counts.entry(regime.label()).or_default();
        if *n >= PER_CASE {
            continue;
        }
        *n += 1;
        let theta0 = random_theta(&mut rng);
        let classified = classify_regime(&p, DEFAULT_REGIME_TOL).map_err(|e| e.to_string())?;
        check(classified == regime, format!("{p:?}: classified {classified:?}, expected {regime:?}"))?;
        let want = predict_limit_symmetric(theta0, &p).map_err(|e| e.to_string())?;
        let got = integrate(PopulationState::symmetric(theta0), &p, &cfg)
            .map_err(|e| e.to_string())?
            .terminal()
            .unwrap();
        let d = got.sup_norm_distance(&want);
        worst = worst.max(d);
        check(d <= 1e-6, format!("{p:?} from {theta0}: got {got:?}, predicted {want:?}"))?;
    }
    Ok(format!("{counts:?} draws, worst gap {worst:.1e}"))
}

fn consensus_iff() -> Outcome {
    const DRAWS: usize = 1000;
    let mut rng = seed::rng(202);
    let cfg = IntegrationConfig::default();
    let (mut agree, mut positive, mut in_case1) = (0, 0, 0);
    let mut drawn = 0;
    while drawn < DRAWS {
        let p = random_params(&mut rng);
        let Some(regime) = regime_of(&p) else { continue };
        // Half the draws come from the consensus regime, where the answer
        // depends on the start.
        let want_case1 = drawn % 2 == 0;
        if (regime == Regime::Case1Consensus) != want_case1 {
            continue;
        }
        let s = PopulationState::new(random_theta(&mut rng), random_theta(&mut rng));
        if (s.theta_b - s.theta_r).abs() < MARGIN {
            continue;
        }
        // Keep clear of the tipping loci through the start.
        let e = effective_couplings(&p);
        let r = p.red_fraction();
        let (xb, xr) = (2.0 * s.theta_b - 1.0, 2.0 * s.theta_r - 1.0);
        let arg_b = e.alpha_eff * (1.0 - r) * xb - e.beta_eff * r * xr;
        let arg_r = e.alpha_eff * r * xr - e.beta_eff * (1.0 - r) * xb;
        if arg_b.abs() < MARGIN || arg_r.abs() < MARGIN {
            continue;
        }
        drawn += 1;
        if want_case1 {
            in_case1 += 1;
        }
        let predicted = consensus_reachable(&s, &p).map_err(|e| e.to_string())?;
        let end = integrate(s, &p, &cfg).map_err(|e| e.to_string())?.terminal().unwrap();
        let corner = end.sup_norm_distance(&PopulationState::new(1.0, 1.0)) <= 1e-6
            || end.sup_norm_distance(&PopulationState::new(0.0, 0.0)) <= 1e-6;
        if predicted {
            positive += 1;
        }
        if predicted == corner {
            agree += 1;
        } else {
            return Err(format!("{p:?} from {s:?}: predicted {predicted}, ended at {end:?}"));
        }
    }
    Ok(format!("{agree}/{DRAWS} agree ({in_case1} consensus-regime draws, {positive} reach consensus)"))
}

fn phase_diagram() -> Outcome {
    const N: usize = 100;
    let base = ModelParams::fully_connected(0.5, 0.5, 0.5).unwrap();
    // The y range is offset by less than one grid spacing so no point lands
    // exactly on the diagonal.
    let spec = SweepSpec::new(base, PopulationState::symmetric(0.7), SweepMode::Classify)
        .with_axis(SweepAxis::new(SweepParam::LoveHateRatio, 0.2, 4.0, N))
        .with_axis(SweepAxis::new(SweepParam::RedOdds, 0.2137, 4.0137, N));
    let res = phase_sweep(&spec).map_err(|e| e.to_string())?;
    check(res.cells.len() == N * N, "wrong cell count")?;
    let mut grid = vec![vec![Regime::Boundary; N]; N];
    let mut xy = vec![vec![(0.0, 0.0); N]; N];
    for cell in &res.cells {
        let (i, j) = (cell.index / N, cell.index % N);
        let regime = cell
            .outcome
            .as_ref()
            .map_err(|e| format!("cell {} failed: {e}", cell.index))?
            .regime
            .ok_or("classify cell without a regime")?;
        grid[i][j] = regime;
        xy[i][j] = (cell.coords[0], cell.coords[1]);
    }
    let mut labels: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, row) in grid.iter().enumerate() {
        for (j, &g) in row.iter().enumerate() {
            let (x, y) = xy[i][j];
            check(g != Regime::Boundary, format!("boundary cell at ({x}, {y})"))?;
            // Independent classification in ratio coordinates.
            let want = match (x > y, x * y > 1.0) {
                (true, true) => Regime::Case1Consensus,
                (false, true) => Regime::Case2RedMajorityPolarization,
                (true, false) => Regime::Case3BlueMajorityPolarization,
                (false, false) => Regime::Case4NonPartisan,
            };
            check(g == want, format!("({x}, {y}): {g:?} but the curves give {want:?}"))?;
            check(!(g == Regime::Case1Consensus && x < 1.0), format!("consensus cell left of 1 at ({x}, {y})"))?;
            *labels.entry(g.label()).or_default() += 1;
        }
    }
    // Adjacent cells with different labels must straddle y = x or y = 1/x.
    for i in 0..N {
        for j in 0..N {
            for (k, l) in [(i + 1, j), (i, j + 1)] {
                if k < N && l < N && grid[i][j] != grid[k][l] {
                    let (a, b) = (xy[i][j], xy[k][l]);
                    let diag = (a.1 > a.0) != (b.1 > b.0);
                    let hyper = (a.0 * a.1 > 1.0) != (b.0 * b.1 > 1.0);
                    check(diag || hyper, format!("label change between {a:?} and {b:?} off both curves"))?;
                }
            }
        }
    }
    let regions = components(&grid);
    check(regions == 4, format!("{regions} connected regions"))?;
    check(labels.len() == 4, format!("labels present: {labels:?}"))?;
    Ok(format!("{regions} regions, cells per regime {labels:?}"))
}

/// Number of 4-connected same-label regions.
fn components(grid: &[Vec<Regime>]) -> usize {
    let (nx, ny) = (grid.len(), grid[0].len());
    let mut seen = vec![vec![false; ny]; nx];
    let mut count = 0;
    for i in 0..nx {
        for j in 0..ny {
            if seen[i][j] {
                continue;
            }
            count += 1;
            seen[i][j] = true;
            let mut stack = vec![(i, j)];
            while let Some((a, b)) = stack.pop() {
                let mut nbrs = vec![];
                if a > 0 {
                    nbrs.push((a - 1, b));
                }
                if b > 0 {
                    nbrs.push((a, b - 1));
                }
                if a + 1 < nx {
                    nbrs.push((a + 1, b));
                }
                if b + 1 < ny {
                    nbrs.push((a, b + 1));
                }
                for (c, d) in nbrs {
                    if !seen[c][d] && grid[c][d] == grid[a][b] {
                        seen[c][d] = true;
                        stack.push((c, d));
                    }
                }
            }
        }
    }
    count
}

fn homophily_flip() -> Outcome {
    let bundle = load_scenario("homophily-flip")
        .and_then(|s| s.run(&ScenarioOptions { n_nodes: Some(10_000), ..Default::default() }))
        .map_err(|e| e.to_string())?;
    let mut detail = Vec::new();
    for run in &bundle.runs {
        let want = run.spec.expected_limit.ok_or("scenario run without a limit")?;
        let mf = run.mean_field.terminal().unwrap();
        check(mf.sup_norm_distance(&want) <= 1e-6, format!("{}: mean field ends at {mf:?}", run.spec.label))?;
        let st = run.stochastic.as_ref().ok_or("missing stochastic run")?;
        let d = sup_distance(st, &run.mean_field).map_err(|e| e.to_string())?;
        let end = st.terminal().unwrap().sup_norm_distance(&want);
        check(d <= 0.05, format!("{}: sup distance {d:.4}", run.spec.label))?;
        check(end <= 0.05, format!("{}: stochastic endpoint off by {end:.4}", run.spec.label))?;
        detail.push(format!("{} sup {d:.4}", run.spec.label));
    }
    let low = ModelParams::stochastic_block(0.8, 0.7, 0.65, 0.3).unwrap();
    check(low.topology() == Topology::StochasticBlock, "topology")?;
    let regime = classify_regime(&low, DEFAULT_REGIME_TOL).map_err(|e| e.to_string())?;
    check(regime == Regime::Case4NonPartisan, format!("rho 0.3 classified {regime:?}"))?;
    let stab = stability_probe(&PopulationState::symmetric(0.5), &low, 1e-3).map_err(|e| e.to_string())?;
    check(stab == Stability::Unstable, format!("rho 0.3 centre is {stab:?}"))?;
    detail.push("rho-0.3 Case4, centre unstable".into());
    Ok(detail.join(", "))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn convergence() -> Outcome {
    let p = ModelParams::fully_connected(0.8, 0.7, 0.5).unwrap();
    let theta0 = PopulationState::symmetric(0.7);
    let mf = integrate(theta0, &p, &IntegrationConfig::default()).map_err(|e| e.to_string())?;
    let mut medians = Vec::new();
    for n in [1000usize, 10_000] {
        let net = generate_complete(n / 2, n / 2).map_err(|e| e.to_string())?;
        let base = seed::derive(505, n as u64);
        let d: Vec<f64> = (0..10u64)
            .map(|i| {
                let mut sim = Simulation::new(&net, p, theta0, InitMode::Quota, seed::derive(base, i));
                let traj = sim.run(30.0, (n / 100) as u64);
                sup_distance(&traj, &mf).unwrap()
            })
            .collect();
        medians.push(median(d));
    }
    let (m1, m10) = (medians[0], medians[1]);
    check(m1 > m10, format!("median at 1000 ({m1:.4}) does not exceed median at 10000 ({m10:.4})"))?;
    check(m10 <= 0.05, format!("median at 10000 is {m10:.4}"))?;
    Ok(format!("median sup distance {m1:.4} at N=1000, {m10:.4} at N=10000"))
}

fn expected_step() -> Outcome {
    let net = generate_complete(500, 500).map_err(|e| e.to_string())?;
    let p = ModelParams::fully_connected(0.8, 0.7, 0.5).unwrap();
    let mut sim = Simulation::new(&net, p, PopulationState::symmetric(0.7), InitMode::Quota, 606);
    let est = sim.expected_step(100_000);
    let want = 0.3 / 1000.0;
    for i in 0..2 {
        let z = (est.mean[i] - want) / est.std_err[i];
        check(z.abs() <= 3.0, format!("component {i}: {:.3e} vs {want:.1e} ({z:.2} SE)", est.mean[i]))?;
    }
    Ok(format!("mean step ({:.3e}, {:.3e}) vs {want:.1e}", est.mean[0], est.mean[1]))
}

fn tipping() -> Outcome {
    let opts = ScenarioOptions { n_nodes: Some(10_000), ..Default::default() };
    let mut detail = Vec::new();
    for (name, corner) in [("tipping-minority-flip", (0.0, 1.0)), ("majority-flip", (1.0, 0.0))] {
        let bundle = load_scenario(name).and_then(|s| s.run(&opts)).map_err(|e| e.to_string())?;
        let run = &bundle.runs[0];
        let want = PopulationState::new(corner.0, corner.1);
        let mf = run.mean_field.terminal().unwrap();
        check(mf.sup_norm_distance(&want) <= 1e-6, format!("{name}: mean field ends at {mf:?}"))?;
        if name == "majority-flip" {
            let s0 = run.mean_field.first().unwrap().state;
            check(
                s0 == PopulationState::new(0.9, 0.6) && run.spec.params.red_fraction() == 0.6,
                "majority-flip start or size changed",
            )?;
        } else {
            let blue: Vec<f64> = run.mean_field.samples.iter().map(|s| s.state.theta_b).collect();
            check(has_interior_maximum(&blue), format!("{name}: no interior maximum in blue"))?;
        }
        let st = run.stochastic.as_ref().ok_or("missing stochastic run")?.terminal().unwrap();
        let d = st.sup_norm_distance(&want);
        check(d <= 0.05, format!("{name}: stochastic endpoint {st:?}"))?;
        detail.push(format!("{name} stochastic endpoint off by {d:.4}"));
    }
    Ok(detail.join(", "))
}

fn csv_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| {
            let path = e.unwrap().path();
            let name = path.file_name()?.to_str()?.to_string();
            (name.ends_with(".csv") || name.ends_with(".txt")).then(|| (name, fs::read(&path).unwrap()))
        })
        .collect()
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_apcascade");
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let invocations: &[&[&str]] = &[
        &["integrate", "--alpha", "0.8", "--beta", "0.7", "--r", "0.65", "--theta0", "0.68", "0.6"],
        &["simulate", "--alpha", "0.8", "--beta", "0.7", "--r", "0.5", "--theta0", "0.7", "0.7", "--n", "2000", "--horizon", "5"],
        &["simulate", "--alpha", "0.8", "--beta", "0.7", "--r", "0.4", "--rho", "0.6", "--theta0", "0.7", "--n", "400", "--horizon", "3", "--replicas", "4", "--seed", "9"],
        &["sweep", "--alpha", "0.8", "--beta", "0.7", "--r", "0.5", "--mode", "simulate-endpoint", "--axis", "alpha:0.2:1:4", "--axis", "red_fraction:0.3:0.7:3", "--n", "200", "--horizon", "3"],
        &["sweep", "--alpha", "0.8", "--beta", "0.7", "--r", "0.65", "--rho-values", "0.7,0.5,0.3", "--mode", "integrate-endpoint"],
        &["scenario", "tipping-minority-flip", "--n", "1000"],
        &["gen-graph", "--kind", "sbm", "--n-blue", "100", "--n-red", "80", "--rho", "0.65", "--seed", "4"],
    ];
    let mut files = 0;
    for (k, args) in invocations.iter().enumerate() {
        let first = tmp.path().join(format!("{k}-a"));
        let second = tmp.path().join(format!("{k}-b"));
        let o = Command::new(bin).args(*args).arg("--out").arg(&first).output().map_err(|e| e.to_string())?;
        check(o.status.success(), format!("{args:?} failed: {}", String::from_utf8_lossy(&o.stderr)))?;
        let o = Command::new(bin)
            .args(["--jobs", "1", args[0], "--config"])
            .arg(first.join("meta.json"))
            .arg("--out")
            .arg(&second)
            .output()
            .map_err(|e| e.to_string())?;
        check(o.status.success(), format!("re-run of {} failed: {}", args[0], String::from_utf8_lossy(&o.stderr)))?;
        let (a, b) = (csv_files(&first), csv_files(&second));
        check(!a.is_empty(), format!("{} wrote no data files", args[0]))?;
        check(a == b, format!("re-run of {args:?} differs"))?;
        files += a.len();
    }
    Ok(format!("{} invocations, {files} files byte-identical", invocations.len()))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 8] = [
        ("symmetric-start limits match the regime prediction", symmetric_limits, Duration::from_secs(30)),
        ("consensus reachable iff the integrator reaches a corner", consensus_iff, Duration::from_secs(60)),
        ("phase diagram has four regions on the two curves", phase_diagram, Duration::from_secs(5)),
        ("homophily flip", homophily_flip, Duration::from_secs(60)),
        ("agent engine converges to the mean field", convergence, Duration::from_secs(300)),
        ("expected one-step change", expected_step, Duration::from_secs(30)),
        ("tipping scenarios", tipping, Duration::from_secs(60)),
        ("re-run from meta.json is byte-identical", determinism, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (k, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if took <= *budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; took {took:.1?}, budget {budget:?}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} {}. {name}: {detail} [{took:.2?}]", k + 1);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
