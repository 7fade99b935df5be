use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::behavior::BehaviorModel;
use crate::error::RunError;
use crate::mission::{generate_mission, EnvConfig, SeedStream, SiteTruth};
use crate::planner::{backward_induction, PolicySolution};
use crate::simulator::{run_monte_carlo, simulate_episodes, summarize, AggregateStats, ScenarioConfig};
use crate::trust::TrustParams;

use super::config::RunConfig;
use super::export::{export_policy_grids, stats_row, write_episode_logs, write_mission, write_stats};

/// Environment variable overriding the worker count. Unset means one worker per core.
pub const WORKERS_ENV: &str = "TRUST_POMDP_WORKERS";

/// Runs `f` on a dedicated rayon pool. `workers` wins over the environment
/// variable; zero or neither means auto-detect.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, RunError> {
    let n = match workers {
        Some(n) => n,
        None => match std::env::var(WORKERS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| RunError::Pool(format!("{WORKERS_ENV}={v} is not a worker count")))?,
            Err(_) => 0,
        },
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| RunError::Pool(e.to_string()))?;
    Ok(pool.install(f))
}

/// Planner condition: assumed behavior model and reward function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Condition {
    pub assumed_model: BehaviorModel,
    pub trust_seeking: bool,
}

impl Condition {
    pub const ALL: [Condition; 4] = [
        Condition {
            assumed_model: BehaviorModel::ReversePsychology,
            trust_seeking: false,
        },
        Condition {
            assumed_model: BehaviorModel::ReversePsychology,
            trust_seeking: true,
        },
        Condition {
            assumed_model: BehaviorModel::Disuse,
            trust_seeking: false,
        },
        Condition {
            assumed_model: BehaviorModel::Disuse,
            trust_seeking: true,
        },
    ];

    pub fn label(&self) -> String {
        let reward = if self.trust_seeking { "trust_seeking" } else { "task" };
        format!("{}_{}", self.assumed_model, reward)
    }

    pub fn apply(&self, scenario: &ScenarioConfig) -> ScenarioConfig {
        let mut s = *scenario;
        s.assumed_model = self.assumed_model;
        s.reward_spec.trust_seeking = self.trust_seeking;
        s
    }
}

fn fixed_mission(cfg: &RunConfig) -> Result<Vec<SiteTruth>, RunError> {
    let env = &cfg.scenario.env;
    Ok(generate_mission(env, &SeedStream::new(env.seed))?)
}

fn solve_on_grid(cfg: &RunConfig, scenario: &ScenarioConfig, mission: &[SiteTruth], site: usize) -> Result<PolicySolution, RunError> {
    let problem = scenario.problem_at(mission, site)?;
    Ok(backward_induction(&problem, &cfg.lattice())?)
}

/// Solves the configured scenario at `site` of the fixed-seed mission and
/// writes its policy grid and the mission dump.
pub fn run_solve(cfg: &RunConfig, site: usize, out: &Path) -> Result<Vec<PathBuf>, RunError> {
    let mission = fixed_mission(cfg)?;
    let solution = solve_on_grid(cfg, &cfg.scenario, &mission, site)?;
    let grid_path = out.join(format!("policy_site{site:02}.csv"));
    export_policy_grids(&solution, site, &grid_path)?;
    let mission_path = out.join("mission.csv");
    write_mission(&mission, &mission_path)?;
    Ok(vec![grid_path, mission_path])
}

/// Runs the scenario's Monte Carlo episodes, writing `episodes.csv` and `summary.csv`.
pub fn run_simulate(cfg: &RunConfig, out: &Path) -> Result<AggregateStats, RunError> {
    let logs = simulate_episodes(&cfg.scenario)?;
    let stats = summarize(&logs)?;
    write_episode_logs(&logs, out.join("episodes.csv"))?;
    write_stats(&[stats_row("0", &cfg.scenario, &stats)], out.join("summary.csv"))?;
    Ok(stats)
}

#[derive(Debug, Clone)]
pub struct Exp1Output {
    /// `(condition, site, file)` in manifest order.
    pub files: Vec<(Condition, usize, PathBuf)>,
    pub manifest: PathBuf,
}

/// Solves every planner condition at the configured sites of one fixed-seed
/// mission and writes one policy grid per (condition, site) plus a manifest.
pub fn run_experiment1(cfg: &RunConfig, out: &Path) -> Result<Exp1Output, RunError> {
    let mission = fixed_mission(cfg)?;
    let dir = out.join("exp1");
    write_mission(&mission, dir.join("mission.csv"))?;
    let sites = cfg.grid.export_sites(cfg.scenario.env.n_sites);
    let jobs: Vec<(Condition, usize)> = Condition::ALL
        .iter()
        .flat_map(|c| sites.iter().map(move |&s| (*c, s)))
        .collect();
    let files = jobs
        .par_iter()
        .map(|&(cond, site)| {
            let scenario = cond.apply(&cfg.scenario);
            let solution = solve_on_grid(cfg, &scenario, &mission, site)?;
            let name = format!("{}_site{:02}.csv", cond.label(), site);
            export_policy_grids(&solution, site, dir.join(&name))?;
            Ok((cond, site, PathBuf::from(name)))
        })
        .collect::<Result<Vec<_>, RunError>>()?;

    let mut manifest = String::from("condition,assumed_model,reward,site,file\n");
    for (cond, site, name) in &files {
        manifest.push_str(&format!(
            "{},{},{},{},{}\n",
            cond.label(),
            cond.assumed_model,
            if cond.trust_seeking { "trust_seeking" } else { "task" },
            site,
            name.display()
        ));
    }
    let manifest_path = dir.join("manifest.csv");
    std::fs::write(&manifest_path, manifest).map_err(|e| RunError::io(&manifest_path, e))?;
    Ok(Exp1Output {
        files: files.into_iter().map(|(c, s, n)| (c, s, dir.join(n))).collect(),
        manifest: manifest_path,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exp2Cell {
    pub index: usize,
    pub scenario: ScenarioConfig,
}

/// The 32 cells of the factorial sweep: reward x assumed model x actual model
/// x initial belief x (kappa1, kappa2). Each cell gets its own seed derived
/// from the master seed and its index.
pub fn exp2_cells(cfg: &RunConfig) -> Vec<Exp2Cell> {
    let base = cfg.scenario;
    let root = SeedStream::new(base.master_seed);
    let mut cells = Vec::with_capacity(32);
    for trust_seeking in [false, true] {
        for assumed in BehaviorModel::ALL {
            for actual in BehaviorModel::ALL {
                for (alpha1, beta1) in [(100.0, 50.0), (50.0, 100.0)] {
                    for (kappa1, kappa2) in [(2.0, 2.0), (2.0, 50.0)] {
                        let index = cells.len();
                        let mut s = base;
                        s.reward_spec.trust_seeking = trust_seeking;
                        s.assumed_model = assumed;
                        s.actual_model = actual;
                        s.trust_params = TrustParams {
                            alpha_init: alpha1,
                            beta_init: beta1,
                            ..base.trust_params
                        };
                        s.env = EnvConfig {
                            kappa1,
                            kappa2,
                            ..base.env
                        };
                        s.master_seed = root.child(index as u64).key();
                        cells.push(Exp2Cell { index, scenario: s });
                    }
                }
            }
        }
    }
    cells
}

#[derive(Debug, Clone)]
pub struct Exp2Output {
    pub rows: Vec<(Exp2Cell, AggregateStats)>,
    pub results: PathBuf,
}

/// Runs the full sweep. Cells write their own row file; the merged table is
/// `exp2/results.csv`.
pub fn run_experiment2(cfg: &RunConfig, out: &Path) -> Result<Exp2Output, RunError> {
    let dir = out.join("exp2");
    let cells = exp2_cells(cfg);
    let rows = cells
        .par_iter()
        .map(|cell| {
            let stats = run_monte_carlo(&cell.scenario)?;
            let row = stats_row(&cell.index.to_string(), &cell.scenario, &stats);
            write_stats(&[row], dir.join("cells").join(format!("cell_{:02}.csv", cell.index)))?;
            eprintln!(
                "cell {:02} done: J_m = {:.1}, final trust = {:.3}",
                cell.index, stats.mean_reward, stats.mean_final_trust
            );
            Ok((*cell, stats))
        })
        .collect::<Result<Vec<_>, RunError>>()?;
    let lines: Vec<String> = rows
        .iter()
        .map(|(c, s)| stats_row(&c.index.to_string(), &c.scenario, s))
        .collect();
    let results = dir.join("results.csv");
    write_stats(&lines, &results)?;
    Ok(Exp2Output { rows, results })
}
